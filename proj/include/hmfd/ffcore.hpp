#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hmfd/intpoly.hpp"

namespace hmfd {

/// F_q for a prime q < 2^31. Primality is verified at construction.
struct PrimeField {
  uint32_t q;

  explicit PrimeField(uint64_t q_);
  uint64_t add(uint64_t a, uint64_t b) const { return (a + b) % q; }
  uint64_t sub(uint64_t a, uint64_t b) const { return (a + q - b) % q; }
  uint64_t mul(uint64_t a, uint64_t b) const { return a * b % q; }
  uint64_t neg(uint64_t a) const { return a ? q - a : 0; }
  uint64_t inv(uint64_t a) const;
  uint64_t pow(uint64_t a, uint64_t e) const;
};

/// Polynomial over F_q, little-endian residues, no trailing zeros.
/// The workhorse behind irreducibility tests, DDF and the number-field
/// machinery; normalized so that value semantics give structural equality.
struct ModPoly {
  PrimeField fp;
  std::vector<uint64_t> c;

  explicit ModPoly(PrimeField f) : fp(f) {}
  ModPoly(PrimeField f, std::vector<uint64_t> coeffs);
  static ModPoly from_int_poly(const IntPoly& p, PrimeField f);
  static ModPoly x(PrimeField f) { return ModPoly(f, {0, 1}); }

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  uint64_t coeff(int i) const { return (i >= 0 && i < static_cast<int>(c.size())) ? c[i] : 0; }

  ModPoly operator+(const ModPoly& o) const;
  ModPoly operator-(const ModPoly& o) const;
  ModPoly operator*(const ModPoly& o) const;
  bool operator==(const ModPoly& o) const { return fp.q == o.fp.q && c == o.c; }

  ModPoly rem(const ModPoly& mod) const;
  ModPoly monic() const;
  uint64_t eval(uint64_t x) const;
};

ModPoly gcd(ModPoly a, ModPoly b);
/// base^e mod m, e arbitrary-precision.
ModPoly powmod(const ModPoly& base, const Int& e, const ModPoly& m);
/// Quotient of exact division (throws if not exact).
ModPoly divexact(const ModPoly& a, const ModPoly& b);
/// Inverse of a modulo m; throws if gcd(a, m) != 1.
ModPoly invmod(const ModPoly& a, const ModPoly& m);

/// True iff p (over the prime field f) has no nontrivial factorization,
/// by the distinct-degree criterion gcd(x^{q^i} - x, p).
bool is_irreducible(const ModPoly& p);

/// Distinct-degree census of m mod p: pairs (degree r, number of irreducible
/// degree-r factors), ascending in r. Requires m mod p squarefree; throws a
/// BadPrimeError naming p otherwise.
std::vector<std::pair<int, int>> ddf_degrees(const IntPoly& m, uint32_t p);

struct BadPrimeError : std::runtime_error {
  uint32_t p;
  explicit BadPrimeError(uint32_t p_);
};

class ExtFieldElem;

/// F_{q^d}, presented as F_q[x]/(modulus) with the lexicographically least
/// monic irreducible modulus of degree d; deterministic across runs.
class ExtField {
 public:
  ExtField() = default;

  PrimeField base() const { return data_->base; }
  int degree() const { return data_->degree; }
  uint64_t cardinality() const { return data_->card; }
  const std::vector<uint64_t>& modulus() const { return data_->modulus; }
  bool same_field(const ExtField& o) const { return data_ == o.data_; }
  bool valid() const { return data_ != nullptr; }

  ExtFieldElem zero() const;
  ExtFieldElem one() const;
  ExtFieldElem from_base(uint64_t v) const;
  /// Elements indexed 0..q^d-1 by base-q digits of the index (little-endian).
  ExtFieldElem element(uint64_t index) const;
  uint64_t index_of(const ExtFieldElem& e) const;
  /// A fixed generator of the unit group (least index whose order is q^d-1).
  ExtFieldElem unit_generator() const;

 private:
  friend ExtField make_ext_field(uint64_t q, int d);
  friend class ExtFieldElem;
  struct Data {
    PrimeField base;
    int degree;
    uint64_t card;
    std::vector<uint64_t> modulus;
  };
  std::shared_ptr<const Data> data_;
};

/// Element of an ExtField in power-basis coordinates.
class ExtFieldElem {
 public:
  ExtFieldElem() = default;
  ExtFieldElem(ExtField f, std::vector<uint64_t> coords);

  const ExtField& field() const { return field_; }
  const std::vector<uint64_t>& coords() const { return coords_; }
  bool is_zero() const;

  ExtFieldElem operator+(const ExtFieldElem& o) const;
  ExtFieldElem operator-(const ExtFieldElem& o) const;
  ExtFieldElem operator*(const ExtFieldElem& o) const;
  ExtFieldElem operator-() const;
  bool operator==(const ExtFieldElem& o) const;

  ExtFieldElem inverse() const;
  ExtFieldElem pow(uint64_t e) const;
  /// Multiplicative order (throws on zero).
  uint64_t order() const;
  /// True iff the element lies in the subfield F_{q^r}, r | d.
  bool in_subfield(int r) const;
  std::string to_string() const;

 private:
  ExtField field_;
  std::vector<uint64_t> coords_;
};

/// Constructs F_{q^d}; requires q prime, d >= 1 and q^d <= 2^20.
ExtField make_ext_field(uint64_t q, int d);

/// e^{q^i}; i = 0 is the identity.
ExtFieldElem frobenius_power(const ExtFieldElem& e, int i);

}  // namespace hmfd
