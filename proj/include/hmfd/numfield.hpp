#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hmfd/intpoly.hpp"

namespace hmfd {

class NFElem;
class FieldAutomorphism;

/// Q[x]/(m(x)) for a monic squarefree integer polynomial m. Immutable after
/// construction; the automorphism list is computed on first use and cached.
class NumberField {
 public:
  NumberField() = default;

  const IntPoly& minpoly() const;
  int degree() const;
  /// Real places of the defining polynomial (Sturm count, exact).
  int real_root_count() const;
  /// True when some prime p < 100 witnessed irreducibility of minpoly mod p.
  bool certified_irreducible() const;
  bool same_field(const NumberField& o) const { return data_ == o.data_; }
  bool valid() const { return data_ != nullptr; }

  NFElem zero() const;
  NFElem one() const;
  NFElem from_rational(const Rat& r) const;
  NFElem generator() const;
  NFElem element(std::vector<Rat> coords) const;

  /// All automorphisms (degree <= 8), identity first, deterministic order.
  const std::vector<FieldAutomorphism>& automorphisms() const;
  bool is_galois() const;

 private:
  friend NumberField make_number_field(const IntPoly& m);
  struct Data;
  std::shared_ptr<Data> data_;
};

/// Element of a NumberField in power-basis coordinates (exact rationals).
class NFElem {
 public:
  NFElem() = default;
  NFElem(NumberField k, std::vector<Rat> coords);

  const NumberField& parent() const { return field_; }
  const std::vector<Rat>& coords() const { return coords_; }
  bool is_zero() const;
  bool is_rational() const;
  /// Value as a rational; throws unless is_rational().
  Rat rational_value() const;

  NFElem operator+(const NFElem& o) const;
  NFElem operator-(const NFElem& o) const;
  NFElem operator*(const NFElem& o) const;
  NFElem operator-() const;
  bool operator==(const NFElem& o) const;

  NFElem scaled(const Rat& r) const;
  NFElem inverse() const;
  NFElem pow(unsigned e) const;

  /// "[a0, a1/2, ...]" in the power basis.
  std::string to_string() const;

 private:
  NumberField field_;
  std::vector<Rat> coords_;
};

/// Automorphism of a NumberField, stored as the image of the generator.
class FieldAutomorphism {
 public:
  FieldAutomorphism() = default;
  FieldAutomorphism(NumberField k, NFElem generator_image);

  const NumberField& parent() const { return field_; }
  const NFElem& generator_image() const { return image_; }
  bool is_identity() const;

  NFElem apply(const NFElem& e) const;
  FieldAutomorphism compose(const FieldAutomorphism& inner) const;
  FieldAutomorphism inverse() const;
  int order() const;
  bool operator==(const FieldAutomorphism& o) const;

 private:
  NumberField field_;
  NFElem image_;
};

/// Subfield of a NumberField, presented by a primitive generator.
struct Subfield {
  NumberField ambient;
  NFElem generator;
  int degree = 0;
};

/// Constructs Q[x]/(m). Rejects non-monic, non-squarefree input and (for
/// degree > 1) polynomials with a rational root, naming the witness.
NumberField make_number_field(const IntPoly& m);

/// Least-degree primitive integer polynomial annihilating e (monic exactly
/// when e is an algebraic integer).
IntPoly minimal_polynomial(const NFElem& e);

/// All roots of k's minpoly inside k; equals NumberField::automorphisms.
std::vector<FieldAutomorphism> automorphisms(const NumberField& k);

/// Coordinates of e in the power basis of s.generator, if e lies in s.
std::optional<std::vector<Rat>> subfield_membership(const NFElem& e, const Subfield& s);

/// Fixed field of the subgroup generated by gamma_set (ambient Galois).
Subfield fixed_field(const NumberField& k, const std::vector<FieldAutomorphism>& gamma_set);

bool is_totally_real(const NumberField& k);

/// True for the CM shape: even degree, not totally real, with a central
/// order-2 automorphism whose fixed field is totally real of index 2.
bool is_cm_field(const NumberField& k);

/// For a CM field, the complex-conjugation automorphism; throws otherwise.
FieldAutomorphism cm_conjugation(const NumberField& k);

/// One subfield per subgroup of Aut(k), via the Galois correspondence.
/// Requires k Galois of degree <= 8; includes Q and k itself.
std::vector<Subfield> subfield_lattice(const NumberField& k);

bool subfield_equal(const Subfield& a, const Subfield& b);

}  // namespace hmfd
