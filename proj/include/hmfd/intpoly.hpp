#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace hmfd {

using Int = mpz_class;
using Rat = mpq_class;

/// Univariate polynomial with arbitrary-precision integer coefficients,
/// stored little-endian with no trailing zeros (the zero polynomial has an
/// empty coefficient vector).
struct IntPoly {
  std::vector<Int> c;

  IntPoly() = default;
  explicit IntPoly(std::vector<Int> coeffs);
  static IntPoly constant(const Int& v);
  static IntPoly x();

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  bool is_monic() const { return !c.empty() && c.back() == 1; }
  const Int& lc() const { return c.back(); }
  const Int& coeff(int i) const;

  IntPoly operator+(const IntPoly& o) const;
  IntPoly operator-(const IntPoly& o) const;
  IntPoly operator*(const IntPoly& o) const;
  bool operator==(const IntPoly& o) const { return c == o.c; }

  IntPoly derivative() const;
  Rat eval(const Rat& x) const;
  Int eval_int(const Int& x) const;

  /// gcd of all coefficients (0 for the zero polynomial).
  Int content() const;
  IntPoly primitive_part() const;

  std::string to_string() const;
};

/// Parses the ASCII syntax "x^3-x^2-2x+1" (descending-degree terms, integer
/// coefficients, '^' exponents). Throws std::invalid_argument on bad input.
IntPoly parse_poly(const std::string& s);

/// Primitive integer gcd of two polynomials taken over Q.
IntPoly gcd_over_q(const IntPoly& a, const IntPoly& b);

/// True iff gcd(m, m') is constant, i.e. m has no repeated roots.
bool is_squarefree_q(const IntPoly& m);

/// Exact count of real roots (without multiplicity) via Sturm sequences.
int real_root_count(const IntPoly& m);

}  // namespace hmfd
