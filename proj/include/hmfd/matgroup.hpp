#pragma once

#include <cstdint>
#include <vector>

#include "hmfd/ffcore.hpp"
#include "hmfd/intpoly.hpp"

namespace hmfd {

/// 2x2 matrix over an ExtField.
struct Mat2 {
  ExtFieldElem a, b, c, d;

  ExtFieldElem det() const { return a * d - b * c; }
  ExtFieldElem trace() const { return a + d; }
  Mat2 operator*(const Mat2& o) const;
  Mat2 inverse() const;
  bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
};

/// Determinant data of a group {g : det(g) in Rtilde}: the subgroups R, W
/// and Rtilde = <R, W> of the cyclic unit group, identified by their orders.
struct DetSubgroup {
  ExtField field;
  uint64_t r_order = 1;       // the power subgroup inside the base prime units
  uint64_t w_order = 1;       // character-value group
  uint64_t rtilde_order = 1;  // lcm(r_order, w_order)

  DetSubgroup() = default;
  DetSubgroup(ExtField f, uint64_t r, uint64_t w);
  uint64_t index_rtilde_over_r() const { return rtilde_order / r_order; }
};

/// Bound on the total size of conjugacy classes sharing one characteristic
/// polynomial: 2 [Rtilde:R] (Q^2 + Q) with Q the entries-field cardinality.
uint64_t class_sum_bound(const DetSubgroup& spec);
/// The same expression read with the base prime q instead of Q.
uint64_t class_sum_bound_literal(const DetSubgroup& spec);

struct ConjClass {
  uint32_t rep_index = 0;  // index into MatrixGroup::elements
  uint64_t size = 0;
};

/// Explicit determinant-restricted subgroup of GL2 over a small field, with
/// its conjugacy-class table. Immutable once built.
class MatrixGroup {
 public:
  const DetSubgroup& det_spec() const { return spec_; }
  const ExtField& field() const { return field_; }
  uint64_t order() const { return elements_.size(); }
  const std::vector<ConjClass>& classes() const { return classes_; }
  uint32_t class_index_of(uint32_t element_index) const { return class_of_[element_index]; }
  Mat2 element(uint32_t index) const;
  Mat2 class_representative(uint32_t class_index) const;

  /// count of group elements with char poly x^2 - a x + b, via the class table
  uint64_t charpoly_class_sum(const ExtFieldElem& a, const ExtFieldElem& b) const;
  /// the same count by direct element enumeration (independent route)
  uint64_t charpoly_count_direct(const ExtFieldElem& a, const ExtFieldElem& b) const;

  /// |{g : tr(g) in F_{q^r}}| / |G| as an exact rational, via the class table
  Rat trace_subfield_density(int r) const;
  Rat trace_subfield_density_direct(int r) const;

  /// Seeded uniform sampling; returns per-class frequencies aligned with
  /// classes(). Reproducible across runs and platforms.
  std::vector<double> chebotarev_frequencies(uint64_t samples, uint64_t seed) const;
  /// Exact census |C|/|G| per class.
  std::vector<double> chebotarev_census() const;

 private:
  friend MatrixGroup build_det_group(const ExtField& field, uint64_t det_order);
  friend MatrixGroup build_nonsplit_group(const ExtField& field, uint64_t det_order);
  ExtField field_;
  DetSubgroup spec_;
  std::vector<uint32_t> elements_;  // packed entries, base-Q digits
  std::vector<uint32_t> class_of_;
  std::vector<ConjClass> classes_;
};

/// Builds {g in GL2(field) : det(g) in D} for the unique subgroup D of the
/// unit group with the given order, with conjugacy classes by orbit
/// partitioning. Requires |field| <= 16 and det_order | |field| - 1.
MatrixGroup build_det_group(const ExtField& field, uint64_t det_order);

/// The non-split image shape: scalars from the quadratic extension times
/// GL2 of the half-size subfield, with restricted determinant,
///   {z g : z in field^x, g in GL2(F_sqrt(|field|)), det(z g) in D}.
/// Requires an even-degree field of size <= 16. Construction and class
/// counting only; no characteristic-polynomial bound is claimed here.
MatrixGroup build_nonsplit_group(const ExtField& field, uint64_t det_order);

/// detOrder * Q * (Q^2 - 1): the order of the full determinant-restricted
/// group over F_Q.
uint64_t group_order_formula(uint64_t q_card, uint64_t det_order);

/// Right side of the trace-density bound: q^r |R| |W| * 2 [Rtilde:R] (Q^2+Q) / |G|.
double trace_density_bound(const DetSubgroup& spec, int r, uint64_t group_order);

}  // namespace hmfd
