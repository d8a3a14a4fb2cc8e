#include "hmfd/matgroup.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace hmfd {

namespace {

// Lookup-table arithmetic for a field of size Q <= 16; element = index.
struct FieldTables {
  uint64_t q;  // cardinality
  std::vector<uint8_t> mul, add;
  std::vector<uint8_t> neg, inv;

  explicit FieldTables(const ExtField& f) : q(f.cardinality()) {
    mul.resize(q * q);
    add.resize(q * q);
    neg.resize(q);
    inv.resize(q, 0);
    std::vector<ExtFieldElem> elems;
    for (uint64_t i = 0; i < q; ++i) elems.push_back(f.element(i));
    for (uint64_t i = 0; i < q; ++i) {
      neg[i] = static_cast<uint8_t>(f.index_of(-elems[i]));
      if (i) inv[i] = static_cast<uint8_t>(f.index_of(elems[i].inverse()));
      for (uint64_t j = 0; j < q; ++j) {
        mul[i * q + j] = static_cast<uint8_t>(f.index_of(elems[i] * elems[j]));
        add[i * q + j] = static_cast<uint8_t>(f.index_of(elems[i] + elems[j]));
      }
    }
  }

  uint8_t m(uint8_t x, uint8_t y) const { return mul[x * q + y]; }
  uint8_t a(uint8_t x, uint8_t y) const { return add[x * q + y]; }
  uint8_t s(uint8_t x, uint8_t y) const { return add[x * q + neg[y]]; }
};

struct PackedMat {
  uint8_t e[4];
};

uint32_t pack(const PackedMat& m, uint64_t q) {
  return static_cast<uint32_t>(((m.e[0] * q + m.e[1]) * q + m.e[2]) * q + m.e[3]);
}

PackedMat unpack(uint32_t key, uint64_t q) {
  PackedMat m;
  m.e[3] = static_cast<uint8_t>(key % q);
  key /= q;
  m.e[2] = static_cast<uint8_t>(key % q);
  key /= q;
  m.e[1] = static_cast<uint8_t>(key % q);
  key /= q;
  m.e[0] = static_cast<uint8_t>(key);
  return m;
}

PackedMat pmul(const PackedMat& x, const PackedMat& y, const FieldTables& t) {
  PackedMat r;
  r.e[0] = t.a(t.m(x.e[0], y.e[0]), t.m(x.e[1], y.e[2]));
  r.e[1] = t.a(t.m(x.e[0], y.e[1]), t.m(x.e[1], y.e[3]));
  r.e[2] = t.a(t.m(x.e[2], y.e[0]), t.m(x.e[3], y.e[2]));
  r.e[3] = t.a(t.m(x.e[2], y.e[1]), t.m(x.e[3], y.e[3]));
  return r;
}

uint8_t pdet(const PackedMat& x, const FieldTables& t) {
  return t.s(t.m(x.e[0], x.e[3]), t.m(x.e[1], x.e[2]));
}

PackedMat pinv(const PackedMat& x, const FieldTables& t) {
  uint8_t di = t.inv[pdet(x, t)];
  PackedMat r;
  r.e[0] = t.m(di, x.e[3]);
  r.e[1] = t.m(di, t.neg[x.e[1]]);
  r.e[2] = t.m(di, t.neg[x.e[2]]);
  r.e[3] = t.m(di, x.e[0]);
  return r;
}

}  // namespace

Mat2 Mat2::operator*(const Mat2& o) const {
  return Mat2{a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

Mat2 Mat2::inverse() const {
  ExtFieldElem di = det().inverse();
  return Mat2{d * di, (-b) * di, (-c) * di, a * di};
}

DetSubgroup::DetSubgroup(ExtField f, uint64_t r, uint64_t w) : field(std::move(f)) {
  uint64_t units = field.cardinality() - 1;
  if (r == 0 || w == 0 || units % r != 0 || units % w != 0)
    throw std::invalid_argument("DetSubgroup: orders must divide |field^x|");
  r_order = r;
  w_order = w;
  rtilde_order = std::lcm(r, w);
}

uint64_t class_sum_bound(const DetSubgroup& spec) {
  uint64_t Q = spec.field.cardinality();
  return 2 * spec.index_rtilde_over_r() * (Q * Q + Q);
}

uint64_t class_sum_bound_literal(const DetSubgroup& spec) {
  uint64_t q = spec.field.base().q;
  return 2 * spec.index_rtilde_over_r() * (q * q + q);
}

uint64_t group_order_formula(uint64_t q_card, uint64_t det_order) {
  return det_order * q_card * (q_card * q_card - 1);
}

double trace_density_bound(const DetSubgroup& spec, int r, uint64_t group_order) {
  uint64_t q = spec.field.base().q;
  double qr = std::pow(static_cast<double>(q), r);
  return qr * spec.r_order * spec.w_order * class_sum_bound(spec) /
         static_cast<double>(group_order);
}

namespace {

// membership table of the unique subgroup of order det_order: x^det_order == 1
std::vector<bool> det_membership(const ExtField& field, const FieldTables& t,
                                 uint64_t det_order) {
  const uint64_t Q = field.cardinality();
  if (det_order == 0 || (Q - 1) % det_order != 0)
    throw std::invalid_argument("detOrder " + std::to_string(det_order) +
                                " does not divide |field^x| = " + std::to_string(Q - 1));
  std::vector<bool> in_det(Q, false);
  uint8_t one = static_cast<uint8_t>(field.index_of(field.one()));
  for (uint64_t x = 1; x < Q; ++x) {
    uint8_t acc = one;
    for (uint64_t e = 0; e < det_order; ++e) acc = t.m(acc, static_cast<uint8_t>(x));
    in_det[x] = acc == one;
  }
  return in_det;
}

// conjugacy classes by orbit partitioning under full-group conjugation
void partition_classes(const FieldTables& t, std::vector<uint32_t>& elements,
                       std::vector<uint32_t>& class_of, std::vector<ConjClass>& classes,
                       uint64_t Q) {
  const uint32_t total = static_cast<uint32_t>(Q * Q * Q * Q);
  std::vector<int32_t> index_of_key(total, -1);
  for (size_t i = 0; i < elements.size(); ++i) index_of_key[elements[i]] = static_cast<int32_t>(i);
  const size_t n = elements.size();
  std::vector<PackedMat> mats(n), invs(n);
  for (size_t i = 0; i < n; ++i) {
    mats[i] = unpack(elements[i], Q);
    invs[i] = pinv(mats[i], t);
  }
  class_of.assign(n, UINT32_MAX);
  for (size_t i = 0; i < n; ++i) {
    if (class_of[i] != UINT32_MAX) continue;
    uint32_t cls = static_cast<uint32_t>(classes.size());
    uint64_t size = 0;
    for (size_t h = 0; h < n; ++h) {
      PackedMat conj = pmul(pmul(mats[h], mats[i], t), invs[h], t);
      int32_t idx = index_of_key[pack(conj, Q)];
      if (idx < 0) throw std::logic_error("matrix group: conjugate escaped the element set");
      if (class_of[idx] == UINT32_MAX) {
        class_of[idx] = cls;
        ++size;
      }
    }
    classes.push_back(ConjClass{static_cast<uint32_t>(i), size});
  }
}

}  // namespace

MatrixGroup build_det_group(const ExtField& field, uint64_t det_order) {
  const uint64_t Q = field.cardinality();
  if (Q > 16)
    throw std::invalid_argument("build_det_group: field size " + std::to_string(Q) +
                                " exceeds the exhaustive-construction limit of 16");
  FieldTables t(field);
  std::vector<bool> in_det = det_membership(field, t, det_order);

  MatrixGroup g;
  g.field_ = field;
  g.spec_ = DetSubgroup(field, det_order, 1);

  const uint32_t total = static_cast<uint32_t>(Q * Q * Q * Q);
  for (uint32_t key = 0; key < total; ++key) {
    PackedMat m = unpack(key, Q);
    if (in_det[pdet(m, t)]) g.elements_.push_back(key);
  }
  partition_classes(t, g.elements_, g.class_of_, g.classes_, Q);
  return g;
}

MatrixGroup build_nonsplit_group(const ExtField& field, uint64_t det_order) {
  const uint64_t Q = field.cardinality();
  if (Q > 16)
    throw std::invalid_argument("build_nonsplit_group: field size " + std::to_string(Q) +
                                " exceeds the exhaustive-construction limit of 16");
  if (field.degree() % 2 != 0)
    throw std::invalid_argument(
        "build_nonsplit_group: needs an even-degree field (a quadratic extension)");
  FieldTables t(field);
  std::vector<bool> in_det = det_membership(field, t, det_order);

  // the half-size subfield, fixed by the half-degree frobenius power
  std::vector<uint8_t> sub;
  for (uint64_t i = 0; i < Q; ++i)
    if (field.element(i).in_subfield(field.degree() / 2)) sub.push_back(static_cast<uint8_t>(i));

  MatrixGroup g;
  g.field_ = field;
  g.spec_ = DetSubgroup(field, det_order, 1);

  std::vector<bool> seen(Q * Q * Q * Q, false);
  for (uint8_t a : sub)
    for (uint8_t b : sub)
      for (uint8_t c : sub)
        for (uint8_t d : sub) {
          PackedMat m{a, b, c, d};
          if (pdet(m, t) == 0) continue;
          for (uint64_t zi = 1; zi < Q; ++zi) {
            uint8_t z = static_cast<uint8_t>(zi);
            PackedMat zm{t.m(z, a), t.m(z, b), t.m(z, c), t.m(z, d)};
            if (!in_det[pdet(zm, t)]) continue;
            uint32_t key = pack(zm, Q);
            if (!seen[key]) {
              seen[key] = true;
              g.elements_.push_back(key);
            }
          }
        }
  std::sort(g.elements_.begin(), g.elements_.end());
  partition_classes(t, g.elements_, g.class_of_, g.classes_, Q);
  return g;
}

Mat2 MatrixGroup::element(uint32_t index) const {
  PackedMat m = unpack(elements_[index], field_.cardinality());
  return Mat2{field_.element(m.e[0]), field_.element(m.e[1]), field_.element(m.e[2]),
              field_.element(m.e[3])};
}

Mat2 MatrixGroup::class_representative(uint32_t class_index) const {
  return element(classes_[class_index].rep_index);
}

uint64_t MatrixGroup::charpoly_class_sum(const ExtFieldElem& a, const ExtFieldElem& b) const {
  uint64_t sum = 0;
  for (const ConjClass& c : classes_) {
    Mat2 rep = element(c.rep_index);
    if (rep.trace() == a && rep.det() == b) sum += c.size;
  }
  return sum;
}

uint64_t MatrixGroup::charpoly_count_direct(const ExtFieldElem& a, const ExtFieldElem& b) const {
  const uint64_t Q = field_.cardinality();
  uint8_t ai = static_cast<uint8_t>(field_.index_of(a));
  uint8_t bi = static_cast<uint8_t>(field_.index_of(b));
  FieldTables t(field_);
  uint64_t count = 0;
  for (uint32_t key : elements_) {
    PackedMat m = unpack(key, Q);
    if (t.a(m.e[0], m.e[3]) == ai && pdet(m, t) == bi) ++count;
  }
  return count;
}

Rat MatrixGroup::trace_subfield_density(int r) const {
  int d = field_.degree();
  if (r < 1 || d % r != 0)
    throw std::invalid_argument("trace_subfield_density: r must divide the entries-field degree");
  uint64_t count = 0;
  for (const ConjClass& c : classes_)
    if (element(c.rep_index).trace().in_subfield(r)) count += c.size;
  Rat out{Int(count), Int(order())};
  out.canonicalize();
  return out;
}

Rat MatrixGroup::trace_subfield_density_direct(int r) const {
  int d = field_.degree();
  if (r < 1 || d % r != 0)
    throw std::invalid_argument("trace_subfield_density: r must divide the entries-field degree");
  const uint64_t Q = field_.cardinality();
  // traces fixed by the r-th frobenius power
  std::vector<bool> in_sub(Q);
  for (uint64_t i = 0; i < Q; ++i) in_sub[i] = field_.element(i).in_subfield(r);
  FieldTables t(field_);
  uint64_t count = 0;
  for (uint32_t key : elements_) {
    PackedMat m = unpack(key, Q);
    if (in_sub[t.a(m.e[0], m.e[3])]) ++count;
  }
  Rat out{Int(count), Int(order())};
  out.canonicalize();
  return out;
}

std::vector<double> MatrixGroup::chebotarev_frequencies(uint64_t samples, uint64_t seed) const {
  if (samples < 1) throw std::invalid_argument("chebotarev_frequencies: need samples >= 1");
  std::mt19937_64 rng(seed);
  const uint64_t n = order();
  // unbiased rejection sampling, stable across platforms
  const uint64_t threshold = UINT64_MAX - UINT64_MAX % n;
  std::vector<uint64_t> counts(classes_.size(), 0);
  for (uint64_t s = 0; s < samples; ++s) {
    uint64_t r = rng();
    while (r >= threshold) r = rng();
    ++counts[class_of_[r % n]];
  }
  std::vector<double> freq(classes_.size());
  for (size_t i = 0; i < freq.size(); ++i)
    freq[i] = static_cast<double>(counts[i]) / static_cast<double>(samples);
  return freq;
}

std::vector<double> MatrixGroup::chebotarev_census() const {
  std::vector<double> freq(classes_.size());
  for (size_t i = 0; i < classes_.size(); ++i)
    freq[i] = static_cast<double>(classes_[i].size) / static_cast<double>(order());
  return freq;
}

}  // namespace hmfd
