#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <map>
#include <set>

#include "hmfd/matgroup.hpp"

using namespace hmfd;

// ---------------------------------------------------------------------------
// Oracle: brute-force GL2(F_2) with hand-rolled bit matrices.
// ---------------------------------------------------------------------------
namespace oracle {

using M = std::array<int, 4>;  // entries mod 2

M mul(const M& x, const M& y) {
  return {(x[0] * y[0] + x[1] * y[2]) & 1, (x[0] * y[1] + x[1] * y[3]) & 1,
          (x[2] * y[0] + x[3] * y[2]) & 1, (x[2] * y[1] + x[3] * y[3]) & 1};
}

int det(const M& x) { return (x[0] * x[3] + x[1] * x[2]) & 1; }  // minus == plus mod 2

std::vector<M> gl2_f2() {
  std::vector<M> out;
  for (int k = 0; k < 16; ++k) {
    M m = {k & 1, (k >> 1) & 1, (k >> 2) & 1, (k >> 3) & 1};
    if (det(m) == 1) out.push_back(m);
  }
  return out;
}

std::vector<uint64_t> class_sizes_gl2_f2() {
  auto g = gl2_f2();
  std::map<M, int> cls;
  int next = 0;
  for (const auto& x : g) {
    if (cls.count(x)) continue;
    // orbit of x under conjugation; h^{-1} found by scanning for the inverse
    for (const auto& h : g) {
      M hi{};
      for (const auto& cand : g)
        if (mul(h, cand) == M{1, 0, 0, 1}) hi = cand;
      cls.emplace(mul(mul(h, x), hi), next);
    }
    ++next;
  }
  std::map<int, uint64_t> size;
  for (const auto& [m, c] : cls) ++size[c];
  std::vector<uint64_t> out;
  for (const auto& [c, s] : size) out.push_back(s);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace oracle

TEST_CASE("GL2(F_2) matches the brute-force oracle") {
  ExtField f2 = make_ext_field(2, 1);
  MatrixGroup g = build_det_group(f2, 1);
  CHECK(g.order() == 6);
  std::vector<uint64_t> sizes;
  for (const auto& c : g.classes()) sizes.push_back(c.size);
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<uint64_t>{1, 2, 3});
  CHECK(sizes == oracle::class_sizes_gl2_f2());
}

TEST_CASE("group orders match the formula") {
  struct Case {
    uint64_t q;
    int d;
    uint64_t det_order;
    uint64_t expect;
  };
  for (const Case& c : {Case{2, 1, 1, 6}, Case{3, 1, 2, 48}, Case{3, 1, 1, 24},
                        Case{3, 2, 2, 1440}, Case{2, 2, 1, 60}, Case{5, 1, 4, 480},
                        Case{5, 1, 2, 240}}) {
    ExtField f = make_ext_field(c.q, c.d);
    MatrixGroup g = build_det_group(f, c.det_order);
    CHECK(g.order() == c.expect);
    CHECK(g.order() == group_order_formula(f.cardinality(), c.det_order));
  }
}

TEST_CASE("build_det_group input validation") {
  ExtField f3 = make_ext_field(3, 1);
  CHECK_THROWS_WITH_AS(build_det_group(f3, 3), doctest::Contains("does not divide"),
                       std::invalid_argument);
  ExtField f25 = make_ext_field(5, 2);
  CHECK_THROWS_WITH_AS(build_det_group(f25, 1), doctest::Contains("exceeds"),
                       std::invalid_argument);
}

TEST_CASE("class table is a partition with sizes dividing the order") {
  for (auto [q, d, det_order] : std::vector<std::array<uint64_t, 3>>{
           {2, 1, 1}, {3, 1, 2}, {3, 2, 2}, {2, 2, 1}, {5, 1, 4}}) {
    ExtField f = make_ext_field(q, static_cast<int>(d));
    MatrixGroup g = build_det_group(f, det_order);
    uint64_t sum = 0;
    for (const auto& c : g.classes()) {
      sum += c.size;
      CHECK(g.order() % c.size == 0);
    }
    CHECK(sum == g.order());
  }
}

TEST_CASE("charpoly_class_sum: pinned values and the two routes agree") {
  ExtField f2 = make_ext_field(2, 1);
  MatrixGroup g = build_det_group(f2, 1);
  // trace 0, det 1 over F_2 (charpoly x^2+1 = (x+1)^2): the identity, the
  // swap [[0,1],[1,0]] and the two transvections [[1,1],[0,1]], [[1,0],[1,1]]
  uint64_t pinned = g.charpoly_count_direct(f2.zero(), f2.one());
  CHECK(g.charpoly_class_sum(f2.zero(), f2.one()) == pinned);
  CHECK(pinned == 4);

  // all (a, b) pairs, both routes, several groups
  for (auto [q, d, det_order] : std::vector<std::array<uint64_t, 3>>{
           {3, 1, 2}, {3, 2, 2}, {2, 2, 1}, {5, 1, 2}}) {
    ExtField f = make_ext_field(q, static_cast<int>(d));
    MatrixGroup g2 = build_det_group(f, det_order);
    uint64_t total = 0;
    for (uint64_t ai = 0; ai < f.cardinality(); ++ai)
      for (uint64_t bi = 0; bi < f.cardinality(); ++bi) {
        ExtFieldElem a = f.element(ai), b = f.element(bi);
        uint64_t via_classes = g2.charpoly_class_sum(a, b);
        CHECK(via_classes == g2.charpoly_count_direct(a, b));
        total += via_classes;
      }
    CHECK(total == g2.order());  // every element has exactly one char poly
  }
}

TEST_CASE("char poly count is zero outside the determinant subgroup") {
  ExtField f5 = make_ext_field(5, 1);
  MatrixGroup g = build_det_group(f5, 2);  // det in {1, 4}
  CHECK(g.charpoly_class_sum(f5.element(1), f5.element(2)) == 0);
  CHECK(g.charpoly_class_sum(f5.element(3), f5.element(3)) == 0);
}

TEST_CASE("class sums obey the field-size bound; literal bound is violated over F_9") {
  bool literal_violated_somewhere = false;
  for (auto [q, d, det_order] : std::vector<std::array<uint64_t, 3>>{
           {2, 1, 1}, {3, 1, 1}, {3, 1, 2}, {2, 2, 1}, {3, 2, 2}, {5, 1, 4}, {5, 1, 2}}) {
    ExtField f = make_ext_field(q, static_cast<int>(d));
    MatrixGroup g = build_det_group(f, det_order);
    uint64_t bound = class_sum_bound(g.det_spec());
    uint64_t literal = class_sum_bound_literal(g.det_spec());
    for (uint64_t ai = 0; ai < f.cardinality(); ++ai)
      for (uint64_t bi = 0; bi < f.cardinality(); ++bi) {
        uint64_t sum = g.charpoly_class_sum(f.element(ai), f.element(bi));
        CHECK(sum <= bound);
        if (sum > literal) literal_violated_somewhere = true;
      }
  }
  CHECK(literal_violated_somewhere);
}

TEST_CASE("class_sum_bound pinned values and index linearity") {
  ExtField f3 = make_ext_field(3, 1);
  CHECK(class_sum_bound(DetSubgroup(f3, 1, 1)) == 24);
  CHECK(class_sum_bound_literal(DetSubgroup(f3, 1, 1)) == 24);  // readings coincide over F_q
  ExtField f9 = make_ext_field(3, 2);
  CHECK(class_sum_bound(DetSubgroup(f9, 1, 1)) == 180);
  // [Rtilde : R] = 2 doubles the bound
  DetSubgroup spec(f9, 2, 8);
  CHECK(spec.index_rtilde_over_r() == 4);
  CHECK(class_sum_bound(spec) == 4 * 180);
  CHECK(class_sum_bound(DetSubgroup(f9, 4, 8)) == 2 * 180);
}

TEST_CASE("conjugation invariance of charpoly_class_sum") {
  ExtField f3 = make_ext_field(3, 1);
  MatrixGroup g = build_det_group(f3, 2);
  // conjugating the whole group permutes it, so recounting via the class
  // table after conjugation must give identical results; conjugate every
  // element by a fixed invertible matrix and recount directly
  Mat2 h{f3.element(1), f3.element(1), f3.element(0), f3.element(1)};  // [[1,1],[0,1]]
  Mat2 hi = h.inverse();
  for (uint64_t ai = 0; ai < 3; ++ai)
    for (uint64_t bi = 0; bi < 3; ++bi) {
      ExtFieldElem a = f3.element(ai), b = f3.element(bi);
      uint64_t direct = 0;
      for (uint32_t i = 0; i < g.order(); ++i) {
        Mat2 c = h * g.element(i) * hi;
        if (c.trace() == a && c.det() == b) ++direct;
      }
      CHECK(direct == g.charpoly_class_sum(a, b));
    }
}

TEST_CASE("trace_subfield_density") {
  SUBCASE("prime entries field: density 1 at r = 1") {
    MatrixGroup g = build_det_group(make_ext_field(3, 1), 2);
    CHECK(g.trace_subfield_density(1) == Rat(1));
  }
  SUBCASE("F_9 group: class-table route equals enumeration route") {
    MatrixGroup g = build_det_group(make_ext_field(3, 2), 2);
    for (int r : {1, 2}) CHECK(g.trace_subfield_density(r) == g.trace_subfield_density_direct(r));
    CHECK(g.trace_subfield_density(2) == Rat(1));
    CHECK_THROWS_AS(g.trace_subfield_density(3), std::invalid_argument);
  }
  SUBCASE("density is below the theorem-side bound") {
    MatrixGroup g = build_det_group(make_ext_field(3, 2), 2);
    double bound = trace_density_bound(g.det_spec(), 1, g.order());
    CHECK(g.trace_subfield_density(1).get_d() <= bound);
  }
}

TEST_CASE("chebotarev sampling") {
  ExtField f2 = make_ext_field(2, 1);
  MatrixGroup g = build_det_group(f2, 1);
  SUBCASE("census equals |C|/|G| exactly") {
    auto census = g.chebotarev_census();
    double sum = 0;
    for (size_t i = 0; i < census.size(); ++i) {
      CHECK(census[i] ==
            static_cast<double>(g.classes()[i].size) / static_cast<double>(g.order()));
      sum += census[i];
    }
    CHECK(sum == doctest::Approx(1.0));
  }
  SUBCASE("6000 samples within 3 binomial sigma of the census") {
    auto freq = g.chebotarev_frequencies(6000, 1234);
    auto census = g.chebotarev_census();
    for (size_t i = 0; i < freq.size(); ++i) {
      double p = census[i];
      double sigma = std::sqrt(p * (1 - p) / 6000);
      CHECK(std::abs(freq[i] - p) <= 3 * sigma);
    }
  }
  SUBCASE("fixed seed reproduces identical output") {
    CHECK(g.chebotarev_frequencies(5000, 42) == g.chebotarev_frequencies(5000, 42));
    CHECK(g.chebotarev_frequencies(5000, 42) != g.chebotarev_frequencies(5000, 43));
  }
}

TEST_CASE("non-split shape: scalars times GL2 of the subfield") {
  // oracle membership test over F_4: m = z g with g over F_2 iff some
  // z^{-1} m has all entries in F_2
  ExtField f4 = make_ext_field(2, 2);
  auto in_shape = [&](const Mat2& m) {
    for (uint64_t zi = 1; zi < 4; ++zi) {
      ExtFieldElem z_inv = f4.element(zi).inverse();
      bool all = true;
      for (const ExtFieldElem* e : {&m.a, &m.b, &m.c, &m.d})
        if (!(*e * z_inv).in_subfield(1)) all = false;
      if (all) return true;
    }
    return false;
  };
  MatrixGroup g = build_nonsplit_group(f4, 3);  // full determinant group
  uint64_t oracle_count = 0;
  for (uint64_t key = 0; key < 4 * 4 * 4 * 4; ++key) {
    Mat2 m{f4.element(key / 64 % 4), f4.element(key / 16 % 4), f4.element(key / 4 % 4),
           f4.element(key % 4)};
    if (!m.det().is_zero() && in_shape(m)) ++oracle_count;
  }
  CHECK(g.order() == oracle_count);
  // closed under product and inverse; class sizes partition the order
  uint64_t total = 0;
  for (const auto& c : g.classes()) total += c.size;
  CHECK(total == g.order());
  for (uint32_t i = 0; i < 6; ++i)
    for (uint32_t j = 0; j < 6; ++j) {
      Mat2 p = g.element(i * 3 % g.order()) * g.element(j * 5 % g.order());
      CHECK(in_shape(p));
      CHECK(!p.det().is_zero());
    }

  // determinant restriction cuts the group down
  MatrixGroup g1 = build_nonsplit_group(f4, 1);
  CHECK(g1.order() < g.order());
  for (uint32_t i = 0; i < g1.order(); ++i)
    CHECK(g1.element(i).det() == f4.one());

  // class counting also works over F_9
  MatrixGroup g9 = build_nonsplit_group(make_ext_field(3, 2), 2);
  uint64_t total9 = 0;
  for (const auto& c : g9.classes()) total9 += c.size;
  CHECK(total9 == g9.order());

  CHECK_THROWS_AS(build_nonsplit_group(make_ext_field(3, 1), 2), std::invalid_argument);
}

TEST_CASE("group closure under product and inverse") {
  MatrixGroup g = build_det_group(make_ext_field(2, 2), 1);  // SL2(F_4), order 60
  REQUIRE(g.order() == 60);
  std::set<std::array<uint64_t, 4>> keys;
  ExtField f = g.field();
  auto key_of = [&](const Mat2& m) {
    return std::array<uint64_t, 4>{f.index_of(m.a), f.index_of(m.b), f.index_of(m.c),
                                   f.index_of(m.d)};
  };
  for (uint32_t i = 0; i < g.order(); ++i) keys.insert(key_of(g.element(i)));
  for (uint32_t i = 0; i < 20; ++i)
    for (uint32_t j = 0; j < 20; ++j)
      CHECK(keys.count(key_of(g.element(i * 3) * g.element(j * 2 + 1))));
  for (uint32_t i = 0; i < g.order(); i += 7) CHECK(keys.count(key_of(g.element(i).inverse())));
}
