#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "hmfd/splitting.hpp"

using namespace hmfd;

namespace {

NumberField zeta7_plus() { return make_number_field(parse_poly("x^3-x^2-2x+1")); }

// independent oracle: in Q(zeta7)+ the splitting type of p != 7 depends only
// on the order of p in (Z/7)^x modulo +-1: order 1 -> split, else inert
int expected_inertia_deg_mod7(uint64_t p) {
  uint64_t r = p % 7;
  if (r == 1 || r == 6) return 1;
  return 3;
}

}  // namespace

TEST_CASE("segmented sieve matches pinned prime counts") {
  CHECK(primes_up_to(1).empty());
  CHECK(primes_up_to(10) == std::vector<uint64_t>{2, 3, 5, 7});
  CHECK(primes_up_to(100).size() == 25);
  CHECK(primes_up_to(10000).size() == 1229);
  CHECK(primes_up_to(100000).size() == 9592);
  // spot-check segment boundaries
  auto ps = primes_up_to(1 << 21);
  CHECK(ps[0] == 2);
  for (size_t i = 1; i < ps.size(); ++i) CHECK(ps[i] > ps[i - 1]);
}

TEST_CASE("splitting_type pinned cases") {
  NumberField k = zeta7_plus();
  CHECK(splitting_type(k, 13).degrees == std::vector<int>{1, 1, 1});
  CHECK(splitting_type(k, 2).degrees == std::vector<int>{3});
  CHECK(splitting_type(k, 7).bad);
  NumberField q2 = make_number_field(parse_poly("x^2-2"));
  CHECK(splitting_type(q2, 2).bad);  // 2 | disc = 8
  CHECK(splitting_type(q2, 7).degrees == std::vector<int>{1, 1});
  CHECK(splitting_type(q2, 5).degrees == std::vector<int>{2});
}

TEST_CASE("splitting in Q(zeta7)+ is a function of p mod 7") {
  NumberField k = zeta7_plus();
  for (uint64_t p : primes_up_to(10000)) {
    SplittingRecord rec = splitting_type(k, p);
    if (rec.bad) {
      CHECK(p == 7);
      continue;
    }
    int d = expected_inertia_deg_mod7(p);
    for (int deg : rec.degrees) CHECK(deg == d);
  }
}

TEST_CASE("Galois fields have uniform splitting multisets") {
  for (const char* poly : {"x^3-x^2-2x+1", "x^3-3x-1", "x^2-2", "x^4-10x^2+1"}) {
    NumberField k = make_number_field(parse_poly(poly));
    REQUIRE(k.is_galois());
    for (uint64_t p : primes_up_to(2000)) {
      SplittingRecord rec = splitting_type(k, p);
      if (rec.bad) continue;
      for (int d : rec.degrees) CHECK(d == rec.degrees[0]);
    }
  }
}

TEST_CASE("is_cyclic_galois") {
  CHECK(is_cyclic_galois(zeta7_plus()));
  CHECK(is_cyclic_galois(make_number_field(parse_poly("x^2-2"))));
  CHECK(is_cyclic_galois(make_number_field(parse_poly("x"))));
  CHECK_FALSE(is_cyclic_galois(make_number_field(parse_poly("x^3-2"))));
  CHECK_FALSE(is_cyclic_galois(make_number_field(parse_poly("x^4-10x^2+1"))));  // Klein four
}

TEST_CASE("inertia_density against the phi(r)/n prediction") {
  NumberField k = zeta7_plus();
  SUBCASE("r = 3 at X = 20000") {
    DensityEstimate est = inertia_density(k, 3, 20000);
    CHECK(est.predicted == doctest::Approx(2.0 / 3));
    CHECK(std::abs(est.estimate - est.predicted) < 0.02);
  }
  SUBCASE("r = 1 at X = 20000") {
    DensityEstimate est = inertia_density(k, 1, 20000);
    CHECK(est.predicted == doctest::Approx(1.0 / 3));
    CHECK(std::abs(est.estimate - est.predicted) < 0.02);
  }
  SUBCASE("degree-1 field has density exactly 1") {
    DensityEstimate est = inertia_density(make_number_field(parse_poly("x")), 1, 500);
    CHECK(est.estimate == 1.0);
    CHECK(est.predicted == 1.0);
  }
  SUBCASE("r partition sums to the full set of good primes") {
    DensityEstimate e1 = inertia_density(k, 1, 3000);
    DensityEstimate e3 = inertia_density(k, 3, 3000);
    CHECK(e1.denominator == e3.denominator);
    CHECK(e1.numerator + e3.numerator == e1.denominator);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(inertia_density(k, 2, 1000), std::invalid_argument);
    CHECK_THROWS_AS(inertia_density(make_number_field(parse_poly("x^3-2")), 3, 1000),
                    std::invalid_argument);
    CHECK_THROWS_AS(inertia_density(k, 3, 50), std::invalid_argument);
  }
}

TEST_CASE("inert_in_both") {
  NumberField f = zeta7_plus();
  NumberField e = make_number_field(parse_poly("x^3-x^2-4x-1"));
  SUBCASE("nonempty list, every entry verified inert in both") {
    auto list = inert_in_both(f, e, 10000);
    CHECK(!list.empty());
    for (uint64_t p : list) {
      CHECK(splitting_type(f, p).degrees == std::vector<int>{3});
      CHECK(splitting_type(e, p).degrees == std::vector<int>{3});
    }
    // density sanity: independent cyclic cubics of different conductor
    // should give about (2/3)^2 = 4/9 of primes
    double frac = static_cast<double>(list.size()) / primes_up_to(10000).size();
    CHECK(frac > 0.35);
    CHECK(frac < 0.55);
  }
  SUBCASE("identical fields reduce to the inert list") {
    auto both = inert_in_both(f, f, 3000);
    std::vector<uint64_t> single;
    for (uint64_t p : primes_up_to(3000)) {
      SplittingRecord r = splitting_type(f, p);
      if (!r.bad && r.degrees.size() == 1) single.push_back(p);
    }
    CHECK(both == single);
  }
  SUBCASE("quadratic inputs rejected by the odd-prime contract") {
    NumberField q2 = make_number_field(parse_poly("x^2-2"));
    CHECK_THROWS_AS(inert_in_both(q2, q2, 100), std::invalid_argument);
  }
  SUBCASE("degree mismatch rejected") {
    CHECK_THROWS_AS(inert_in_both(f, make_number_field(parse_poly("x^2-2")), 100),
                    std::invalid_argument);
  }
}

TEST_CASE("density estimates stabilize between X = 10^4 and X = 10^5") {
  NumberField k = zeta7_plus();
  for (int r : {1, 3}) {
    DensityEstimate a = inertia_density(k, r, 10000);
    DensityEstimate b = inertia_density(k, r, 100000);
    CHECK(std::abs(a.estimate - b.estimate) < 0.02);
  }
}
