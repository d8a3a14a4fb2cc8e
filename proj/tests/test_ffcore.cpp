#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "hmfd/ffcore.hpp"
#include "hmfd/intpoly.hpp"

using namespace hmfd;

// ---------------------------------------------------------------------------
// Test-local oracles, independent of the library's ModPoly path.
// ---------------------------------------------------------------------------
namespace oracle {

// coefficients little-endian over F_p
using Poly = std::vector<uint64_t>;

Poly trim(Poly a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

Poly mul(const Poly& a, const Poly& b, uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return trim(r);
}

Poly rem(Poly a, const Poly& b, uint64_t p) {
  auto inv = [&](uint64_t x) {
    uint64_t r = 1, e = p - 2, base = x % p;
    while (e) {
      if (e & 1) r = r * base % p;
      base = base * base % p;
      e >>= 1;
    }
    return r;
  };
  uint64_t li = inv(b.back());
  while (a.size() >= b.size() && !a.empty()) {
    uint64_t f = a.back() * li % p;
    size_t sh = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) a[i + sh] = (a[i + sh] + p - f * b[i] % p) % p;
    a.pop_back();
    a = trim(a);
  }
  return a;
}

// Count of irreducible degree-r factors of a monic squarefree poly, found by
// trial division against every monic irreducible of degree <= deg/2
// (irreducibility of the trial divisors established recursively by the same
// routine). Only sane for tiny p^deg.
bool irreducible_by_trial(const Poly& f, uint64_t p);

std::vector<Poly> monic_polys(int deg, uint64_t p) {
  uint64_t count = 1;
  for (int i = 0; i < deg; ++i) count *= p;
  std::vector<Poly> out;
  for (uint64_t k = 0; k < count; ++k) {
    Poly c(deg + 1, 0);
    uint64_t t = k;
    for (int i = 0; i < deg; ++i) {
      c[i] = t % p;
      t /= p;
    }
    c[deg] = 1;
    out.push_back(c);
  }
  return out;
}

bool irreducible_by_trial(const Poly& f, uint64_t p) {
  int n = static_cast<int>(f.size()) - 1;
  if (n <= 1) return n == 1;
  for (int d = 1; 2 * d <= n; ++d)
    for (const Poly& g : monic_polys(d, p))
      if (irreducible_by_trial(g, p) && rem(f, g, p).empty()) return false;
  return true;
}

std::vector<std::pair<int, int>> factor_degrees_by_trial(Poly f, uint64_t p) {
  std::map<int, int> mult;
  int guard = 0;
  while (f.size() > 1) {
    REQUIRE(++guard < 64);
    bool split = false;
    int n = static_cast<int>(f.size()) - 1;
    for (int d = 1; d <= n && !split; ++d) {
      for (const Poly& g : monic_polys(d, p)) {
        if (!irreducible_by_trial(g, p)) continue;
        if (rem(f, g, p).empty()) {
          ++mult[d];
          // divide out g
          Poly q;
          {
            Poly a = f;
            auto inv = [&](uint64_t x) {
              uint64_t r = 1, e = p - 2, base = x % p;
              while (e) {
                if (e & 1) r = r * base % p;
                base = base * base % p;
                e >>= 1;
              }
              return r;
            };
            uint64_t li = inv(g.back());
            q.assign(a.size() - g.size() + 1, 0);
            while (a.size() >= g.size() && !a.empty()) {
              uint64_t fac = a.back() * li % p;
              size_t sh = a.size() - g.size();
              q[sh] = fac;
              for (size_t i = 0; i < g.size(); ++i)
                a[i + sh] = (a[i + sh] + p - fac * g[i] % p) % p;
              a.pop_back();
              a = trim(a);
            }
            REQUIRE(a.empty());
          }
          f = q;
          split = true;
          break;
        }
      }
    }
    REQUIRE(split);
  }
  return {mult.begin(), mult.end()};
}

}  // namespace oracle

TEST_CASE("polynomial text syntax round-trips") {
  for (const char* s : {"x^3-x^2-2x+1", "x^2+1", "x", "5", "-3", "2x^3-x+5", "x^4-10x^2+1"}) {
    IntPoly p = parse_poly(s);
    CHECK(p.to_string() == s);
  }
  CHECK(parse_poly("x^2 - 2").to_string() == "x^2-2");
  CHECK(parse_poly("+x+1").to_string() == "x+1");
  CHECK_THROWS_AS(parse_poly(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_poly("x^"), std::invalid_argument);
  CHECK_THROWS_AS(parse_poly("x**2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_poly("3y+1"), std::invalid_argument);
}

TEST_CASE("integer polynomial arithmetic basics") {
  IntPoly m = parse_poly("x^3-x^2-2x+1");
  CHECK(m.degree() == 3);
  CHECK(m.is_monic());
  CHECK(m.eval(Rat(0)) == 1);
  CHECK(m.eval_int(Int(2)) == 1);  // 8 - 4 - 4 + 1
  CHECK((m * parse_poly("x") - m).degree() == 4);
  CHECK(is_squarefree_q(m));
  CHECK_FALSE(is_squarefree_q(parse_poly("x^2+2x+1")));
  CHECK(gcd_over_q(parse_poly("x^2-1"), parse_poly("x^2+2x+1")).to_string() == "x+1");
}

TEST_CASE("Sturm real-root counts") {
  CHECK(real_root_count(parse_poly("x^2-2")) == 2);
  CHECK(real_root_count(parse_poly("x^2+1")) == 0);
  CHECK(real_root_count(parse_poly("x^3-x^2-4x-1")) == 3);
  CHECK(real_root_count(parse_poly("x^3-2")) == 1);
  CHECK(real_root_count(parse_poly("x^4-10x^2+1")) == 4);
  CHECK(real_root_count(parse_poly("x")) == 1);
}

TEST_CASE("prime field construction and arithmetic") {
  CHECK_THROWS_AS(PrimeField(4), std::invalid_argument);
  CHECK_THROWS_AS(PrimeField(1), std::invalid_argument);
  PrimeField f7(7);
  CHECK(f7.inv(3) == 5);
  CHECK(f7.pow(3, 6) == 1);
}

TEST_CASE("make_ext_field picks the least irreducible modulus") {
  SUBCASE("degree-1 case: F_2 with modulus x") {
    ExtField f = make_ext_field(2, 1);
    CHECK(f.cardinality() == 2);
    CHECK(f.modulus() == std::vector<uint64_t>{0, 1});
  }
  SUBCASE("F_9 cardinality and unit group") {
    ExtField f = make_ext_field(3, 2);
    CHECK(f.cardinality() == 9);
    CHECK(f.unit_generator().order() == 8);
  }
  SUBCASE("F_8 modulus x^3+x+1, cross-checked by scanning all 8 monic cubics") {
    ExtField f = make_ext_field(2, 3);
    // oracle: ascending scan; a cubic over F_2 is irreducible iff it has no
    // roots (any factorization would contain a linear factor)
    std::vector<uint64_t> expected;
    for (uint64_t k = 0; k < 8; ++k) {
      std::vector<uint64_t> c = {k & 1, (k >> 1) & 1, (k >> 2) & 1, 1};
      uint64_t at0 = c[0];
      uint64_t at1 = (c[0] + c[1] + c[2] + c[3]) % 2;
      if (at0 != 0 && at1 != 0) {
        expected = c;
        break;
      }
    }
    CHECK(expected == std::vector<uint64_t>{1, 1, 0, 1});  // x^3+x+1
    CHECK(f.modulus() == expected);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(make_ext_field(6, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_ext_field(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_ext_field(2, 21), std::invalid_argument);
  }
}

TEST_CASE("is_irreducible on small polynomials") {
  PrimeField f3(3), f2(2);
  CHECK(is_irreducible(ModPoly(f3, {1, 0, 1})));        // x^2+1 over F_3: no roots
  CHECK_FALSE(is_irreducible(ModPoly(f2, {1, 0, 1})));  // (x+1)^2 in char 2
  CHECK(is_irreducible(ModPoly(f2, {1, 1, 0, 1})));     // x^3+x+1
  CHECK_THROWS_AS(is_irreducible(ModPoly(f2)), std::invalid_argument);

  // exhaustive agreement with the trial-division oracle over F_2 and F_3
  for (uint64_t p : {2ull, 3ull}) {
    PrimeField fp(p);
    for (int deg = 1; deg <= 4; ++deg) {
      for (const auto& c : oracle::monic_polys(deg, p)) {
        CHECK(is_irreducible(ModPoly(fp, c)) == oracle::irreducible_by_trial(c, p));
      }
    }
  }
}

TEST_CASE("ddf_degrees pinned examples") {
  IntPoly m = parse_poly("x^3-x^2-2x+1");
  using V = std::vector<std::pair<int, int>>;
  CHECK(ddf_degrees(m, 13) == V{{1, 3}});
  CHECK(ddf_degrees(m, 2) == V{{3, 1}});
  CHECK(ddf_degrees(parse_poly("x^2-2"), 3) == V{{2, 1}});
  CHECK_THROWS_AS(ddf_degrees(parse_poly("x^2-2"), 2), BadPrimeError);  // 2 | disc = 8
  CHECK_THROWS_AS(ddf_degrees(m, 7), BadPrimeError);                    // 7 | disc = 49
}

TEST_CASE("ddf_degrees agrees with trial factorization and sums to deg") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 60; ++iter) {
    uint64_t p = (iter % 2) ? 3 : 2;
    int deg = 2 + static_cast<int>(rng() % 4);
    std::vector<Int> c(deg + 1);
    for (int i = 0; i < deg; ++i) c[i] = Int(static_cast<long>(rng() % 19) - 9);
    c[deg] = 1;
    IntPoly m{c};
    std::vector<std::pair<int, int>> got;
    try {
      got = ddf_degrees(m, static_cast<uint32_t>(p));
    } catch (const BadPrimeError&) {
      continue;  // repeated roots mod p: excluded by contract
    }
    int total = 0;
    for (auto [r, k] : got) total += r * k;
    CHECK(total == deg);
    oracle::Poly f(deg + 1);
    for (int i = 0; i <= deg; ++i) {
      Int v = m.c[i] % Int(static_cast<unsigned long>(p));
      if (v < 0) v += Int(static_cast<unsigned long>(p));
      f[i] = v.get_ui();
    }
    CHECK(got == oracle::factor_degrees_by_trial(f, p));
  }
}

TEST_CASE("root counts in F_{p^k} match gcd(x^{p^k}-x, m) degree") {
  // number of roots of m in F_{p^k} equals sum of r*mult_r over r | k
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 40; ++iter) {
    uint64_t p = (iter % 3 == 0) ? 5 : ((iter % 3 == 1) ? 3 : 2);
    int deg = 2 + static_cast<int>(rng() % 3);
    std::vector<Int> c(deg + 1);
    for (int i = 0; i < deg; ++i) c[i] = Int(static_cast<long>(rng() % 15) - 7);
    c[deg] = 1;
    IntPoly m{c};
    std::vector<std::pair<int, int>> pattern;
    try {
      pattern = ddf_degrees(m, static_cast<uint32_t>(p));
    } catch (const BadPrimeError&) {
      continue;
    }
    PrimeField fp(static_cast<uint32_t>(p));
    ModPoly f = ModPoly::from_int_poly(m, fp);
    for (int k = 1; k <= 4; ++k) {
      uint64_t pk = 1;
      bool fits = true;
      for (int i = 0; i < k; ++i) {
        pk *= p;
        if (pk > (1 << 20)) fits = false;
      }
      if (!fits) break;
      Int e;
      mpz_ui_pow_ui(e.get_mpz_t(), p, k);
      ModPoly frob = powmod(ModPoly::x(fp), e, f) - ModPoly::x(fp).rem(f);
      int root_count = gcd(frob, f).degree();
      int predicted = 0;
      for (auto [r, mult] : pattern)
        if (k % r == 0) predicted += r * mult;
      CHECK(root_count == predicted);
    }
  }
}

TEST_CASE("frobenius_power basics") {
  ExtField f9 = make_ext_field(3, 2);
  ExtFieldElem g = f9.unit_generator();
  CHECK(frobenius_power(g, 0) == g);
  CHECK(frobenius_power(f9.from_base(2), 1) == f9.from_base(2));
  ExtFieldElem g3 = frobenius_power(g, 1);
  CHECK(g3 == g.pow(3));
  CHECK_FALSE(g3 == g);  // g has order 8, so g^3 != g
  // frobenius is an automorphism whose fixed set is exactly F_q
  int fixed = 0;
  for (uint64_t i = 0; i < f9.cardinality(); ++i)
    if (frobenius_power(f9.element(i), 1) == f9.element(i)) ++fixed;
  CHECK(fixed == 3);
}

TEST_CASE("field axioms hold for random triples") {
  std::mt19937_64 rng(42);
  for (auto [q, d] : std::vector<std::pair<uint64_t, int>>{{2, 3}, {3, 2}, {5, 2}, {2, 4}}) {
    ExtField f = make_ext_field(q, d);
    uint64_t n = f.cardinality();
    for (int iter = 0; iter < 200; ++iter) {
      ExtFieldElem a = f.element(rng() % n);
      ExtFieldElem b = f.element(rng() % n);
      ExtFieldElem c = f.element(rng() % n);
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a + (-a) == f.zero());
      if (!a.is_zero()) {
        CHECK(a * a.inverse() == f.one());
      }
      // Fermat: e^{q^d} = e
      ExtFieldElem e = a;
      for (int i = 0; i < d; ++i) e = e.pow(q);
      CHECK(e == a);
    }
    CHECK_THROWS_AS(f.zero().inverse(), std::domain_error);
  }
}

TEST_CASE("frobenius is a ring homomorphism") {
  std::mt19937_64 rng(5);
  for (auto [q, d] : std::vector<std::pair<uint64_t, int>>{{3, 2}, {2, 4}, {5, 2}}) {
    ExtField f = make_ext_field(q, d);
    for (int iter = 0; iter < 100; ++iter) {
      ExtFieldElem a = f.element(rng() % f.cardinality());
      ExtFieldElem b = f.element(rng() % f.cardinality());
      CHECK(frobenius_power(a + b, 1) == frobenius_power(a, 1) + frobenius_power(b, 1));
      CHECK(frobenius_power(a * b, 1) == frobenius_power(a, 1) * frobenius_power(b, 1));
    }
  }
}

TEST_CASE("in_subfield matches the fixed sets of frobenius powers") {
  ExtField f16 = make_ext_field(2, 4);
  int in_f2 = 0, in_f4 = 0;
  for (uint64_t i = 0; i < 16; ++i) {
    ExtFieldElem e = f16.element(i);
    if (e.in_subfield(1)) ++in_f2;
    if (e.in_subfield(2)) ++in_f4;
  }
  CHECK(in_f2 == 2);
  CHECK(in_f4 == 4);
  CHECK_THROWS_AS(f16.element(1).in_subfield(3), std::invalid_argument);
}
