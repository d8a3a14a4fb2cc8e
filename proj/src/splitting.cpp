#include "hmfd/splitting.hpp"

#include <algorithm>
#include <stdexcept>

#include "hmfd/ffcore.hpp"

namespace hmfd {

std::vector<uint64_t> primes_up_to(uint64_t x) {
  if (x > 1000000000ull) throw std::invalid_argument("primes_up_to: cap is 10^9");
  std::vector<uint64_t> out;
  if (x < 2) return out;
  // base primes up to sqrt(x)
  uint64_t root = 2;
  while (root * root <= x) ++root;
  std::vector<bool> base_sieve(root + 1, true);
  std::vector<uint64_t> base;
  for (uint64_t i = 2; i <= root; ++i) {
    if (!base_sieve[i]) continue;
    base.push_back(i);
    for (uint64_t j = i * i; j <= root; j += i) base_sieve[j] = false;
  }
  const uint64_t seg_size = 1 << 20;
  std::vector<bool> seg;
  for (uint64_t lo = 2; lo <= x; lo += seg_size) {
    uint64_t hi = std::min(x, lo + seg_size - 1);
    seg.assign(hi - lo + 1, true);
    for (uint64_t p : base) {
      if (p * p > hi) break;
      uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
      for (uint64_t j = start; j <= hi; j += p) seg[j - lo] = false;
    }
    for (uint64_t v = lo; v <= hi; ++v)
      if (seg[v - lo]) out.push_back(v);
  }
  return out;
}

SplittingRecord splitting_type(const NumberField& k, uint64_t p) {
  SplittingRecord rec;
  rec.p = p;
  try {
    auto pattern = ddf_degrees(k.minpoly(), static_cast<uint32_t>(p));
    for (auto [r, mult] : pattern)
      for (int i = 0; i < mult; ++i) rec.degrees.push_back(r);
    std::sort(rec.degrees.begin(), rec.degrees.end());
  } catch (const BadPrimeError&) {
    rec.bad = true;
  }
  return rec;
}

bool is_cyclic_galois(const NumberField& k) {
  if (k.degree() == 1) return true;
  if (k.degree() > 8 || !k.is_galois()) return false;
  for (const auto& g : k.automorphisms())
    if (g.order() == k.degree()) return true;
  return false;
}

uint64_t euler_phi(uint64_t n) {
  uint64_t result = n;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    while (n % d == 0) n /= d;
    result -= result / d;
  }
  if (n > 1) result -= result / n;
  return result;
}

DensityEstimate inertia_density(const NumberField& k, int r, uint64_t X) {
  const int n = k.degree();
  if (r < 1 || n % r != 0)
    throw std::invalid_argument("inertia_density: r = " + std::to_string(r) +
                                " does not divide the degree " + std::to_string(n));
  if (!is_cyclic_galois(k))
    throw std::invalid_argument("inertia_density: field " + k.minpoly().to_string() +
                                " is not cyclic Galois");
  if (X < 100) throw std::invalid_argument("inertia_density: X must be at least 100");
  DensityEstimate est;
  est.max_prime = X;
  est.predicted = static_cast<double>(euler_phi(r)) / n;
  for (uint64_t p : primes_up_to(X)) {
    SplittingRecord rec = splitting_type(k, p);
    if (rec.bad) continue;
    ++est.denominator;
    if (std::all_of(rec.degrees.begin(), rec.degrees.end(), [&](int d) { return d == r; }))
      ++est.numerator;
  }
  est.estimate = est.denominator ? static_cast<double>(est.numerator) / est.denominator : 0.0;
  return est;
}

std::vector<uint64_t> inert_in_both(const NumberField& f, const NumberField& e, uint64_t X) {
  const int n = f.degree();
  if (e.degree() != n)
    throw std::invalid_argument("inert_in_both: degrees differ (" + std::to_string(n) + " vs " +
                                std::to_string(e.degree()) + ")");
  bool odd_prime = n >= 3 && n % 2 == 1;
  for (int d = 3; d * d <= n; d += 2)
    if (n % d == 0) odd_prime = false;
  if (!odd_prime)
    throw std::invalid_argument("inert_in_both: degree " + std::to_string(n) +
                                " is not an odd prime");
  if (!is_cyclic_galois(f) || !is_cyclic_galois(e))
    throw std::invalid_argument("inert_in_both: both fields must be cyclic Galois");
  std::vector<uint64_t> out;
  for (uint64_t p : primes_up_to(X)) {
    SplittingRecord rf = splitting_type(f, p);
    if (rf.bad || rf.degrees.size() != 1) continue;
    SplittingRecord re = splitting_type(e, p);
    if (re.bad || re.degrees.size() != 1) continue;
    out.push_back(p);
  }
  return out;
}

}  // namespace hmfd
