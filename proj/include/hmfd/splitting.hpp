#pragma once

#include <cstdint>
#include <vector>

#include "hmfd/numfield.hpp"

namespace hmfd {

/// Frobenius cycle type of a rational prime in a number field, read off the
/// factor degrees of the defining polynomial mod p.
struct SplittingRecord {
  uint64_t p = 0;
  std::vector<int> degrees;  // ascending; one entry per prime above p
  bool bad = false;          // p divides disc(minpoly)
};

struct DensityEstimate {
  uint64_t numerator = 0;
  uint64_t denominator = 0;
  double estimate = 0.0;
  double predicted = 0.0;
  uint64_t max_prime = 0;
};

/// All primes <= x, by a segmented sieve. x capped at 10^9.
std::vector<uint64_t> primes_up_to(uint64_t x);

SplittingRecord splitting_type(const NumberField& k, uint64_t p);

/// True when Aut(k) is cyclic of order equal to the degree.
bool is_cyclic_galois(const NumberField& k);

/// Fraction of good primes p <= X whose splitting type is all-degrees-r,
/// against the predicted phi(r)/n. Requires k cyclic Galois and r | n.
DensityEstimate inertia_density(const NumberField& k, int r, uint64_t X);

/// Good primes p <= X inert in both fields; requires both cyclic Galois of
/// the same odd prime degree.
std::vector<uint64_t> inert_in_both(const NumberField& f, const NumberField& e, uint64_t X);

uint64_t euler_phi(uint64_t n);

}  // namespace hmfd
