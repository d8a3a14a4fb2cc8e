#pragma once

#include <cstdint>
#include <string>
#include <utility>

namespace hmfd {

inline constexpr const char* kToolkitVersion = "0.1.0";

/// FNV-1a 64-bit content hash, hex-encoded; used for fixture provenance.
std::string fnv1a_hex(const std::string& bytes);

/// Wilson 95% score interval for count successes out of total.
std::pair<double, double> wilson95(uint64_t count, uint64_t total);

/// Fixed-point rendering with six decimals (deterministic across runs).
std::string fmt6(double v);

}  // namespace hmfd
