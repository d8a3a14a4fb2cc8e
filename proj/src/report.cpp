#include "hmfd/report.hpp"

#include <cmath>
#include <cstdio>

namespace hmfd {

std::string fnv1a_hex(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::pair<double, double> wilson95(uint64_t count, uint64_t total) {
  if (total == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  double n = static_cast<double>(total);
  double phat = static_cast<double>(count) / n;
  double z2 = z * z;
  double denom = 1 + z2 / n;
  double center = phat + z2 / (2 * n);
  double margin = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n));
  return {(center - margin) / denom, (center + margin) / denom};
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace hmfd
