// Generates the bundled coefficient corpora under fixtures/. Deterministic:
// a fixed global seed plus a per-prime hash drive all choices, so re-running
// reproduces the committed files byte for byte.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "hmfd/hmfdata.hpp"
#include "hmfd/numfield.hpp"

using namespace hmfd;

namespace {

constexpr uint64_t kGlobalSeed = 20240817;

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// real roots of a squarefree integer polynomial, double precision (used only
// to keep synthetic eigenvalues inside the |C| <= 2 sqrt(N) window)
std::vector<double> real_roots(const IntPoly& m) {
  auto eval = [&](double x) {
    double acc = 0;
    for (int i = m.degree(); i >= 0; --i) acc = acc * x + m.coeff(i).get_d();
    return acc;
  };
  double bound = 1;
  for (const Int& c : m.c) bound = std::max(bound, std::abs(c.get_d()));
  bound += 1;
  std::vector<double> roots;
  const int steps = 4000;
  double prev_x = -bound, prev_v = eval(prev_x);
  for (int i = 1; i <= steps; ++i) {
    double x = -bound + 2 * bound * i / steps;
    double v = eval(x);
    if (prev_v == 0) roots.push_back(prev_x);
    if (prev_v * v < 0) {
      double lo = prev_x, hi = x;
      for (int it = 0; it < 80; ++it) {
        double mid = (lo + hi) / 2;
        if (eval(lo) * eval(mid) <= 0)
          hi = mid;
        else
          lo = mid;
      }
      roots.push_back((lo + hi) / 2);
    }
    prev_x = x;
    prev_v = v;
  }
  return roots;
}

double emb_max(const std::vector<long>& coords, const std::vector<double>& roots) {
  double worst = 0;
  for (double r : roots) {
    double v = 0, pw = 1;
    for (long c : coords) {
      v += c * pw;
      pw *= r;
    }
    worst = std::max(worst, std::abs(v));
  }
  return worst;
}

int legendre(uint64_t a, uint64_t m) {
  a %= m;
  if (a == 0) return 0;
  uint64_t r = 1, e = (m - 1) / 2, base = a;
  while (e) {
    if (e & 1) r = r * base % m;
    base = base * base % m;
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

struct FormSpec {
  std::string label;
  std::string base;
  std::string weights;
  uint64_t level_norm;
  std::string ef;
  uint64_t twist_mod;  // 0: no inner twist; else the quadratic character modulus
  uint64_t max_norm;
};

HilbertFormData generate(const FormSpec& spec) {
  HilbertFormData f;
  f.label = spec.label;
  f.base_poly = parse_poly(spec.base);
  f.base_field = make_number_field(f.base_poly);
  {
    std::istringstream ws(spec.weights);
    std::string item;
    while (std::getline(ws, item, ',')) f.weight.push_back(std::stoi(item));
  }
  f.level_norm = spec.level_norm;
  f.trivial_character = true;
  f.e_f_poly = parse_poly(spec.ef);
  f.coefficient_field = make_number_field(f.e_f_poly);
  f.max_norm = spec.max_norm;

  const int n = f.coefficient_field.degree();
  std::vector<double> roots = real_roots(f.e_f_poly);
  // scale of the irrational generator for twist forms: sqrt(|disc|) ~ |root|
  double gen_scale = 0;
  for (double r : roots) gen_scale = std::max(gen_scale, std::abs(r));

  for (const PrimeLabel& label :
       expected_prime_labels(f.base_field, f.level_norm, f.max_norm)) {
    std::mt19937_64 rng(fnv1a(spec.label + ":" + label.to_string()) ^ kGlobalSeed);
    const double window = 2 * std::sqrt(static_cast<double>(label.norm()));
    std::vector<Rat> coords(n, Rat(0));

    if (rng() % 64 == 0) {
      // keep an occasional vanishing coefficient
      f.coefficients.emplace_back(label, f.coefficient_field.element(coords));
      continue;
    }

    if (spec.twist_mod) {
      // quadratic inner twist: coefficients are either rational or pure
      // multiples of the generator, switched by the character of the norm
      int chi = legendre(label.norm() % spec.twist_mod, spec.twist_mod);
      if (chi == 1) {
        long a_bound = std::max(1L, static_cast<long>(window));
        long a = static_cast<long>(rng() % (2 * a_bound + 1)) - a_bound;
        if (a == 0) a = 1;
        coords[0] = Rat(a);
      } else {
        long b_bound = std::max(1L, static_cast<long>(window / gen_scale));
        long b = static_cast<long>(rng() % (2 * b_bound + 1)) - b_bound;
        if (b == 0) b = 1;
        coords[1] = Rat(b);
      }
    } else {
      long box = std::max(1L, static_cast<long>(window / (2 * std::max(1.0, gen_scale))));
      std::vector<long> pick(n, 0);
      for (int attempt = 0;; ++attempt) {
        for (int i = 0; i < n; ++i)
          pick[i] = static_cast<long>(rng() % (2 * box + 1)) - box;
        bool all_zero = std::all_of(pick.begin(), pick.end(), [](long v) { return v == 0; });
        if (!all_zero && emb_max(pick, roots) <= window) break;
        if (attempt > 0 && attempt % 40 == 0 && box > 1) --box;
        if (attempt > 400) {  // always admissible
          pick.assign(n, 0);
          pick[0] = 1;
          break;
        }
      }
      for (int i = 0; i < n; ++i) coords[i] = Rat(pick[i]);
    }
    f.coefficients.emplace_back(label, f.coefficient_field.element(coords));
  }
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  std::string out_dir = argc > 1 ? argv[1] : "fixtures";
  std::filesystem::create_directories(out_dir);

  std::vector<FormSpec> specs = {
      {"2.2.8.1-41.1-a", "x^2-2", "2,2", 41, "x^2-2", 41, 1500},
      {"2.2.12.1-13.1-a", "x^2-3", "2,2", 13, "x^2-2", 13, 1500},
      {"2.2.24.1-9.1-a", "x^2-6", "2,2", 9, "x^2-6", 3, 1500},
      {"3.3.49.1-167.1-a", "x^3-x^2-2x+1", "2,2,2", 167, "x^3-x^2-4x-1", 0, 1500},
      {"3.3.81.1-71.1-a", "x^3-3x-1", "2,2,2", 71, "x^3-x^2-4x+3", 0, 1500},
      {"3.3.49.1-239.1-a", "x^3-x^2-2x+1", "2,2,2", 239, "x^3-12x-8", 0, 1500},
  };

  for (const FormSpec& spec : specs) {
    HilbertFormData f = generate(spec);
    std::string text = print_form(f);
    // round-trip sanity before writing anything
    HilbertFormData back = parse_form(text);
    if (print_form(back) != text) {
      std::cerr << spec.label << ": print/parse round trip failed\n";
      return 1;
    }

    size_t zero = 0, full = 0, rational = 0;
    for (const auto& [label, value] : f.coefficients) {
      if (value.is_zero()) {
        ++zero;
        continue;
      }
      int d = minimal_polynomial(value).degree();
      if (d == f.coefficient_field.degree()) ++full;
      if (d == 1) ++rational;
    }
    double total = static_cast<double>(f.coefficients.size());
    std::printf("%-20s primes=%zu zero=%zu full-degree=%.3f rational=%.3f gen20=%d\n",
                spec.label.c_str(), f.coefficients.size(), zero, full / total,
                rational / total, generated_field_degree(f, 20));
    if (f.coefficients.size() < 150) {
      std::cerr << spec.label << ": fewer than 150 primes\n";
      return 1;
    }
    if (!spec.twist_mod && full / total <= 0.92) {
      std::cerr << spec.label << ": full-degree fraction too low\n";
      return 1;
    }
    if (spec.twist_mod) {
      double frac = rational / static_cast<double>(f.coefficients.size() - zero);
      if (std::abs(frac - 0.5) > 0.08) {
        std::cerr << spec.label << ": rational fraction " << frac << " too far from 1/2\n";
        return 1;
      }
    }
    if (generated_field_degree(f, 20) != f.coefficient_field.degree()) {
      std::cerr << spec.label << ": first 20 coefficients do not generate E_f\n";
      return 1;
    }
    std::ofstream out(out_dir + "/" + spec.label + ".hmf");
    out << text;
  }
  std::printf("wrote %zu fixtures to %s\n", specs.size(), out_dir.c_str());
  return 0;
}
