#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hmfd/numfield.hpp"

namespace hmfd {

/// Identifies a prime ideal of the base field: residue prime p, inertia
/// degree f (norm p^f) and a 1-based index distinguishing primes of equal
/// norm.
struct PrimeLabel {
  uint64_t p = 0;
  int f = 1;
  int index = 1;

  uint64_t norm() const;
  bool operator==(const PrimeLabel& o) const { return p == o.p && f == o.f && index == o.index; }
  bool operator<(const PrimeLabel& o) const;
  std::string to_string() const;
};

/// One parsed coefficient corpus: a primitive form's base field, weight,
/// level, coefficient field and the map prime -> coefficient.
struct HilbertFormData {
  std::string label;
  IntPoly base_poly;
  NumberField base_field;
  std::vector<int> weight;
  uint64_t level_norm = 0;
  bool trivial_character = true;
  IntPoly e_f_poly;
  NumberField coefficient_field;
  uint64_t max_norm = 0;
  std::vector<std::pair<PrimeLabel, NFElem>> coefficients;  // sorted by (norm, index)

  const NFElem* find(const PrimeLabel& l) const;
};

struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(int line_, int column_, const std::string& what_);
};

/// Parses and fully validates the fixture text format:
///   header `key = value` lines (label, base_poly, weight, level_norm,
///   trivial_character, e_f_poly, max_norm), then one line per prime
///   `p f index : c0,c1,...` with exact rational power-basis coordinates.
/// '#' comments and blank lines are ignored.
HilbertFormData parse_form(const std::string& text);

/// Canonical printer; parse_form(print_form(f)) reproduces f byte-exactly.
std::string print_form(const HilbertFormData& f);

HilbertFormData load_form_file(const std::string& path);

/// The prime labels a corpus over this base field must cover: good primes
/// (p coprime to disc(base_poly) and to level_norm) of norm <= max_norm,
/// sorted by (norm, index).
std::vector<PrimeLabel> expected_prime_labels(const NumberField& base_field, uint64_t level_norm,
                                              uint64_t max_norm);

enum class GsVerdict { Pass, Fail, Vacuous };

struct GsReport {
  GsVerdict galois = GsVerdict::Fail;  // automorphism count equals degree
  int automorphism_count = 0;
  GsVerdict reality = GsVerdict::Fail;  // totally real or CM
  bool totally_real = false;
  bool cm = false;
  GsVerdict conjugation = GsVerdict::Fail;  // coefficients fixed by conjugation
  std::string to_string() const;
  bool all_pass() const;
};

/// Structural checks of the coefficient field: Galois, totally real or CM,
/// and (for trivial character) invariance under complex conjugation.
GsReport validate_gs_properties(const HilbertFormData& f);

/// Degree of the subfield of E_f generated by the first `first_k` nonzero
/// coefficients.
int generated_field_degree(const HilbertFormData& f, size_t first_k);

}  // namespace hmfd
