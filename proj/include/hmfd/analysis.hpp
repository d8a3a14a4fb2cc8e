#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hmfd/hmfdata.hpp"
#include "hmfd/numfield.hpp"

namespace hmfd {

/// An inner twist: an automorphism gamma of E_f together with the observed
/// character values eps(p) = gamma(C(p))/C(p) on nonzero coefficients.
struct InnerTwist {
  FieldAutomorphism gamma;
  std::vector<std::pair<PrimeLabel, NFElem>> epsilon_values;
  size_t support = 0;
};

struct TwistGroup {
  std::vector<InnerTwist> twists;  // trivial twist first
  bool closure_verified = false;

  size_t order() const { return twists.size(); }
  const InnerTwist* find(const FieldAutomorphism& gamma) const;
};

struct GenerationRecord {
  PrimeLabel label;
  int degree_c = 0;      // [Q(C(p)) : Q]
  int degree_cstar = 0;  // [Q(C*(p)) : Q]
  bool zero = false;
};

struct GenerationProfile {
  std::vector<GenerationRecord> records;
  std::map<int, size_t> totals_c, totals_cstar;
  size_t zero_count = 0;
  size_t total = 0;
  uint64_t max_norm = 0;
  int ef_degree = 0, ff_degree = 0;
  double frac_full = 0, frac_cstar_full = 0, frac_zero = 0;
};

/// Density of one subfield k inside the coefficient data, with the paired
/// twist-character criterion counts from the inner-twist subgroup fixing k.
struct SubfieldDensity {
  IntPoly subfield_minpoly;
  int degree = 0;
  bool contains_ff = false;
  size_t total = 0;          // primes of norm <= X
  size_t nonzero_total = 0;  // those with C(p) != 0
  size_t in_count = 0;       // C(p) in k (zeros included; 0 lies in every k)
  size_t in_count_nonzero = 0;
  size_t criterion_count = 0;        // nonzero p with eps_gamma(p) = 1 for all gamma in Gamma'
  size_t exact_count = 0;            // nonzero p with Q(C(p)) = k
  size_t exact_criterion_count = 0;  // eps = 1 on Gamma', eps != 1 off it (and F_f in Q(C))
  double fraction = 0;               // in_count / total
  double criterion_fraction = 0;     // criterion_count / nonzero_total
  double exact_fraction = 0;         // exact_count / nonzero_total
  int inferred_index = 0;            // nearest integer to 1/fraction; 0 when fraction = 0
  bool criterion_agrees = false;     // exact set equality on nonzero primes
  bool exact_criterion_agrees = false;
};

enum class CmVerdict { CmSuspect, NonCmConsistent, Inconclusive };

struct CmReport {
  CmVerdict verdict = CmVerdict::Inconclusive;
  double zero_fraction = 0;
  size_t zero_count = 0;
  size_t total = 0;
};

/// C*(p, f) = C(p, f)^2 / Psi*(p); with trivial character this is the square.
/// Throws on a label absent from the corpus.
NFElem cstar(const HilbertFormData& f, const PrimeLabel& label);

/// Per-prime generation degrees of C and C* with summary densities; X must
/// not exceed the corpus bound.
GenerationProfile generation_profile(const HilbertFormData& f, uint64_t X);

/// Corpus-level inner-twist certificate: gamma is accepted iff
/// gamma(C)/C is a root of unity for every nonzero coefficient. Needs at
/// least 20 nonzero coefficients.
TwistGroup detect_inner_twists(const HilbertFormData& f);

/// Fixed field of the detected twist group, cross-checked against the field
/// generated by the C* values (they must coincide).
Subfield fixed_field_of_twists(const HilbertFormData& f, const TwistGroup& t);

SubfieldDensity subfield_density(const HilbertFormData& f, const TwistGroup& t,
                                 const Subfield& k, uint64_t X);
SubfieldDensity subfield_density(const HilbertFormData& f, const Subfield& k, uint64_t X);

/// Same record, highlighting the exact-generation counts (they are computed
/// together with subfield_density).
SubfieldDensity exact_field_density(const HilbertFormData& f, const TwistGroup& t,
                                    const Subfield& k, uint64_t X);

/// Zero-coefficient fraction with the CM verdict bands (> 0.4 suspect,
/// < 0.1 non-CM-consistent). Needs a corpus of at least 100 primes.
CmReport cm_heuristic(const HilbertFormData& f);

/// The subfields used for density analysis: the full lattice when E_f is
/// Galois, otherwise { Q, E_f } for prime degree.
std::vector<Subfield> analysis_subfields(const HilbertFormData& f);

/// Full report over one corpus: generation profile, twist group, F_f,
/// per-subfield densities, consistency checks. `ok` reflects the internal
/// invariants (cstar membership, twist closure, criterion agreement,
/// exact-count partition).
struct AnalysisReport {
  GenerationProfile profile;
  TwistGroup twists;
  IntPoly ff_minpoly;
  int ff_degree = 0;
  std::vector<SubfieldDensity> densities;
  CmReport cm;
  GsReport gs;
  bool cstar_membership_ok = false;
  bool partition_ok = false;
  bool criterion_ok = false;
  bool ok = false;
};

AnalysisReport analyze_form(const HilbertFormData& f, uint64_t X);

/// Renders the report as the structured text document (human-readable tables
/// plus a machine section). Deterministic for equal inputs.
std::string report_to_text(const HilbertFormData& f, const AnalysisReport& rep);

}  // namespace hmfd
