#include "hmfd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hmfd/report.hpp"

namespace hmfd {

namespace {

bool is_root_of_unity(const NFElem& u) {
  const NumberField& k = u.parent();
  if (u.is_zero()) return false;
  if (is_totally_real(k)) {
    return u == k.one() || u == -k.one();
  }
  IntPoly mp = minimal_polynomial(u);
  for (int N = 1; N <= 24; ++N) {
    std::vector<Int> c(N + 1, Int(0));
    c[0] = -1;
    c[N] = 1;
    IntPoly cyc{c};
    if (gcd_over_q(mp, cyc).degree() == mp.degree()) return true;
  }
  return false;
}

// subgroup of the twist group fixing k pointwise
std::vector<size_t> twists_fixing(const TwistGroup& t, const Subfield& k) {
  std::vector<size_t> out;
  for (size_t i = 0; i < t.twists.size(); ++i)
    if (t.twists[i].gamma.apply(k.generator) == k.generator) out.push_back(i);
  return out;
}

Subfield fixed_field_raw(const HilbertFormData& f, const TwistGroup& t) {
  std::vector<FieldAutomorphism> gammas;
  for (const InnerTwist& tw : t.twists) gammas.push_back(tw.gamma);
  return fixed_field(f.coefficient_field, gammas);
}

// degree of the subfield generated by the nonzero squares C(p)^2
int cstar_generated_degree(const HilbertFormData& f) {
  const NumberField& ef = f.coefficient_field;
  if (ef.degree() == 1) return 1;
  bool all_rational = true;
  int max_deg = 1;
  std::vector<NFElem> squares;
  for (const auto& [label, value] : f.coefficients) {
    if (value.is_zero()) continue;
    NFElem s = value * value;
    squares.push_back(s);
    if (!s.is_rational()) all_rational = false;
    max_deg = std::max(max_deg, minimal_polynomial(s).degree());
  }
  if (all_rational) return 1;
  if (max_deg == ef.degree()) return ef.degree();
  if (ef.is_galois()) {
    for (const Subfield& s : subfield_lattice(ef)) {
      bool all_in = std::all_of(squares.begin(), squares.end(), [&](const NFElem& e) {
        return subfield_membership(e, s).has_value();
      });
      if (all_in) return s.degree;
    }
  }
  throw std::runtime_error("cstar field: cannot locate the generated subfield");
}

}  // namespace

const InnerTwist* TwistGroup::find(const FieldAutomorphism& gamma) const {
  for (const InnerTwist& t : twists)
    if (t.gamma == gamma) return &t;
  return nullptr;
}

NFElem cstar(const HilbertFormData& f, const PrimeLabel& label) {
  if (!f.trivial_character)
    throw std::invalid_argument("cstar: only trivial characters are supported");
  const NFElem* c = f.find(label);
  if (!c) throw std::out_of_range("cstar: no coefficient for prime " + label.to_string());
  return *c * *c;
}

GenerationProfile generation_profile(const HilbertFormData& f, uint64_t X) {
  if (X > f.max_norm)
    throw std::invalid_argument("generation_profile: X exceeds the corpus bound " +
                                std::to_string(f.max_norm));
  GenerationProfile prof;
  prof.max_norm = X;
  prof.ef_degree = f.coefficient_field.degree();
  TwistGroup t = detect_inner_twists(f);
  prof.ff_degree = fixed_field_raw(f, t).degree;
  for (const auto& [label, value] : f.coefficients) {
    if (label.norm() > X) continue;
    GenerationRecord rec;
    rec.label = label;
    rec.zero = value.is_zero();
    rec.degree_c = rec.zero ? 1 : minimal_polynomial(value).degree();
    rec.degree_cstar = rec.zero ? 1 : minimal_polynomial(value * value).degree();
    ++prof.totals_c[rec.degree_c];
    ++prof.totals_cstar[rec.degree_cstar];
    if (rec.zero) ++prof.zero_count;
    prof.records.push_back(rec);
  }
  prof.total = prof.records.size();
  if (prof.total) {
    size_t full = 0, cstar_full = 0;
    for (const auto& r : prof.records) {
      if (r.degree_c == prof.ef_degree) ++full;
      if (r.degree_cstar == prof.ff_degree) ++cstar_full;
    }
    prof.frac_full = static_cast<double>(full) / prof.total;
    prof.frac_cstar_full = static_cast<double>(cstar_full) / prof.total;
    prof.frac_zero = static_cast<double>(prof.zero_count) / prof.total;
  }
  return prof;
}

TwistGroup detect_inner_twists(const HilbertFormData& f) {
  const NumberField& ef = f.coefficient_field;
  std::vector<std::pair<PrimeLabel, NFElem>> nonzero;
  for (const auto& [label, value] : f.coefficients)
    if (!value.is_zero()) nonzero.emplace_back(label, value);
  if (nonzero.size() < 20)
    throw std::runtime_error("detect_inner_twists: inconclusive, only " +
                             std::to_string(nonzero.size()) +
                             " nonzero coefficients (need 20)");
  const bool real = is_totally_real(ef);
  TwistGroup out;
  for (const FieldAutomorphism& gamma : ef.automorphisms()) {
    InnerTwist tw;
    tw.gamma = gamma;
    bool accepted = true;
    for (const auto& [label, c] : nonzero) {
      NFElem image = gamma.apply(c);
      NFElem eps;
      if (real) {
        if (image == c)
          eps = ef.one();
        else if (image == -c)
          eps = -ef.one();
        else {
          accepted = false;
          break;
        }
      } else {
        eps = image * c.inverse();
        if (!is_root_of_unity(eps)) {
          accepted = false;
          break;
        }
      }
      tw.epsilon_values.emplace_back(label, eps);
    }
    if (!accepted) continue;
    tw.support = tw.epsilon_values.size();
    if (gamma.is_identity())
      out.twists.insert(out.twists.begin(), std::move(tw));
    else
      out.twists.push_back(std::move(tw));
  }

  // closure on the data: gamma1 gamma2 must be accepted, with
  // eps_{12}(p) = eps_1(p) * gamma_1(eps_2(p))
  out.closure_verified = true;
  for (const InnerTwist& t1 : out.twists) {
    for (const InnerTwist& t2 : out.twists) {
      FieldAutomorphism comp = t1.gamma.compose(t2.gamma);
      const InnerTwist* tc = out.find(comp);
      if (!tc) {
        out.closure_verified = false;
        continue;
      }
      for (size_t i = 0; i < tc->epsilon_values.size(); ++i) {
        NFElem expected = t1.epsilon_values[i].second * t1.gamma.apply(t2.epsilon_values[i].second);
        if (!(tc->epsilon_values[i].second == expected)) {
          out.closure_verified = false;
          break;
        }
      }
    }
  }
  return out;
}

Subfield fixed_field_of_twists(const HilbertFormData& f, const TwistGroup& t) {
  Subfield fix = fixed_field_raw(f, t);
  int gen_deg = cstar_generated_degree(f);
  bool consistent = gen_deg == fix.degree;
  if (consistent) {
    for (const auto& [label, value] : f.coefficients) {
      if (value.is_zero()) continue;
      if (!subfield_membership(value * value, fix).has_value()) {
        consistent = false;
        break;
      }
    }
  }
  if (!consistent)
    throw std::runtime_error(
        "fixed_field_of_twists: fixed field of the twist group (degree " +
        std::to_string(fix.degree) + ") differs from the field generated by the C* values "
        "(degree " + std::to_string(gen_deg) + "); corpus or detection inconsistency");
  return fix;
}

SubfieldDensity subfield_density(const HilbertFormData& f, const TwistGroup& t,
                                 const Subfield& k, uint64_t X) {
  if (!k.ambient.same_field(f.coefficient_field))
    throw std::invalid_argument("subfield_density: subfield is not inside E_f");
  SubfieldDensity out;
  out.subfield_minpoly = minimal_polynomial(k.generator);
  out.degree = k.degree;

  Subfield ff = fixed_field_raw(f, t);
  out.contains_ff = subfield_membership(ff.generator, k).has_value();

  std::vector<size_t> gamma_prime = twists_fixing(t, k);

  size_t nonzero_idx = 0;
  for (const auto& [label, value] : f.coefficients) {
    size_t idx = 0;
    if (!value.is_zero()) idx = nonzero_idx++;  // epsilon index over the whole corpus
    if (label.norm() > X) continue;
    ++out.total;
    if (value.is_zero()) {
      ++out.in_count;  // zero lies in every subfield
      continue;
    }
    ++out.nonzero_total;
    bool member = subfield_membership(value, k).has_value();
    if (member) {
      ++out.in_count;
      ++out.in_count_nonzero;
    }
    bool crit = true;
    for (size_t i : gamma_prime) {
      const NFElem& eps = t.twists[i].epsilon_values[idx].second;
      if (!(eps == f.coefficient_field.one())) {
        crit = false;
        break;
      }
    }
    if (crit) ++out.criterion_count;

    int deg_c = minimal_polynomial(value).degree();
    if (member && deg_c == k.degree) ++out.exact_count;

    if (crit) {
      bool exact_crit = true;
      for (size_t i = 0; i < t.twists.size() && exact_crit; ++i) {
        if (std::find(gamma_prime.begin(), gamma_prime.end(), i) != gamma_prime.end()) continue;
        const NFElem& eps = t.twists[i].epsilon_values[idx].second;
        if (eps == f.coefficient_field.one()) exact_crit = false;
      }
      if (exact_crit) {
        // the character identity pins Q(C) only when F_f is inside Q(C)
        Subfield qc{f.coefficient_field, value, deg_c};
        if (!subfield_membership(ff.generator, qc).has_value()) exact_crit = false;
      }
      if (exact_crit) ++out.exact_criterion_count;
    }
  }

  out.fraction = out.total ? static_cast<double>(out.in_count) / out.total : 0.0;
  out.criterion_fraction =
      out.nonzero_total ? static_cast<double>(out.criterion_count) / out.nonzero_total : 0.0;
  out.exact_fraction =
      out.nonzero_total ? static_cast<double>(out.exact_count) / out.nonzero_total : 0.0;
  out.inferred_index = out.fraction > 0 ? static_cast<int>(std::lround(1.0 / out.fraction)) : 0;
  out.criterion_agrees = out.in_count_nonzero == out.criterion_count;
  out.exact_criterion_agrees = out.exact_count == out.exact_criterion_count;
  return out;
}

SubfieldDensity subfield_density(const HilbertFormData& f, const Subfield& k, uint64_t X) {
  return subfield_density(f, detect_inner_twists(f), k, X);
}

SubfieldDensity exact_field_density(const HilbertFormData& f, const TwistGroup& t,
                                    const Subfield& k, uint64_t X) {
  return subfield_density(f, t, k, X);
}

CmReport cm_heuristic(const HilbertFormData& f) {
  if (f.coefficients.size() < 100)
    throw std::invalid_argument("cm_heuristic: corpus has fewer than 100 primes");
  CmReport rep;
  rep.total = f.coefficients.size();
  for (const auto& [label, value] : f.coefficients)
    if (value.is_zero()) ++rep.zero_count;
  rep.zero_fraction = static_cast<double>(rep.zero_count) / rep.total;
  if (rep.zero_fraction > 0.4)
    rep.verdict = CmVerdict::CmSuspect;
  else if (rep.zero_fraction < 0.1)
    rep.verdict = CmVerdict::NonCmConsistent;
  else
    rep.verdict = CmVerdict::Inconclusive;
  return rep;
}

std::vector<Subfield> analysis_subfields(const HilbertFormData& f) {
  const NumberField& ef = f.coefficient_field;
  if (ef.degree() == 1) {
    return {Subfield{ef, ef.one(), 1}};
  }
  if (ef.is_galois()) return subfield_lattice(ef);
  bool prime_degree = true;
  for (int d = 2; d * d <= ef.degree(); ++d)
    if (ef.degree() % d == 0) prime_degree = false;
  if (!prime_degree)
    throw std::runtime_error(
        "analysis_subfields: non-Galois coefficient field of composite degree");
  return {Subfield{ef, ef.one(), 1}, Subfield{ef, ef.generator(), ef.degree()}};
}

AnalysisReport analyze_form(const HilbertFormData& f, uint64_t X) {
  AnalysisReport rep;
  rep.gs = validate_gs_properties(f);
  rep.twists = detect_inner_twists(f);
  Subfield ff = fixed_field_of_twists(f, rep.twists);
  rep.ff_minpoly = minimal_polynomial(ff.generator);
  rep.ff_degree = ff.degree;
  rep.profile = generation_profile(f, X);
  rep.cm = cm_heuristic(f);

  rep.cstar_membership_ok = true;
  for (const auto& [label, value] : f.coefficients) {
    if (value.is_zero()) continue;
    Subfield qc{f.coefficient_field, value, minimal_polynomial(value).degree()};
    if (!subfield_membership(value * value, qc).has_value()) {
      rep.cstar_membership_ok = false;
      break;
    }
  }

  size_t exact_sum = 0;
  rep.criterion_ok = true;
  for (const Subfield& k : analysis_subfields(f)) {
    SubfieldDensity d = subfield_density(f, rep.twists, k, X);
    exact_sum += d.exact_count;
    if (d.contains_ff && !(d.criterion_agrees && d.exact_criterion_agrees))
      rep.criterion_ok = false;
    rep.densities.push_back(std::move(d));
  }
  size_t nonzero_total = rep.densities.empty() ? 0 : rep.densities.front().nonzero_total;
  rep.partition_ok = exact_sum == nonzero_total;

  rep.ok = rep.cstar_membership_ok && rep.partition_ok && rep.criterion_ok &&
           rep.twists.closure_verified;
  return rep;
}

std::string report_to_text(const HilbertFormData& f, const AnalysisReport& rep) {
  std::ostringstream out;
  out << "== form ==\n";
  out << "label: " << f.label << "\n";
  out << "base_poly: " << f.base_poly.to_string() << "\n";
  out << "e_f_poly: " << f.e_f_poly.to_string() << " (degree " << f.coefficient_field.degree()
      << ")\n";
  out << "level_norm: " << f.level_norm << "\n";
  out << "primes: " << f.coefficients.size() << " (norm <= " << f.max_norm << ")\n";

  out << "== coefficient field checks ==\n" << rep.gs.to_string() << "\n";

  out << "== generation profile (norm <= " << rep.profile.max_norm << ") ==\n";
  out << "degree,count_c,count_cstar\n";
  {
    std::map<int, std::pair<size_t, size_t>> rows;
    for (const auto& [d, c] : rep.profile.totals_c) rows[d].first = c;
    for (const auto& [d, c] : rep.profile.totals_cstar) rows[d].second = c;
    for (const auto& [d, counts] : rows)
      out << d << ',' << counts.first << ',' << counts.second << "\n";
  }
  {
    size_t full = 0;
    for (const auto& r : rep.profile.records)
      if (r.degree_c == rep.profile.ef_degree) ++full;
    auto [lo, hi] = wilson95(full, rep.profile.total);
    out << "frac_full_degree: " << fmt6(rep.profile.frac_full) << " (wilson95 " << fmt6(lo)
        << ".." << fmt6(hi) << ")\n";
    out << "frac_cstar_generates_ff: " << fmt6(rep.profile.frac_cstar_full) << "\n";
    out << "frac_zero: " << fmt6(rep.profile.frac_zero) << "\n";
  }

  out << "== inner twists ==\n";
  out << "gamma_count: " << rep.twists.order()
      << (rep.twists.closure_verified ? " (closure verified)" : " (closure FAILED)") << "\n";
  for (const InnerTwist& t : rep.twists.twists) {
    out << "gamma: alpha -> " << t.gamma.generator_image().to_string() << ", support "
        << t.support;
    if (!t.gamma.is_identity() && !t.epsilon_values.empty()) {
      size_t plus = 0;
      for (const auto& [label, eps] : t.epsilon_values)
        if (eps == f.coefficient_field.one()) ++plus;
      out << ", eps=+1 on " << plus << "/" << t.epsilon_values.size();
    }
    out << "\n";
  }
  out << "ff_minpoly: " << rep.ff_minpoly.to_string() << " (degree " << rep.ff_degree << ")\n";

  out << "== subfield densities ==\n";
  out << "minpoly,degree,contains_ff,fraction,criterion_fraction,exact_fraction,inferred_index,"
         "wilson_lo,wilson_hi\n";
  for (const SubfieldDensity& d : rep.densities) {
    auto [lo, hi] = wilson95(d.in_count, d.total);
    out << d.subfield_minpoly.to_string() << ',' << d.degree << ','
        << (d.contains_ff ? "yes" : "no") << ',' << fmt6(d.fraction) << ','
        << fmt6(d.criterion_fraction) << ',' << fmt6(d.exact_fraction) << ','
        << d.inferred_index << ',' << fmt6(lo) << ',' << fmt6(hi) << "\n";
  }

  out << "== cm heuristic ==\n";
  out << "zero_fraction: " << fmt6(rep.cm.zero_fraction) << " (" << rep.cm.zero_count << "/"
      << rep.cm.total << ") verdict: ";
  switch (rep.cm.verdict) {
    case CmVerdict::CmSuspect: out << "CM-suspect"; break;
    case CmVerdict::NonCmConsistent: out << "non-CM-consistent"; break;
    default: out << "inconclusive";
  }
  out << "\n";

  out << "== machine ==\n";
  out << "label=" << f.label << "\n";
  out << "ef_degree=" << f.coefficient_field.degree() << "\n";
  out << "gamma_order=" << rep.twists.order() << "\n";
  out << "ff_degree=" << rep.ff_degree << "\n";
  out << "ff_minpoly=" << rep.ff_minpoly.to_string() << "\n";
  out << "frac_full=" << fmt6(rep.profile.frac_full) << "\n";
  out << "frac_zero=" << fmt6(rep.profile.frac_zero) << "\n";
  out << "cstar_membership=" << (rep.cstar_membership_ok ? "pass" : "fail") << "\n";
  out << "twist_closure=" << (rep.twists.closure_verified ? "pass" : "fail") << "\n";
  out << "criterion=" << (rep.criterion_ok ? "pass" : "fail") << "\n";
  out << "partition=" << (rep.partition_ok ? "pass" : "fail") << "\n";
  out << "ok=" << (rep.ok ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace hmfd
