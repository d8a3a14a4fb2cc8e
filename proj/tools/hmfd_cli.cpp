// hmfd: density verification toolkit for Hilbert modular form coefficients.
//
// Subcommands: group-verify, split, inert-both, analyze, twists, fetch.
// Exit codes: 0 success, 1 assertion/tolerance failure, 2 usage/input error.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "hmfd/analysis.hpp"
#include "hmfd/fetch.hpp"
#include "hmfd/hmfdata.hpp"
#include "hmfd/matgroup.hpp"
#include "hmfd/report.hpp"
#include "hmfd/splitting.hpp"

using namespace hmfd;

namespace {

struct RunConfig {
  uint64_t seed = 42;
  uint64_t max_prime = 100000;
  double tolerance = 0.01;
  std::string cache = "cache";
  std::string out;
  std::string config_file;
  // subcommand inputs
  std::string group_desc;
  std::string poly, poly1, poly2;
  int r = 1;
  uint64_t samples = 0;
  std::string fixture;
  uint64_t max_norm = 0;
  std::string label;
};

// `key = value` config file; flags seen on the command line win
void apply_config_file(const CLI::App& app, RunConfig& cfg, FetchConfig& fetch_cfg) {
  if (cfg.config_file.empty()) return;
  std::ifstream in(cfg.config_file);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + cfg.config_file);
  std::map<std::string, std::function<void(const std::string&)>> setters = {
      {"seed", [&](const std::string& v) { cfg.seed = std::stoull(v); }},
      {"max_prime", [&](const std::string& v) { cfg.max_prime = std::stoull(v); }},
      {"tolerance", [&](const std::string& v) { cfg.tolerance = std::stod(v); }},
      {"cache", [&](const std::string& v) { cfg.cache = v; }},
      {"out", [&](const std::string& v) { cfg.out = v; }},
  };
  std::map<std::string, std::string> flag_of = {{"seed", "--seed"},
                                                {"max_prime", "--max-prime"},
                                                {"tolerance", "--tolerance"},
                                                {"cache", "--cache"},
                                                {"out", "--out"}};
  std::map<std::string, std::string*> fetch_keys = {
      {"base_url", &fetch_cfg.base_url},       {"forms_path", &fetch_cfg.forms_path},
      {"fields_path", &fetch_cfg.fields_path}, {"nf_path", &fetch_cfg.nf_path},
      {"key_data", &fetch_cfg.key_data},       {"key_field_label", &fetch_cfg.key_field_label},
      {"key_level_norm", &fetch_cfg.key_level_norm}, {"key_weight", &fetch_cfg.key_weight},
      {"key_hecke_poly", &fetch_cfg.key_hecke_poly},
      {"key_eigenvalues", &fetch_cfg.key_eigenvalues},
      {"key_primes", &fetch_cfg.key_primes},   {"key_nf_coeffs", &fetch_cfg.key_nf_coeffs},
  };
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos || line[a] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--config", cfg.config_file + ":" + std::to_string(lineno) +
                                                 ": expected key = value");
    auto trim = [](std::string s) {
      size_t x = s.find_first_not_of(" \t\r");
      size_t y = s.find_last_not_of(" \t\r");
      return x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (auto it = setters.find(key); it != setters.end()) {
      if (app.count(flag_of[key]) == 0) it->second(value);
      continue;
    }
    if (auto it = fetch_keys.find(key); it != fetch_keys.end()) {
      *it->second = value;
      continue;
    }
    throw CLI::ValidationError("--config", "unknown key \"" + key + "\"");
  }
}

struct Output {
  std::ofstream file;
  std::ostream* stream = &std::cout;
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file.open(path, std::ios::binary);
      if (!file) throw CLI::ValidationError("--out", "cannot open " + path);
      stream = &file;
    }
  }
  std::ostream& os() { return *stream; }
};

void provenance(std::ostream& os, const std::string& command, const std::string& config_echo,
                const std::string& fixture_path = "", const std::string& fixture_bytes = "") {
  os << "# hmfd " << command << "\n";
  os << "# version: " << kToolkitVersion << "\n";
  os << "# config: " << config_echo << "\n";
  if (!fixture_path.empty())
    os << "# fixture: " << fixture_path << " fnv1a:" << fnv1a_hex(fixture_bytes) << "\n";
}

// group descriptor "q=3,d=2,detOrder=2"
struct GroupDesc {
  uint64_t q = 0;
  int d = 0;
  uint64_t det_order = 0;
};

GroupDesc parse_group_desc(const std::string& s) {
  GroupDesc g;
  std::istringstream in(s);
  std::string item;
  bool have_q = false, have_d = false, have_det = false;
  while (std::getline(in, item, ',')) {
    size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("bad group descriptor item \"" + item + "\"");
    std::string key = item.substr(0, eq);
    uint64_t value = std::stoull(item.substr(eq + 1));
    if (key == "q") {
      g.q = value;
      have_q = true;
    } else if (key == "d") {
      g.d = static_cast<int>(value);
      have_d = true;
    } else if (key == "detOrder") {
      g.det_order = value;
      have_det = true;
    } else {
      throw std::invalid_argument("unknown group descriptor key \"" + key + "\"");
    }
  }
  if (!have_q || !have_d || !have_det)
    throw std::invalid_argument("group descriptor needs q=, d=, detOrder=");
  return g;
}

int cmd_group_verify(const RunConfig& cfg) {
  GroupDesc desc = parse_group_desc(cfg.group_desc);
  ExtField field = make_ext_field(desc.q, desc.d);
  MatrixGroup g = build_det_group(field, desc.det_order);
  Output out(cfg.out);
  std::ostringstream echo;
  echo << "group=" << cfg.group_desc << " samples=" << cfg.samples << " seed=" << cfg.seed;
  provenance(out.os(), "group-verify", echo.str());
  out.os() << "# group_order: " << g.order() << "\n";
  out.os() << "# class_count: " << g.classes().size() << "\n";
  out.os() << "a,b,class_sum,bound,literal_bound,violates_literal\n";
  uint64_t bound = class_sum_bound(g.det_spec());
  uint64_t literal = class_sum_bound_literal(g.det_spec());
  bool bound_ok = true;
  for (uint64_t ai = 0; ai < field.cardinality(); ++ai)
    for (uint64_t bi = 0; bi < field.cardinality(); ++bi) {
      uint64_t sum = g.charpoly_class_sum(field.element(ai), field.element(bi));
      if (sum > bound) bound_ok = false;
      out.os() << ai << ',' << bi << ',' << sum << ',' << bound << ',' << literal << ','
               << (sum > literal ? "yes" : "no") << "\n";
    }
  if (cfg.samples > 0) {
    out.os() << "# chebotarev: samples=" << cfg.samples << " seed=" << cfg.seed << "\n";
    out.os() << "class_index,size,expected,frequency,sigma,within_3sigma\n";
    auto freq = g.chebotarev_frequencies(cfg.samples, cfg.seed);
    auto census = g.chebotarev_census();
    for (size_t i = 0; i < freq.size(); ++i) {
      double sigma = std::sqrt(census[i] * (1 - census[i]) / cfg.samples);
      bool within = std::abs(freq[i] - census[i]) <= 3 * sigma;
      out.os() << i << ',' << g.classes()[i].size << ',' << fmt6(census[i]) << ','
               << fmt6(freq[i]) << ',' << fmt6(sigma) << ',' << (within ? "yes" : "no") << "\n";
    }
  }
  out.os() << "# bound_verdict: " << (bound_ok ? "pass" : "fail") << "\n";
  return bound_ok ? 0 : 1;
}

int cmd_split(const RunConfig& cfg) {
  NumberField k = make_number_field(parse_poly(cfg.poly));
  DensityEstimate est = inertia_density(k, cfg.r, cfg.max_prime);
  Output out(cfg.out);
  std::ostringstream echo;
  echo << "poly=" << cfg.poly << " r=" << cfg.r << " max_prime=" << cfg.max_prime
       << " tolerance=" << fmt6(cfg.tolerance);
  provenance(out.os(), "split", echo.str());
  out.os() << "r,count,total,estimate,predicted\n";
  out.os() << cfg.r << ',' << est.numerator << ',' << est.denominator << ','
           << fmt6(est.estimate) << ',' << fmt6(est.predicted) << "\n";
  bool ok = std::abs(est.estimate - est.predicted) < cfg.tolerance;
  out.os() << "# tolerance_verdict: " << (ok ? "pass" : "fail") << "\n";
  return ok ? 0 : 1;
}

int cmd_inert_both(const RunConfig& cfg) {
  NumberField f = make_number_field(parse_poly(cfg.poly1));
  NumberField e = make_number_field(parse_poly(cfg.poly2));
  auto list = inert_in_both(f, e, cfg.max_prime);
  Output out(cfg.out);
  std::ostringstream echo;
  echo << "poly1=" << cfg.poly1 << " poly2=" << cfg.poly2 << " max_prime=" << cfg.max_prime;
  provenance(out.os(), "inert-both", echo.str());
  out.os() << "# count: " << list.size() << "\n";
  out.os() << "p\n";
  for (uint64_t p : list) out.os() << p << "\n";
  return list.empty() ? 1 : 0;
}

int cmd_analyze(const RunConfig& cfg, bool twists_only) {
  std::ifstream in(cfg.fixture);
  if (!in) throw CLI::ValidationError("--fixture", "cannot open " + cfg.fixture);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string bytes = buf.str();
  HilbertFormData f = parse_form(bytes);
  uint64_t X = cfg.max_norm ? cfg.max_norm : f.max_norm;
  Output out(cfg.out);
  std::ostringstream echo;
  echo << "fixture=" << cfg.fixture << " max_norm=" << X;
  provenance(out.os(), twists_only ? "twists" : "analyze", echo.str(), cfg.fixture, bytes);

  if (twists_only) {
    TwistGroup t = detect_inner_twists(f);
    Subfield ff = fixed_field_of_twists(f, t);
    out.os() << "label: " << f.label << "\n";
    out.os() << "gamma_count: " << t.order()
             << (t.closure_verified ? " (closure verified)" : " (closure FAILED)") << "\n";
    for (const InnerTwist& tw : t.twists)
      out.os() << "gamma: alpha -> " << tw.gamma.generator_image().to_string() << ", support "
               << tw.support << "\n";
    out.os() << "ff_minpoly: " << minimal_polynomial(ff.generator).to_string() << " (degree "
             << ff.degree << ")\n";
    return t.closure_verified ? 0 : 1;
  }

  AnalysisReport rep = analyze_form(f, X);
  out.os() << report_to_text(f, rep);
  return rep.ok ? 0 : 1;
}

int cmd_fetch(const RunConfig& cfg, FetchConfig fetch_cfg) {
  fetch_cfg.cache_dir = cfg.cache;
  std::string text = fetch_form(cfg.label, fetch_cfg);
  if (!cfg.out.empty()) {
    std::ofstream out(cfg.out, std::ios::binary);
    out << text;
  }
  std::cout << "fetched " << cfg.label << " (" << parse_form(text).coefficients.size()
            << " primes) into " << cfg.cache << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"density verification toolkit for Hilbert modular form coefficients"};
  app.require_subcommand(1);
  RunConfig cfg;
  FetchConfig fetch_cfg;

  app.add_option("--seed", cfg.seed, "RNG seed for sampled computations");
  app.add_option("--max-prime", cfg.max_prime, "prime sweep bound");
  app.add_option("--tolerance", cfg.tolerance, "density comparison tolerance");
  app.add_option("--cache", cfg.cache, "fetch cache directory");
  app.add_option("--out", cfg.out, "write the report to this file instead of stdout");
  app.add_option("--config", cfg.config_file, "key = value config file (flags override)");

  auto* gv = app.add_subcommand("group-verify", "exhaustive char-poly class sums and bounds");
  gv->fallthrough();
  gv->add_option("--group", cfg.group_desc, "descriptor, e.g. q=3,d=2,detOrder=2")->required();
  gv->add_option("--samples", cfg.samples, "Chebotarev sample count (0 = skip)");

  auto* sp = app.add_subcommand("split", "inertia-degree density vs the phi(r)/n prediction");
  sp->fallthrough();
  sp->add_option("--poly", cfg.poly, "defining polynomial, e.g. x^3-x^2-2x+1")->required();
  sp->add_option("--r", cfg.r, "inertia degree")->required();

  auto* ib = app.add_subcommand("inert-both", "primes inert in two cyclic fields");
  ib->fallthrough();
  ib->add_option("--poly1", cfg.poly1, "first field")->required();
  ib->add_option("--poly2", cfg.poly2, "second field")->required();

  auto* an = app.add_subcommand("analyze", "full density analysis of a coefficient corpus");
  an->fallthrough();
  an->add_option("--fixture", cfg.fixture, "corpus file")->required();
  an->add_option("--max-norm", cfg.max_norm, "restrict to primes of norm <= X");

  auto* tw = app.add_subcommand("twists", "inner-twist group of a coefficient corpus");
  tw->fallthrough();
  tw->add_option("--fixture", cfg.fixture, "corpus file")->required();

  auto* fe = app.add_subcommand("fetch", "download a coefficient corpus into the cache");
  fe->fallthrough();
  fe->add_option("--label", cfg.label, "form label, e.g. 2.2.8.1-41.1-a")->required();

  try {
    app.parse(argc, argv);
    apply_config_file(app, cfg, fetch_cfg);
    if (gv->parsed()) return cmd_group_verify(cfg);
    if (sp->parsed()) return cmd_split(cfg);
    if (ib->parsed()) return cmd_inert_both(cfg);
    if (an->parsed()) return cmd_analyze(cfg, false);
    if (tw->parsed()) return cmd_analyze(cfg, true);
    if (fe->parsed()) return cmd_fetch(cfg, fetch_cfg);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const OfflineError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NotFoundError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "fixture error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
