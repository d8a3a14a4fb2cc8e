#include "hmfd/hmfdata.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "hmfd/ffcore.hpp"

namespace hmfd {

uint64_t PrimeLabel::norm() const {
  uint64_t n = 1;
  for (int i = 0; i < f; ++i) n *= p;
  return n;
}

bool PrimeLabel::operator<(const PrimeLabel& o) const {
  if (norm() != o.norm()) return norm() < o.norm();
  if (p != o.p) return p < o.p;
  return index < o.index;
}

std::string PrimeLabel::to_string() const {
  return std::to_string(p) + " " + std::to_string(f) + " " + std::to_string(index);
}

const NFElem* HilbertFormData::find(const PrimeLabel& l) const {
  for (const auto& [label, value] : coefficients)
    if (label == l) return &value;
  return nullptr;
}

ParseError::ParseError(int line_, int column_, const std::string& what_)
    : std::runtime_error("line " + std::to_string(line_) + ", column " +
                         std::to_string(column_) + ": " + what_),
      line(line_),
      column(column_) {}

namespace {

bool is_prime_small(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

Rat parse_rat(const std::string& s, int line, int col) {
  if (s.empty()) throw ParseError(line, col, "empty coefficient");
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '/'))
      throw ParseError(line, col + static_cast<int>(i), "bad character in rational");
  }
  try {
    Rat r(s);
    if (r.get_den() == 0) throw ParseError(line, col, "zero denominator in \"" + s + "\"");
    r.canonicalize();
    return r;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError(line, col, "malformed rational \"" + s + "\"");
  }
}

}  // namespace

std::vector<PrimeLabel> expected_prime_labels(const NumberField& base_field, uint64_t level_norm,
                                              uint64_t max_norm) {
  std::vector<PrimeLabel> out;
  for (uint64_t p = 2; p <= max_norm; ++p) {
    if (!is_prime_small(p)) continue;
    if (level_norm % p == 0) continue;
    std::vector<std::pair<int, int>> pattern;
    try {
      pattern = ddf_degrees(base_field.minpoly(), static_cast<uint32_t>(p));
    } catch (const BadPrimeError&) {
      continue;  // ramified in the base field
    }
    for (auto [r, mult] : pattern) {
      uint64_t norm = 1;
      bool fits = true;
      for (int i = 0; i < r; ++i) {
        norm *= p;
        if (norm > max_norm) fits = false;
      }
      if (!fits) continue;
      for (int idx = 1; idx <= mult; ++idx) out.push_back(PrimeLabel{p, r, idx});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

HilbertFormData parse_form(const std::string& text) {
  HilbertFormData f;
  std::map<std::string, std::string> header;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool in_coeffs = false;
  std::vector<std::tuple<PrimeLabel, std::vector<Rat>, int>> coeff_rows;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    size_t colon = line.find(" : ");
    size_t eq = line.find('=');
    if (!in_coeffs && colon == std::string::npos && eq != std::string::npos) {
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if (header.count(key)) throw ParseError(lineno, 1, "duplicate header key \"" + key + "\"");
      header[key] = value;
      continue;
    }
    if (colon == std::string::npos)
      throw ParseError(lineno, 1, "expected `p f index : coords` coefficient line");
    in_coeffs = true;
    std::istringstream head(line.substr(0, colon));
    uint64_t p = 0;
    int deg = 0, index = 0;
    if (!(head >> p >> deg >> index) || !(head >> std::ws).eof())
      throw ParseError(lineno, 1, "malformed prime label");
    if (!is_prime_small(p)) throw ParseError(lineno, 1, std::to_string(p) + " is not prime");
    if (deg < 1 || index < 1) throw ParseError(lineno, 1, "inertia degree and index must be >= 1");
    if (deg > 40) throw ParseError(lineno, 1, "inertia degree out of range");
    std::string coords_text = trim(line.substr(colon + 3));
    std::vector<Rat> coords;
    size_t pos = 0;
    int col = static_cast<int>(colon) + 4;
    while (pos <= coords_text.size()) {
      size_t comma = coords_text.find(',', pos);
      std::string item = trim(coords_text.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos));
      coords.push_back(parse_rat(item, lineno, col));
      if (comma == std::string::npos) break;
      pos = comma + 1;
      col = static_cast<int>(colon) + 4 + static_cast<int>(pos);
    }
    coeff_rows.emplace_back(PrimeLabel{p, deg, index}, std::move(coords), lineno);
  }

  for (const char* key : {"label", "base_poly", "weight", "level_norm", "trivial_character",
                          "e_f_poly", "max_norm"})
    if (!header.count(key)) throw ParseError(lineno, 1, std::string("missing header key \"") + key + "\"");

  f.label = header["label"];
  try {
    f.base_poly = parse_poly(header["base_poly"]);
    f.base_field = make_number_field(f.base_poly);
    f.e_f_poly = parse_poly(header["e_f_poly"]);
    f.coefficient_field = make_number_field(f.e_f_poly);
  } catch (const std::invalid_argument& e) {
    throw ParseError(1, 1, e.what());
  }
  {
    std::istringstream ws(header["weight"]);
    std::string item;
    while (std::getline(ws, item, ',')) f.weight.push_back(std::stoi(trim(item)));
  }
  if (f.weight.empty()) throw ParseError(1, 1, "empty weight vector");
  for (int k : f.weight) {
    if (k < 2) throw ParseError(1, 1, "weight entries must be >= 2");
    if ((k - f.weight[0]) % 2 != 0)
      throw ParseError(1, 1, "weight entries must be pairwise congruent mod 2");
  }
  if (static_cast<int>(f.weight.size()) != f.base_field.degree())
    throw ParseError(1, 1, "weight vector length must equal the base field degree");
  f.level_norm = std::stoull(header["level_norm"]);
  if (header["trivial_character"] == "true")
    f.trivial_character = true;
  else if (header["trivial_character"] == "false")
    throw ParseError(1, 1, "non-trivial characters are not supported");
  else
    throw ParseError(1, 1, "trivial_character must be true or false");
  f.max_norm = std::stoull(header["max_norm"]);

  const int ef_degree = f.coefficient_field.degree();
  for (auto& [label, coords, line] : coeff_rows) {
    if (static_cast<int>(coords.size()) != ef_degree)
      throw ParseError(line, 1,
                       "coefficient vector of dimension " + std::to_string(coords.size()) +
                           " for prime " + label.to_string() + " (expected " +
                           std::to_string(ef_degree) + ")");
    f.coefficients.emplace_back(label, f.coefficient_field.element(coords));
  }
  if (f.coefficients.empty()) throw ParseError(lineno, 1, "empty coefficient list");

  for (size_t i = 1; i < f.coefficients.size(); ++i) {
    if (f.coefficients[i].first == f.coefficients[i - 1].first)
      throw ParseError(1, 1, "duplicate prime label " + f.coefficients[i].first.to_string());
    if (f.coefficients[i].first < f.coefficients[i - 1].first)
      throw ParseError(1, 1,
                       "coefficients out of (norm, index) order at " +
                           f.coefficients[i].first.to_string());
  }

  // coverage: exactly the good primes of norm <= max_norm
  std::vector<PrimeLabel> expected =
      expected_prime_labels(f.base_field, f.level_norm, f.max_norm);
  if (f.coefficients.size() != expected.size()) {
    throw ParseError(1, 1,
                     "corpus covers " + std::to_string(f.coefficients.size()) +
                         " primes but the base field has " + std::to_string(expected.size()) +
                         " good primes of norm <= " + std::to_string(f.max_norm));
  }
  for (size_t i = 0; i < expected.size(); ++i)
    if (!(f.coefficients[i].first == expected[i]))
      throw ParseError(1, 1, "unexpected prime label " + f.coefficients[i].first.to_string() +
                                 " (expected " + expected[i].to_string() + ")");
  return f;
}

std::string print_form(const HilbertFormData& f) {
  std::ostringstream out;
  out << "label = " << f.label << "\n";
  out << "base_poly = " << f.base_poly.to_string() << "\n";
  out << "weight = ";
  for (size_t i = 0; i < f.weight.size(); ++i) {
    if (i) out << ',';
    out << f.weight[i];
  }
  out << "\n";
  out << "level_norm = " << f.level_norm << "\n";
  out << "trivial_character = " << (f.trivial_character ? "true" : "false") << "\n";
  out << "e_f_poly = " << f.e_f_poly.to_string() << "\n";
  out << "max_norm = " << f.max_norm << "\n";
  for (const auto& [label, value] : f.coefficients) {
    out << label.to_string() << " : ";
    const auto& coords = value.coords();
    for (size_t i = 0; i < coords.size(); ++i) {
      if (i) out << ',';
      out << coords[i];
    }
    out << "\n";
  }
  return out.str();
}

HilbertFormData load_form_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_form(buf.str());
}

std::string GsReport::to_string() const {
  auto v = [](GsVerdict g) {
    switch (g) {
      case GsVerdict::Pass: return "pass";
      case GsVerdict::Fail: return "fail";
      default: return "vacuous-pass";
    }
  };
  std::ostringstream out;
  out << "(1) galois: " << v(galois) << " (" << automorphism_count << " automorphisms)";
  out << "; (3) reality: " << v(reality)
      << (totally_real ? " (totally real)" : (cm ? " (CM)" : " (neither)"));
  out << "; (5) conjugation: " << v(conjugation);
  return out.str();
}

bool GsReport::all_pass() const {
  return galois != GsVerdict::Fail && reality != GsVerdict::Fail &&
         conjugation != GsVerdict::Fail;
}

GsReport validate_gs_properties(const HilbertFormData& f) {
  GsReport rep;
  const NumberField& ef = f.coefficient_field;
  rep.automorphism_count = static_cast<int>(ef.automorphisms().size());
  rep.galois = rep.automorphism_count == ef.degree() ? GsVerdict::Pass : GsVerdict::Fail;
  rep.totally_real = is_totally_real(ef);
  rep.cm = !rep.totally_real && is_cm_field(ef);
  rep.reality = (rep.totally_real || rep.cm) ? GsVerdict::Pass : GsVerdict::Fail;
  if (rep.totally_real) {
    // conjugation acts trivially on a totally real field
    rep.conjugation = GsVerdict::Vacuous;
  } else if (rep.cm) {
    FieldAutomorphism conj = cm_conjugation(ef);
    rep.conjugation = GsVerdict::Pass;
    for (const auto& [label, value] : f.coefficients)
      if (!(conj.apply(value) == value)) {
        rep.conjugation = GsVerdict::Fail;
        break;
      }
  } else {
    rep.conjugation = GsVerdict::Fail;
  }
  return rep;
}

int generated_field_degree(const HilbertFormData& f, size_t first_k) {
  const NumberField& ef = f.coefficient_field;
  if (ef.degree() == 1) return 1;
  std::vector<NFElem> elems;
  for (const auto& [label, value] : f.coefficients) {
    if (value.is_zero()) continue;
    elems.push_back(value);
    if (elems.size() == first_k) break;
  }
  int max_deg = 1;
  for (const NFElem& e : elems) max_deg = std::max(max_deg, minimal_polynomial(e).degree());
  if (max_deg == ef.degree()) return ef.degree();
  if (ef.is_galois()) {
    // smallest lattice subfield containing every element
    for (const Subfield& s : subfield_lattice(ef)) {
      bool all_in = std::all_of(elems.begin(), elems.end(), [&](const NFElem& e) {
        return subfield_membership(e, s).has_value();
      });
      if (all_in) return s.degree;
    }
    throw std::logic_error("generated_field_degree: no containing subfield found");
  }
  // non-Galois: only the prime-degree shortcut is available
  bool prime_degree = ef.degree() >= 2;
  for (int d = 2; d * d <= ef.degree(); ++d)
    if (ef.degree() % d == 0) prime_degree = false;
  if (prime_degree) return max_deg == 1 ? 1 : ef.degree();
  throw std::runtime_error(
      "generated_field_degree: non-Galois coefficient field of composite degree");
}

}  // namespace hmfd
