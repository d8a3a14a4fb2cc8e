#include "hmfd/fetch.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "hmfd/ffcore.hpp"
#include "hmfd/hmfdata.hpp"

// keep the HTTP dependency out of every other translation unit
#include <httplib.h>

namespace hmfd {

namespace {

using nlohmann::json;

std::string trim_copy(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string substitute_label(std::string path, const std::string& label) {
  size_t pos = path.find("{label}");
  if (pos != std::string::npos) path.replace(pos, 7, label);
  return path;
}

const json& field_of(const json& obj, const std::string& key) {
  if (!obj.contains(key))
    throw SchemaError("remote payload is missing the field \"" + key + "\"");
  return obj.at(key);
}

// first record of a {"data": [...]} payload
json first_record(const std::string& payload, const FetchConfig& cfg, const std::string& what) {
  json parsed;
  try {
    parsed = json::parse(payload);
  } catch (const json::parse_error& e) {
    throw SchemaError(what + ": response is not JSON (" + std::string(e.what()) + ")");
  }
  const json& data = field_of(parsed, cfg.key_data);
  if (!data.is_array()) throw SchemaError(what + ": \"" + cfg.key_data + "\" is not an array");
  if (data.empty()) throw NotFoundError(what + ": no records returned");
  return data.front();
}

// "[9, 3, 3]" or "[7,7,w+3]" -> (norm, p)
std::pair<uint64_t, uint64_t> parse_prime_entry(const std::string& s) {
  std::string t = trim_copy(s);
  if (t.size() < 2 || t.front() != '[')
    throw SchemaError("prime entry \"" + s + "\" is not a bracketed triple");
  std::istringstream in(t.substr(1));
  uint64_t norm = 0, p = 0;
  char comma = 0;
  if (!(in >> norm >> comma >> p) || comma != ',')
    throw SchemaError("prime entry \"" + s + "\" lacks numeric norm and prime");
  return {norm, p};
}

std::string join_ints(const json& arr) {
  std::ostringstream out;
  for (size_t i = 0; i < arr.size(); ++i) {
    if (i) out << ',';
    out << arr[i].get<long long>();
  }
  return out.str();
}

IntPoly poly_from_coeff_string(const std::string& s) {
  // "a0,a1,...,1" little-endian integer list
  std::vector<Int> c;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) c.emplace_back(trim_copy(item));
  return IntPoly{c};
}

std::string http_get(const std::string& base_url, const std::string& path) {
  std::string host = base_url;
  bool https = false;
  if (host.rfind("https://", 0) == 0) {
    https = true;
    host = host.substr(8);
  } else if (host.rfind("http://", 0) == 0) {
    host = host.substr(7);
  }
  auto fetch = [&](auto& client) -> std::string {
    client.set_connection_timeout(10);
    client.set_read_timeout(30);
    auto res = client.Get(path);
    if (!res)
      throw OfflineError("cannot reach " + base_url + " (" +
                         httplib::to_string(res.error()) + ") and the cache is cold");
    if (res->status == 404) throw NotFoundError("remote returned 404 for " + path);
    if (res->status != 200)
      throw std::runtime_error("remote returned status " + std::to_string(res->status) +
                               " for " + path);
    return res->body;
  };
  if (https) {
#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
    httplib::SSLClient client(host);
    return fetch(client);
#else
    throw OfflineError("built without TLS support; use an http:// endpoint or a warm cache");
#endif
  }
  httplib::Client client(host);
  return fetch(client);
}

}  // namespace

FetchConfig load_fetch_config(const std::string& path) {
  FetchConfig cfg;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::map<std::string, std::string*> keys = {
      {"base_url", &cfg.base_url},           {"forms_path", &cfg.forms_path},
      {"fields_path", &cfg.fields_path},     {"nf_path", &cfg.nf_path},
      {"key_data", &cfg.key_data},           {"key_field_label", &cfg.key_field_label},
      {"key_level_norm", &cfg.key_level_norm}, {"key_weight", &cfg.key_weight},
      {"key_hecke_poly", &cfg.key_hecke_poly}, {"key_eigenvalues", &cfg.key_eigenvalues},
      {"key_primes", &cfg.key_primes},       {"key_nf_coeffs", &cfg.key_nf_coeffs},
      {"cache_dir", &cfg.cache_dir},
  };
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim_copy(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim_copy(t.substr(0, eq));
    auto it = keys.find(key);
    if (it == keys.end())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key \"" + key +
                               "\"");
    *it->second = trim_copy(t.substr(eq + 1));
  }
  return cfg;
}

std::string convert_lmfdb_payloads(const std::string& label, const std::string& form_json,
                                   const std::string& field_json, const std::string& nf_json,
                                   const FetchConfig& cfg) {
  json form = first_record(form_json, cfg, "hmf_forms");
  json field = first_record(field_json, cfg, "hmf_fields");
  json nf = first_record(nf_json, cfg, "nf_fields");

  // base field polynomial
  const json& coeffs = field_of(nf, cfg.key_nf_coeffs);
  IntPoly base_poly =
      coeffs.is_string() ? poly_from_coeff_string(coeffs.get<std::string>())
                         : poly_from_coeff_string(join_ints(coeffs));
  NumberField base_field = make_number_field(base_poly);

  // weight: "[2, 2]" or [2, 2]
  std::vector<int> weight;
  {
    const json& w = field_of(form, cfg.key_weight);
    if (w.is_array()) {
      for (const auto& v : w) weight.push_back(v.get<int>());
    } else {
      std::string s = w.get<std::string>();
      for (char& ch : s)
        if (ch == '[' || ch == ']' || ch == ',') ch = ' ';
      std::istringstream in(s);
      int v;
      while (in >> v) weight.push_back(v);
    }
    if (weight.empty()) throw SchemaError("empty weight in field \"" + cfg.key_weight + "\"");
  }

  uint64_t level_norm = field_of(form, cfg.key_level_norm).get<uint64_t>();

  IntPoly ef_poly;
  {
    const json& hp = field_of(form, cfg.key_hecke_poly);
    ef_poly = hp.is_string() ? parse_poly(hp.get<std::string>())
                             : poly_from_coeff_string(join_ints(hp));
  }
  NumberField ef = make_number_field(ef_poly);

  // primes and eigenvalues are aligned lists
  const json& primes = field_of(field, cfg.key_primes);
  const json& eigen = field_of(form, cfg.key_eigenvalues);
  if (!primes.is_array() || !eigen.is_array())
    throw SchemaError("\"" + cfg.key_primes + "\" / \"" + cfg.key_eigenvalues +
                      "\" must be arrays");
  size_t count = std::min(primes.size(), eigen.size());
  if (count == 0) throw SchemaError("no aligned prime/eigenvalue entries");

  struct Row {
    PrimeLabel label;
    NFElem value;
  };
  std::vector<Row> rows;
  std::map<std::pair<uint64_t, int>, int> index_counter;
  uint64_t largest_norm = 0;
  for (size_t i = 0; i < count; ++i) {
    auto [norm, p] = parse_prime_entry(primes[i].is_string() ? primes[i].get<std::string>()
                                                             : primes[i].dump());
    int f_deg = 0;
    uint64_t n = norm;
    while (n > 1 && n % p == 0) {
      n /= p;
      ++f_deg;
    }
    if (n != 1 || f_deg == 0)
      throw SchemaError("prime entry with norm " + std::to_string(norm) +
                        " is not a power of " + std::to_string(p));
    largest_norm = std::max(largest_norm, norm);
    // skip level and ramified primes: the fixture format covers good primes
    if (level_norm % p == 0) continue;
    try {
      ddf_degrees(base_field.minpoly(), static_cast<uint32_t>(p));
    } catch (const BadPrimeError&) {
      continue;
    }
    int idx = ++index_counter[{p, f_deg}];
    // eigenvalue: polynomial in the Hecke field generator
    IntPoly val = parse_poly(eigen[i].is_string() ? eigen[i].get<std::string>()
                                                  : eigen[i].dump());
    NFElem acc = ef.zero();
    for (int j = val.degree(); j >= 0; --j) {
      acc = acc * ef.generator() + ef.from_rational(Rat(val.coeff(j)));
    }
    rows.push_back(Row{PrimeLabel{p, f_deg, idx}, acc});
  }
  if (rows.empty()) throw SchemaError("no usable good-prime eigenvalues after filtering");

  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.label < b.label;
  });

  // choose the largest bound with full coverage of the good primes
  uint64_t max_norm = 0;
  {
    std::vector<PrimeLabel> have;
    for (const Row& r : rows) have.push_back(r.label);
    for (uint64_t bound = largest_norm; bound >= 2; --bound) {
      auto expected = expected_prime_labels(base_field, level_norm, bound);
      if (expected.empty()) continue;
      bool covered = true;
      size_t j = 0;
      for (const PrimeLabel& e : expected) {
        while (j < have.size() && have[j] < e) ++j;
        if (j == have.size() || !(have[j] == e)) {
          covered = false;
          break;
        }
      }
      if (covered) {
        max_norm = bound;
        break;
      }
    }
  }
  if (max_norm < 2) throw SchemaError("eigenvalue list does not cover the small good primes");

  HilbertFormData out;
  out.label = label;
  out.base_poly = base_poly;
  out.base_field = base_field;
  out.weight = weight;
  out.level_norm = level_norm;
  out.trivial_character = true;
  out.e_f_poly = ef_poly;
  out.coefficient_field = ef;
  out.max_norm = max_norm;
  for (const Row& r : rows)
    if (r.label.norm() <= max_norm) out.coefficients.emplace_back(r.label, r.value);

  std::string text = print_form(out);
  parse_form(text);  // full validation before anything is written
  return text;
}

std::string fetch_form(const std::string& label, const FetchConfig& cfg) {
  std::filesystem::path cache_file =
      std::filesystem::path(cfg.cache_dir) / (label + ".hmf");
  if (std::filesystem::exists(cache_file)) {
    std::ifstream in(cache_file);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  std::string form_json = http_get(cfg.base_url, substitute_label(cfg.forms_path, label));
  json form = first_record(form_json, cfg, "hmf_forms");
  std::string field_label = field_of(form, cfg.key_field_label).get<std::string>();
  std::string field_json =
      http_get(cfg.base_url, substitute_label(cfg.fields_path, field_label));
  std::string nf_json = http_get(cfg.base_url, substitute_label(cfg.nf_path, field_label));

  std::string text = convert_lmfdb_payloads(label, form_json, field_json, nf_json, cfg);

  std::filesystem::create_directories(cfg.cache_dir);
  std::filesystem::path tmp = cache_file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << text;
  }
  std::filesystem::rename(tmp, cache_file);
  return text;
}

}  // namespace hmfd
