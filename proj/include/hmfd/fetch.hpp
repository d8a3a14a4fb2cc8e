#pragma once

#include <stdexcept>
#include <string>

namespace hmfd {

/// Remote endpoint and JSON field names for the LMFDB conversion, overridable
/// from a `key = value` config file so schema drift needs no code change.
struct FetchConfig {
  std::string base_url = "https://www.lmfdb.org";
  std::string forms_path = "/api/hmf_forms/?_format=json&label={label}";
  std::string fields_path = "/api/hmf_fields/?_format=json&label={label}";
  std::string nf_path = "/api/nf_fields/?_format=json&label={label}";
  std::string key_data = "data";
  std::string key_field_label = "field_label";
  std::string key_level_norm = "level_norm";
  std::string key_weight = "weight";
  std::string key_hecke_poly = "hecke_polynomial";
  std::string key_eigenvalues = "hecke_eigenvalues";
  std::string key_primes = "primes";
  std::string key_nf_coeffs = "coeffs";
  std::string cache_dir = "cache";
};

/// Reads `key = value` lines over the defaults; unknown keys are rejected.
FetchConfig load_fetch_config(const std::string& path);

struct OfflineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotFoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Remote payload did not match the configured schema; names the field.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Returns the fixture text for a form label: from `<cache_dir>/<label>.hmf`
/// when present, otherwise downloaded from the configured endpoints,
/// converted, validated and written to the cache (atomic rename).
std::string fetch_form(const std::string& label, const FetchConfig& config);

/// Conversion step alone (exposed for tests): three JSON payloads in, fixture
/// text out.
std::string convert_lmfdb_payloads(const std::string& label, const std::string& form_json,
                                   const std::string& field_json, const std::string& nf_json,
                                   const FetchConfig& config);

}  // namespace hmfd
