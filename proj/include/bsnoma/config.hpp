#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "bsnoma/experiments.hpp"

namespace bsnoma {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Minimal TOML-style document: [table] headers, key = value pairs, scalar
// values (integer, float, bool, "string") and flat arrays of scalars, with
// '#' comments. Keys are addressed as "table.key".
class ConfigDoc {
 public:
  using Value = std::variant<std::int64_t, double, bool, std::string,
                             std::vector<double>, std::vector<std::int64_t>>;

  static ConfigDoc parse(const std::string& text);
  static ConfigDoc parse_file(const std::string& path);

  bool has(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_double_list(const std::string& key,
                                      std::vector<double> fallback) const;
  std::vector<std::int64_t> get_int_list(const std::string& key,
                                         std::vector<std::int64_t> fallback) const;

  // "key=value" with optional table prefix, last wins.
  void apply_override(const std::string& assignment);

  const std::map<std::string, Value>& entries() const { return values_; }

 private:
  std::map<std::string, Value> values_;
};

NetworkConfig network_config_from(const ConfigDoc& doc);
SolverSettings solver_settings_from(const ConfigDoc& doc);
SweepSpec sweep_spec_from(const ConfigDoc& doc);

std::string serialize(const NetworkConfig& config);
std::string serialize(const SolverSettings& settings);

}  // namespace bsnoma
