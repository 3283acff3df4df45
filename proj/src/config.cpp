#include "bsnoma/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bsnoma {

namespace {

std::string strip(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Removes a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

ConfigDoc::Value parse_scalar(const std::string& raw, const std::string& key) {
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"')
    return raw.substr(1, raw.size() - 2);
  if (raw == "true") return true;
  if (raw == "false") return false;
  const bool looks_float = raw.find_first_of(".eE") != std::string::npos &&
                           raw.find("0x") == std::string::npos;
  try {
    std::size_t used = 0;
    if (!looks_float) {
      const std::int64_t v = std::stoll(raw, &used, 0);
      if (used == raw.size()) return v;
    }
    const double d = std::stod(raw, &used);
    if (used == raw.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: cannot parse value '" + raw + "' for key '" + key + "'");
}

ConfigDoc::Value parse_value(const std::string& raw, const std::string& key) {
  if (!raw.empty() && raw.front() == '[') {
    if (raw.back() != ']') throw ConfigError("config: unterminated array for key '" + key + "'");
    std::vector<double> doubles;
    std::vector<std::int64_t> ints;
    bool all_int = true;
    std::string body = raw.substr(1, raw.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = strip(item);
      if (item.empty()) continue;
      const auto v = parse_scalar(item, key);
      if (std::holds_alternative<std::int64_t>(v)) {
        ints.push_back(std::get<std::int64_t>(v));
        doubles.push_back(double(std::get<std::int64_t>(v)));
      } else if (std::holds_alternative<double>(v)) {
        all_int = false;
        doubles.push_back(std::get<double>(v));
      } else {
        throw ConfigError("config: arrays may only hold numbers (key '" + key + "')");
      }
    }
    if (all_int) return ints;
    return doubles;
  }
  return parse_scalar(raw, key);
}

}  // namespace

ConfigDoc ConfigDoc::parse(const std::string& text) {
  ConfigDoc doc;
  std::string table;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    line = strip(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": bad table header");
      table = strip(line.substr(1, line.size() - 2));
      if (table.empty())
        throw ConfigError("config line " + std::to_string(lineno) + ": empty table name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = strip(line.substr(0, eq));
    std::string value = strip(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
    const std::string full = table.empty() ? key : table + "." + key;
    doc.values_[full] = parse_value(value, full);
  }
  return doc;
}

ConfigDoc ConfigDoc::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

bool ConfigDoc::has(const std::string& key) const { return values_.count(key) > 0; }

double ConfigDoc::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (std::holds_alternative<double>(it->second)) return std::get<double>(it->second);
  if (std::holds_alternative<std::int64_t>(it->second))
    return double(std::get<std::int64_t>(it->second));
  throw ConfigError("config: key '" + key + "' is not a number");
}

std::int64_t ConfigDoc::get_int(const std::string& key, std::int64_t fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (std::holds_alternative<std::int64_t>(it->second))
    return std::get<std::int64_t>(it->second);
  throw ConfigError("config: key '" + key + "' is not an integer");
}

bool ConfigDoc::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (std::holds_alternative<bool>(it->second)) return std::get<bool>(it->second);
  throw ConfigError("config: key '" + key + "' is not a bool");
}

std::string ConfigDoc::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (std::holds_alternative<std::string>(it->second))
    return std::get<std::string>(it->second);
  throw ConfigError("config: key '" + key + "' is not a string");
}

std::vector<double> ConfigDoc::get_double_list(const std::string& key,
                                               std::vector<double> fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (std::holds_alternative<std::vector<double>>(it->second))
    return std::get<std::vector<double>>(it->second);
  if (std::holds_alternative<std::vector<std::int64_t>>(it->second)) {
    std::vector<double> out;
    for (auto v : std::get<std::vector<std::int64_t>>(it->second)) out.push_back(double(v));
    return out;
  }
  throw ConfigError("config: key '" + key + "' is not a list");
}

std::vector<std::int64_t> ConfigDoc::get_int_list(const std::string& key,
                                                  std::vector<std::int64_t> fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (std::holds_alternative<std::vector<std::int64_t>>(it->second))
    return std::get<std::vector<std::int64_t>>(it->second);
  throw ConfigError("config: key '" + key + "' is not an integer list");
}

void ConfigDoc::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override must look like key=value: " + assignment);
  const std::string key = strip(assignment.substr(0, eq));
  const std::string value = strip(assignment.substr(eq + 1));
  if (key.empty() || value.empty())
    throw ConfigError("override must look like key=value: " + assignment);
  values_[key] = parse_value(value, key);
}

NetworkConfig network_config_from(const ConfigDoc& doc) {
  NetworkConfig c;
  c.num_cells = int(doc.get_int("network.num_cells", c.num_cells));
  c.power_budget_dbm = doc.get_double("network.power_budget_dbm", c.power_budget_dbm);
  c.circuit_power_w = doc.get_double("network.circuit_power_w", c.circuit_power_w);
  c.qos_rate_min = doc.get_double("network.qos_rate_min", c.qos_rate_min);
  c.sic_imperfection = doc.get_double("network.sic_imperfection", c.sic_imperfection);
  c.noise_variance_w = doc.get_double("network.noise_variance_w", c.noise_variance_w);
  c.rng_seed = std::uint64_t(doc.get_int("network.rng_seed", std::int64_t(c.rng_seed)));
  c.direct_gain_mean = doc.get_double("network.direct_gain_mean", c.direct_gain_mean);
  c.backscatter_gain_mean =
      doc.get_double("network.backscatter_gain_mean", c.backscatter_gain_mean);
  c.tag_vehicle_gain_mean =
      doc.get_double("network.tag_vehicle_gain_mean", c.tag_vehicle_gain_mean);
  c.cross_gain_mean = doc.get_double("network.cross_gain_mean", c.cross_gain_mean);
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

SolverSettings solver_settings_from(const ConfigDoc& doc) {
  SolverSettings s;
  s.dinkelbach_tol = doc.get_double("solver.dinkelbach_tol", s.dinkelbach_tol);
  s.max_outer_iters = int(doc.get_int("solver.max_outer_iters", s.max_outer_iters));
  s.max_inner_iters = int(doc.get_int("solver.max_inner_iters", s.max_inner_iters));
  s.subgradient_step0 = doc.get_double("solver.subgradient_step0", s.subgradient_step0);
  s.step_decay = doc.get_double("solver.step_decay", s.step_decay);
  s.sweep_rel_tol = doc.get_double("solver.sweep_rel_tol", s.sweep_rel_tol);
  s.root_branch =
      root_branch_from_string(doc.get_string("solver.root_branch", to_string(s.root_branch)));
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return s;
}

SweepSpec sweep_spec_from(const ConfigDoc& doc) {
  SweepSpec spec;
  spec.base_config = network_config_from(doc);
  spec.settings = solver_settings_from(doc);
  spec.kind = sweep_kind_from_string(doc.get_string("sweep.kind", to_string(spec.kind)));
  spec.sweep_values = doc.get_double_list("sweep.values", spec.sweep_values);
  spec.trials = int(doc.get_int("sweep.trials", spec.trials));
  spec.delta_values = doc.get_double_list("sweep.delta_values", spec.delta_values);
  spec.rsu_counts.clear();
  for (auto v : doc.get_int_list("sweep.rsu_counts", {spec.base_config.num_cells}))
    spec.rsu_counts.push_back(int(v));
  spec.baselines.clear();
  if (doc.has("sweep.baselines")) {
    // stored as a string like "WBS,NBS"
    std::stringstream ss(doc.get_string("sweep.baselines", "WBS,NBS"));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = strip(item);
      if (item == "WBS") spec.baselines.push_back(Baseline::wbs);
      else if (item == "NBS") spec.baselines.push_back(Baseline::nbs);
      else throw ConfigError("config: unknown baseline '" + item + "'");
    }
  } else {
    spec.baselines = {Baseline::wbs, Baseline::nbs};
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return spec;
}

namespace {

void kv(std::string& out, const char* key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s = %.17g\n", key, v);
  out += buf;
}

}  // namespace

std::string serialize(const NetworkConfig& c) {
  std::string out = "[network]\n";
  out += "num_cells = " + std::to_string(c.num_cells) + "\n";
  kv(out, "power_budget_dbm", c.power_budget_dbm);
  kv(out, "circuit_power_w", c.circuit_power_w);
  kv(out, "qos_rate_min", c.qos_rate_min);
  kv(out, "sic_imperfection", c.sic_imperfection);
  kv(out, "noise_variance_w", c.noise_variance_w);
  out += "rng_seed = " + std::to_string(c.rng_seed) + "\n";
  kv(out, "direct_gain_mean", c.direct_gain_mean);
  kv(out, "backscatter_gain_mean", c.backscatter_gain_mean);
  kv(out, "tag_vehicle_gain_mean", c.tag_vehicle_gain_mean);
  kv(out, "cross_gain_mean", c.cross_gain_mean);
  return out;
}

std::string serialize(const SolverSettings& s) {
  std::string out = "[solver]\n";
  kv(out, "dinkelbach_tol", s.dinkelbach_tol);
  out += "max_outer_iters = " + std::to_string(s.max_outer_iters) + "\n";
  out += "max_inner_iters = " + std::to_string(s.max_inner_iters) + "\n";
  kv(out, "subgradient_step0", s.subgradient_step0);
  kv(out, "step_decay", s.step_decay);
  kv(out, "sweep_rel_tol", s.sweep_rel_tol);
  out += "root_branch = \"" + to_string(s.root_branch) + "\"\n";
  return out;
}

}  // namespace bsnoma
