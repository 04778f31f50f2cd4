#pragma once

#include <ams/catalog.hpp>
#include <ams/error.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace ams {

/// One scenario of an experiment file (or of a command line).
///
/// File format: INI. Keys outside any section and keys of a [defaults] section apply to every
/// other section; each remaining section is one scenario named after the section.
///
///   model = brownian            mode = single | table_sweep | rate_sweep | validate
///   param.beta = 2              score = std | new | new_schedule | committor_bm
///   dt = 1e-3   T = 1   t0 = 0  schedule = constant | linear
///   x0 = 0.1    a = 1           n_rep = 100   M = 1000   seed = 1   parallelism = 4
///   a_list = 0.4, 0.6           T_list = 25, 50, 100      table = bm1   scale = 10
///   out = results               format = json | csv
struct ExperimentConfig {
  std::string name = "run";
  std::string mode = "single";
  std::string model;
  ParamMap params;
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<double> t0;
  std::optional<double> a;
  std::optional<std::vector<double>> x0;
  std::optional<std::string> phi;
  ScoreSpec score;
  std::size_t n_rep = 100;
  std::size_t samples = 100;  // M
  std::uint64_t seed = 1;
  std::size_t parallelism = 1;
  std::vector<double> a_list;
  std::vector<double> t_list;
  std::string table;
  double scale = 1.0;
  std::string out = ".";
  std::string format = "json";

  ScenarioOverrides overrides() const { return {dt, horizon, t0, a, x0}; }

  /// Sorted key=value lines of every setting that can change the numbers produced.
  std::string canonical() const {
    std::map<std::string, std::string> kv;
    auto num = [](double v) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return std::string(buf);
    };
    auto list = [&](const std::vector<double>& v) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
      return s;
    };
    kv["mode"] = mode;
    kv["model"] = model;
    for (const auto& [k, v] : params) kv["param." + k] = num(v);
    if (dt) kv["dt"] = num(*dt);
    if (horizon) kv["T"] = num(*horizon);
    if (t0) kv["t0"] = num(*t0);
    if (a) kv["a"] = num(*a);
    if (x0) kv["x0"] = list(*x0);
    if (phi) kv["phi"] = *phi;
    kv["score"] = score.name;
    kv["schedule"] = score.schedule;
    kv["n_rep"] = std::to_string(n_rep);
    kv["M"] = std::to_string(samples);
    kv["seed"] = std::to_string(seed);
    if (!a_list.empty()) kv["a_list"] = list(a_list);
    if (!t_list.empty()) kv["T_list"] = list(t_list);
    if (!table.empty()) kv["table"] = table;
    kv["scale"] = num(scale);
    std::string s;
    for (const auto& [k, v] : kv) s += k + "=" + v + "\n";
    return s;
  }

  /// 64-bit FNV-1a of canonical(), as 16 hex digits.
  std::string hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical()) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "': not a number: '" + text + "'");
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size()) throw ConfigError("'" + key + "': not a number: '" + text + "'");
  return v;
}

inline std::uint64_t parse_count(const std::string& key, const std::string& text) {
  const double v = parse_double(key, text);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1.8e19)
    throw ConfigError("'" + key + "': expected a nonnegative integer, got '" + text + "'");
  return static_cast<std::uint64_t>(v);
}

inline std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(parse_double(key, item.substr(b, item.find_last_not_of(" \t") - b + 1)));
  }
  if (out.empty()) throw ConfigError("'" + key + "': empty list");
  return out;
}

}  // namespace detail

/// Applies one key=value setting. Throws ConfigError on unknown keys or malformed values.
inline void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  using namespace detail;
  if (key.rfind("param.", 0) == 0) {
    c.params[key.substr(6)] = parse_double(key, value);
  } else if (key == "model") {
    c.model = value;
  } else if (key == "mode") {
    if (value != "single" && value != "table_sweep" && value != "rate_sweep" && value != "validate")
      throw ConfigError("unknown mode '" + value + "'");
    c.mode = value;
  } else if (key == "dt") {
    c.dt = parse_double(key, value);
  } else if (key == "T") {
    c.horizon = parse_double(key, value);
  } else if (key == "t0") {
    c.t0 = parse_double(key, value);
  } else if (key == "a") {
    c.a = parse_double(key, value);
  } else if (key == "x0") {
    c.x0 = parse_list(key, value);
  } else if (key == "phi") {
    c.phi = value;
  } else if (key == "score") {
    c.score.name = value;
  } else if (key == "schedule") {
    c.score.schedule = value;
  } else if (key == "n_rep") {
    c.n_rep = parse_count(key, value);
  } else if (key == "M") {
    c.samples = parse_count(key, value);
  } else if (key == "seed") {
    c.seed = parse_count(key, value);
  } else if (key == "parallelism" || key == "threads") {
    c.parallelism = parse_count(key, value);
  } else if (key == "a_list") {
    c.a_list = parse_list(key, value);
  } else if (key == "T_list") {
    c.t_list = parse_list(key, value);
  } else if (key == "table") {
    c.table = value;
  } else if (key == "scale") {
    c.scale = parse_double(key, value);
  } else if (key == "out") {
    c.out = value;
  } else if (key == "format") {
    if (value != "json" && value != "csv") throw ConfigError("unknown format '" + value + "'");
    c.format = value;
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

/// Parses an experiment file from a stream; returns one config per scenario section.
inline std::vector<ExperimentConfig> parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  ExperimentConfig defaults;
  for (const auto& [key, node] : tree)
    if (node.empty()) apply_setting(defaults, key, node.data());
  if (const auto it = tree.find("defaults"); it != tree.not_found())
    for (const auto& [key, node] : it->second) apply_setting(defaults, key, node.data());

  std::vector<ExperimentConfig> out;
  for (const auto& [section, node] : tree) {
    if (node.empty() || section == "defaults") continue;
    ExperimentConfig c = defaults;
    c.name = section;
    for (const auto& [key, value] : node) apply_setting(c, key, value.data());
    out.push_back(std::move(c));
  }
  if (out.empty()) throw ConfigError("config defines no scenario section");
  return out;
}

inline std::vector<ExperimentConfig> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace ams
