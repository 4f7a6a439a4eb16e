#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccrforge/confined_system.hpp"

namespace ccrforge::cli {

// Raised for anything wrong with a config: syntax, schema, value ranges, or
// physical preconditions such as a degenerate spectrum. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class Experiment {
  verify_dense,
  verify_closed,
  defect,
  falsify_pauli,
  clock,
  arrival,
  crosscheck_toa,
};

inline const std::map<std::string, Experiment>& experiment_names() {
  static const std::map<std::string, Experiment> names = {
      {"verify-dense", Experiment::verify_dense},
      {"verify-closed", Experiment::verify_closed},
      {"defect", Experiment::defect},
      {"falsify-pauli", Experiment::falsify_pauli},
      {"clock", Experiment::clock},
      {"arrival", Experiment::arrival},
      {"crosscheck-toa", Experiment::crosscheck_toa},
  };
  return names;
}

inline std::string experiment_name(Experiment e) {
  for (const auto& [name, val] : experiment_names())
    if (val == e) return name;
  return "?";
}

// Parsed and default-resolved experiment description. Every field is concrete
// after parsing so the report can echo exactly what ran.
struct ExperimentConfig {
  Experiment experiment = Experiment::clock;
  confined::SystemConfig system;

  std::vector<int> k_series;            // verify-dense, verify-closed, defect
  std::vector<std::uint64_t> seeds;     // verify-dense
  int support = 0;                      // verify-dense; 0 means K/2 per series entry
  double residual_bound = 0.0;          // verify-dense, verify-closed
  int bump_m = 4;                       // verify-closed
  int quad_order = 64;                  // verify-closed, crosscheck-toa
  double epsilon = 1.0;                 // falsify-pauli
  int eigenindex = 0;                   // falsify-pauli, basis label k
  std::array<int, 2> pair = {0, 1};     // clock, basis labels
  double periods = 3.0;                 // clock
  int time_points = 0;                  // clock (default 1000), arrival (default 201)
  double w = 0.0;                       // arrival; 0 means l/4
  double t_max = 0.0;                   // arrival; 0 means 2 tau of the chosen state
  int grid_points = 513;                // arrival
  int state_offset = 0;                 // arrival
  std::vector<int> quad_orders;         // crosscheck-toa
};

namespace detail {

inline double require_number(const nlohmann::json& j, const std::string& key) {
  if (!j.at(key).is_number())
    throw ConfigError("config: \"" + key + "\" must be a number");
  return j.at(key).get<double>();
}

inline int require_int(const nlohmann::json& j, const std::string& key) {
  if (!j.at(key).is_number_integer())
    throw ConfigError("config: \"" + key + "\" must be an integer");
  return j.at(key).get<int>();
}

inline void check_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                       const std::string& where, bool strict, std::vector<std::string>& warnings) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (allowed.count(key)) continue;
    const std::string msg = "unknown key \"" + key + "\" in " + where;
    if (strict) throw ConfigError("config: " + msg);
    warnings.push_back(msg);
  }
}

}  // namespace detail

// Parse and default-resolve a config document. Unknown keys are warnings by
// default and hard errors under strict. Throws ConfigError on any violation.
inline ExperimentConfig parse_experiment_config(const nlohmann::json& doc, bool strict,
                                                std::vector<std::string>& warnings) {
  if (!doc.is_object()) throw ConfigError("config: document must be a JSON object");
  if (!doc.contains("experiment")) throw ConfigError("config: missing required key \"experiment\"");
  if (!doc.contains("system")) throw ConfigError("config: missing required key \"system\"");

  ExperimentConfig cfg;

  if (!doc.at("experiment").is_string())
    throw ConfigError("config: \"experiment\" must be a string");
  const std::string name = doc.at("experiment").get<std::string>();
  const auto it = experiment_names().find(name);
  if (it == experiment_names().end()) {
    std::ostringstream msg;
    msg << "config: unknown experiment \"" << name << "\"; expected one of:";
    for (const auto& [n, e] : experiment_names()) {
      (void)e;
      msg << " " << n;
    }
    throw ConfigError(msg.str());
  }
  cfg.experiment = it->second;

  const nlohmann::json& sys = doc.at("system");
  if (!sys.is_object()) throw ConfigError("config: \"system\" must be an object");
  for (const std::string key : {"l", "mu", "gamma", "K"})
    if (!sys.contains(key)) throw ConfigError("config: system is missing required key \"" + key + "\"");
  detail::check_keys(sys, {"l", "mu", "gamma", "K"}, "system", strict, warnings);
  cfg.system.l = detail::require_number(sys, "l");
  cfg.system.mu = detail::require_number(sys, "mu");
  cfg.system.gamma = detail::require_number(sys, "gamma");
  cfg.system.K = detail::require_int(sys, "K");
  try {
    confined::validate_config(cfg.system);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  std::set<std::string> allowed = {"experiment", "system"};
  switch (cfg.experiment) {
    case Experiment::verify_dense:
      allowed.insert({"K_series", "seeds", "support", "residual_bound"});
      break;
    case Experiment::verify_closed:
      allowed.insert({"K_series", "bump_m", "quad_order", "residual_bound"});
      break;
    case Experiment::defect:
      allowed.insert({"K_series"});
      break;
    case Experiment::falsify_pauli:
      allowed.insert({"epsilon", "eigenindex"});
      break;
    case Experiment::clock:
      allowed.insert({"pair", "periods", "time_points"});
      break;
    case Experiment::arrival:
      allowed.insert({"w", "t_max", "grid_points", "time_points", "state_offset"});
      break;
    case Experiment::crosscheck_toa:
      allowed.insert({"quad_orders"});
      break;
  }
  detail::check_keys(doc, allowed, "top-level config", strict, warnings);

  auto read_int_list = [&](const std::string& key, std::vector<int>& into) {
    if (!doc.contains(key)) return;
    if (!doc.at(key).is_array() || doc.at(key).empty())
      throw ConfigError("config: \"" + key + "\" must be a nonempty array of integers");
    into.clear();
    for (const nlohmann::json& x : doc.at(key)) {
      if (!x.is_number_integer()) throw ConfigError("config: \"" + key + "\" must contain integers");
      into.push_back(x.get<int>());
    }
  };

  read_int_list("K_series", cfg.k_series);
  for (int k : cfg.k_series)
    if (k < 1) throw ConfigError("config: K_series entries must be at least 1");

  if (doc.contains("seeds")) {
    if (!doc.at("seeds").is_array() || doc.at("seeds").empty())
      throw ConfigError("config: \"seeds\" must be a nonempty array of integers");
    cfg.seeds.clear();
    for (const nlohmann::json& x : doc.at("seeds")) {
      if (!x.is_number_integer() || x.get<long long>() < 0)
        throw ConfigError("config: \"seeds\" must contain nonnegative integers");
      cfg.seeds.push_back(x.get<std::uint64_t>());
    }
  }

  if (doc.contains("support")) {
    cfg.support = detail::require_int(doc, "support");
    if (cfg.support < 1) throw ConfigError("config: \"support\" must be at least 1");
  }
  if (doc.contains("residual_bound")) {
    cfg.residual_bound = detail::require_number(doc, "residual_bound");
    if (!(cfg.residual_bound > 0.0)) throw ConfigError("config: \"residual_bound\" must be positive");
  }
  if (doc.contains("bump_m")) {
    cfg.bump_m = detail::require_int(doc, "bump_m");
    if (cfg.bump_m < 2) throw ConfigError("config: \"bump_m\" must be at least 2");
  }
  if (doc.contains("quad_order")) {
    cfg.quad_order = detail::require_int(doc, "quad_order");
    if (cfg.quad_order < 8) throw ConfigError("config: \"quad_order\" must be at least 8");
  }
  if (doc.contains("epsilon")) cfg.epsilon = detail::require_number(doc, "epsilon");
  if (doc.contains("eigenindex")) {
    cfg.eigenindex = detail::require_int(doc, "eigenindex");
    if (cfg.eigenindex < -cfg.system.K || cfg.eigenindex > cfg.system.K)
      throw ConfigError("config: \"eigenindex\" must lie in -K..K");
  }
  if (doc.contains("pair")) {
    if (!doc.at("pair").is_array() || doc.at("pair").size() != 2)
      throw ConfigError("config: \"pair\" must be an array of two basis labels");
    for (int i = 0; i < 2; ++i) {
      const nlohmann::json& x = doc.at("pair").at(i);
      if (!x.is_number_integer()) throw ConfigError("config: \"pair\" must contain integers");
      cfg.pair[static_cast<std::size_t>(i)] = x.get<int>();
    }
    if (cfg.pair[0] == cfg.pair[1]) throw ConfigError("config: \"pair\" labels must differ");
    for (int x : cfg.pair)
      if (x < -cfg.system.K || x > cfg.system.K)
        throw ConfigError("config: \"pair\" labels must lie in -K..K");
  }
  if (doc.contains("periods")) {
    cfg.periods = detail::require_number(doc, "periods");
    if (!(cfg.periods > 0.0)) throw ConfigError("config: \"periods\" must be positive");
  }
  if (doc.contains("time_points")) {
    cfg.time_points = detail::require_int(doc, "time_points");
    if (cfg.time_points < 2) throw ConfigError("config: \"time_points\" must be at least 2");
  }
  if (doc.contains("w")) {
    cfg.w = detail::require_number(doc, "w");
    if (!(cfg.w > 0.0) || cfg.w > cfg.system.l)
      throw ConfigError("config: \"w\" must satisfy 0 < w <= l");
  }
  if (doc.contains("t_max")) {
    cfg.t_max = detail::require_number(doc, "t_max");
    if (!(cfg.t_max > 0.0)) throw ConfigError("config: \"t_max\" must be positive");
  }
  if (doc.contains("grid_points")) {
    cfg.grid_points = detail::require_int(doc, "grid_points");
    if (cfg.grid_points < 5 || cfg.grid_points % 2 == 0)
      throw ConfigError("config: \"grid_points\" must be odd and at least 5");
  }
  if (doc.contains("state_offset")) cfg.state_offset = detail::require_int(doc, "state_offset");
  read_int_list("quad_orders", cfg.quad_orders);
  for (int o : cfg.quad_orders)
    if (o < 8) throw ConfigError("config: \"quad_orders\" entries must be at least 8");

  // Per-experiment defaults, resolved here so reports are self-describing.
  switch (cfg.experiment) {
    case Experiment::verify_dense:
      if (cfg.k_series.empty()) cfg.k_series = {cfg.system.K};
      if (cfg.seeds.empty()) cfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8};
      if (cfg.residual_bound == 0.0) cfg.residual_bound = 1e-12;
      break;
    case Experiment::verify_closed:
      if (cfg.k_series.empty()) cfg.k_series = {cfg.system.K};
      if (cfg.residual_bound == 0.0) cfg.residual_bound = 1e-3;
      break;
    case Experiment::defect:
      if (cfg.k_series.empty()) cfg.k_series = {cfg.system.K};
      break;
    case Experiment::clock:
      if (cfg.time_points == 0) cfg.time_points = 1000;
      break;
    case Experiment::arrival:
      if (cfg.time_points == 0) cfg.time_points = 201;
      if (cfg.w == 0.0) cfg.w = cfg.system.l / 4.0;
      break;
    case Experiment::crosscheck_toa:
      if (cfg.quad_orders.empty()) cfg.quad_orders = {16, 32, 64};
      break;
    default:
      break;
  }

  if (cfg.experiment == Experiment::verify_dense && cfg.support != 0)
    for (int k : cfg.k_series)
      if (cfg.support > k)
        throw ConfigError("config: \"support\" exceeds a K_series entry");

  return cfg;
}

// Full validation pass: schema plus the physical preconditions that decide
// whether the requested construction exists at all.
inline void validate_experiment_config(const ExperimentConfig& cfg) {
  try {
    confined::validate_config(cfg.system);
    // Every experiment divides by an energy gap somewhere; scan the largest
    // truncation that will be built and fail fast on a degenerate pair.
    int kmax = cfg.system.K;
    for (int k : cfg.k_series) kmax = std::max(kmax, k);
    confined::SystemConfig probe = cfg.system;
    probe.K = kmax;
    const confined::ConfinedSystem sys = confined::build_system(probe);
    confined::require_nondegenerate(sys.spectrum);
    if (cfg.experiment == Experiment::arrival || cfg.experiment == Experiment::crosscheck_toa ||
        cfg.experiment == Experiment::verify_closed) {
      if (cfg.system.gamma == 0.0)
        throw std::invalid_argument("gamma = 0 admits no confined time-of-arrival operator");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

}  // namespace ccrforge::cli
