#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <openssl/sha.h>

#include "statecraft/harness.h"

namespace statecraft::harness {

namespace {

std::string join_violations(const std::vector<std::string>& v) {
  std::string msg = "invalid scenario config:";
  for (const auto& s : v) msg += "\n  - " + s;
  return msg;
}

struct NumberField {
  const char* key;
  double EngineParams::*field;
};

constexpr NumberField kNumberFields[] = {
    {"trade_gain", &EngineParams::trade_gain},
    {"mercantile_share", &EngineParams::mercantile_share},
    {"tribute_rate", &EngineParams::tribute_rate},
    {"loot_rate", &EngineParams::loot_rate},
    {"attrition", &EngineParams::attrition},
    {"ally_support", &EngineParams::ally_support},
    {"build_fraction", &EngineParams::build_fraction},
    {"build_rate", &EngineParams::build_rate},
    {"threat_ratio", &EngineParams::threat_ratio},
    {"desperation_threshold", &EngineParams::desperation_threshold},
    {"arms_price", &EngineParams::arms_price},
    {"combat_noise_amplitude", &EngineParams::combat_noise_amplitude},
};

struct FlagField {
  const char* key;
  bool EngineParams::*field;
};

constexpr FlagField kFlagFields[] = {
    {"alliances_enabled", &EngineParams::alliances_enabled},
    {"trade_enabled", &EngineParams::trade_enabled},
    {"combat_noise", &EngineParams::combat_noise},
};

class Reader {
 public:
  std::vector<std::string> errors;

  bool object(const json& j, const std::string& where) {
    if (j.is_object()) return true;
    errors.push_back(where + " must be an object");
    return false;
  }

  void unknown_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    for (const auto& [k, _] : j.items())
      if (!allowed.contains(k)) errors.push_back(where + ": unknown field '" + k + "'");
  }

  void number(const json& j, const char* key, double& out, const std::string& where) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) {
      errors.push_back(where + key + " must be a number");
      return;
    }
    out = j[key].get<double>();
  }

  void integer(const json& j, const char* key, std::int64_t& out, const std::string& where) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_integer()) {
      errors.push_back(where + key + " must be an integer");
      return;
    }
    out = j[key].get<std::int64_t>();
  }

  void flag(const json& j, const char* key, bool& out, const std::string& where) {
    if (!j.contains(key)) return;
    if (!j[key].is_boolean()) {
      errors.push_back(where + key + " must be true or false");
      return;
    }
    out = j[key].get<bool>();
  }
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

ScenarioConfig load_config(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("parse error: ") + e.what()});
  }

  Reader rd;
  ScenarioConfig cfg;
  if (!rd.object(doc, "config")) throw ConfigError(rd.errors);
  rd.unknown_keys(doc, "config", {"agents", "horizon", "params", "features"});

  if (!doc.contains("agents") || !doc["agents"].is_array()) {
    rd.errors.emplace_back("agents must be a list");
  } else {
    const auto& agents = doc["agents"];
    for (std::size_t i = 0; i < agents.size(); ++i) {
      const std::string where = "agents[" + std::to_string(i) + "]";
      const auto& a = agents[i];
      if (!rd.object(a, where)) continue;
      rd.unknown_keys(a, where, {"name", "strategy", "wealth", "arms"});
      AgentSpec spec;
      bool known_strategy = false;
      if (!a.contains("strategy") || !a["strategy"].is_string()) {
        rd.errors.push_back(where + ".strategy is required");
      } else if (auto k = parse_strategy(a["strategy"].get<std::string>())) {
        spec.strategy = *k;
        known_strategy = true;
      } else {
        rd.errors.push_back(where + ".strategy: unknown strategy '" + a["strategy"].get<std::string>() +
                            "' (expected mercantile, militarist or mixed)");
      }
      if (a.contains("name")) {
        if (a["name"].is_string())
          spec.name = a["name"].get<std::string>();
        else
          rd.errors.push_back(where + ".name must be a string");
      } else {
        spec.name = (known_strategy ? to_string(spec.strategy) : std::string("agent")) + std::to_string(i);
      }
      spec.wealth = 100.0;
      spec.arms = default_arms(spec.strategy);
      rd.number(a, "wealth", spec.wealth, where + ".");
      rd.number(a, "arms", spec.arms, where + ".");
      cfg.agents.push_back(std::move(spec));
    }
  }

  rd.integer(doc, "horizon", cfg.params.horizon, "");

  if (doc.contains("params") && rd.object(doc["params"], "params")) {
    const auto& p = doc["params"];
    std::set<std::string> allowed{"max_extensions"};
    for (const auto& f : kNumberFields) {
      allowed.insert(f.key);
      rd.number(p, f.key, cfg.params.*f.field, "params.");
    }
    rd.integer(p, "max_extensions", cfg.params.max_extensions, "params.");
    rd.unknown_keys(p, "params", allowed);
  }

  if (doc.contains("features") && rd.object(doc["features"], "features")) {
    const auto& f = doc["features"];
    std::set<std::string> allowed;
    for (const auto& ff : kFlagFields) {
      allowed.insert(ff.key);
      rd.flag(f, ff.key, cfg.params.*ff.field, "features.");
    }
    rd.unknown_keys(f, "features", allowed);
  }

  for (auto& v : validate(cfg)) rd.errors.push_back(std::move(v));
  if (!rd.errors.empty()) throw ConfigError(rd.errors);
  return cfg;
}

ScenarioConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file " + path.string()});
  std::stringstream ss;
  ss << in.rdbuf();
  return load_config(ss.str());
}

json config_to_json(const ScenarioConfig& config) {
  json agents = json::array();
  for (const auto& a : config.agents)
    agents.push_back({{"name", a.name}, {"strategy", to_string(a.strategy)}, {"wealth", a.wealth}, {"arms", a.arms}});
  json params = json::object();
  for (const auto& f : kNumberFields) params[f.key] = config.params.*f.field;
  params["max_extensions"] = config.params.max_extensions;
  json features = json::object();
  for (const auto& f : kFlagFields) features[f.key] = config.params.*f.field;
  return {{"agents", agents}, {"horizon", config.params.horizon}, {"params", params}, {"features", features}};
}

std::string config_hash(const ScenarioConfig& config) {
  const std::string canon = config_to_json(config).dump();
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(canon.data()), canon.size(), digest);
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned char c : digest) os << std::setw(2) << static_cast<int>(c);
  return os.str();
}

}  // namespace statecraft::harness
