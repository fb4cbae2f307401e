#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "statecraft/gametheory.h"
#include "statecraft/world.h"

namespace statecraft::harness {

using json = nlohmann::json;

// Carries every violation found, not just the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Scenario configuration (JSON)
//
//   {
//     "agents":   [{"name": "Athens", "strategy": "mercantile", "wealth": 100, "arms": 5}, ...],
//     "horizon":  10,
//     "params":   {"trade_gain": 0.1, ...},
//     "features": {"alliances_enabled": false, "trade_enabled": true, "combat_noise": false}
//   }
//
// Everything except agents[].strategy is optional; omitted wealth is 100 and
// omitted arms follow the strategy (militarist 20, mixed 10, mercantile 5).

ScenarioConfig load_config(std::string_view document);
ScenarioConfig load_config_file(const std::filesystem::path& path);

// Canonical form: every field present, keys sorted.
json config_to_json(const ScenarioConfig& config);
std::string config_hash(const ScenarioConfig& config);

// ---------------------------------------------------------------------------
// Traces: newline-delimited JSON, one header line, one line per turn, one footer.

json to_json(const Action& a);
Action action_from_json(const json& j);
json to_json(const ResolvedEvent& e);
ResolvedEvent event_from_json(const json& j);
json to_json(const WorldState& w);
WorldState world_from_json(const json& j);
json to_json(const OutcomeReport& o);
OutcomeReport outcome_from_json(const json& j);

void write_trace(std::ostream& os, const RunTrace& trace);
RunTrace read_trace(std::istream& is);
void write_trace(const std::filesystem::path& path, const RunTrace& trace);
RunTrace read_trace(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Batches

// threads == 0 uses the hardware concurrency. Output order follows `seeds`.
std::vector<RunTrace> run_batch(const ScenarioConfig& config, const std::vector<std::uint64_t>& seeds,
                                unsigned threads = 0);

std::vector<std::uint64_t> seed_range(std::uint64_t start, std::uint64_t count);

// ---------------------------------------------------------------------------
// Game files
//
// Normal form:  {"players": 2, "strategy_counts": [2, 2],
//                "payoffs": [[3, 3], [0, 5], [5, 0], [1, 1]],      // row-major, one n-tuple per profile
//                "strategy_names": [["C", "D"], ["C", "D"]]}       // optional
// Coalitional:  {"players": 3, "characteristic": {"1": 0, "2": 0, ..., "7": 1}}   // keys are bitmasks

struct GameDocument {
  std::optional<game::NormalFormGame> normal_form;
  std::vector<std::vector<std::string>> strategy_names;  // empty when not given
  std::optional<game::CharacteristicFunction> characteristic;
};

GameDocument load_game(const json& doc);
GameDocument load_game_file(const std::filesystem::path& path);

json characteristic_to_json(const game::CharacteristicFunction& v);

}  // namespace statecraft::harness
