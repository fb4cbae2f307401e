#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace statecraft {

using AgentId = std::uint32_t;
using Turn = std::int64_t;

class EngineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class StrategyKind { Mercantile, Militarist, Mixed };

std::string to_string(StrategyKind kind);
std::optional<StrategyKind> parse_strategy(const std::string& name);

struct Resources {
  double wealth = 0.0;
  double arms = 0.0;

  bool operator==(const Resources&) const = default;
};

// Tribute-learning memory. abandoned_tribute only ever grows.
struct DiplomaticMemory {
  std::set<AgentId> abandoned_tribute;
  std::map<AgentId, Turn> tribute_paid_to;  // first turn tribute was paid
  std::map<AgentId, std::vector<Turn>> attacked_by;

  bool operator==(const DiplomaticMemory&) const = default;
};

struct StateAgent {
  AgentId id = 0;
  std::string name;
  StrategyKind strategy = StrategyKind::Mercantile;
  Resources resources;
  DiplomaticMemory memory;

  bool operator==(const StateAgent&) const = default;
};

namespace action {
struct BuildArms {
  bool operator==(const BuildArms&) const = default;
};
struct Trade {
  AgentId partner;
  bool operator==(const Trade&) const = default;
};
struct PayTribute {
  AgentId receiver;
  bool operator==(const PayTribute&) const = default;
};
struct Attack {
  AgentId target;
  bool operator==(const Attack&) const = default;
};
struct ProposeAlliance {
  AgentId partner;
  bool operator==(const ProposeAlliance&) const = default;
};
struct Idle {
  bool operator==(const Idle&) const = default;
};
}  // namespace action

using Action = std::variant<action::BuildArms, action::Trade, action::PayTribute, action::Attack,
                            action::ProposeAlliance, action::Idle>;

// The agent an action is directed at, if any.
std::optional<AgentId> action_counterpart(const Action& a);
std::string action_name(const Action& a);

namespace event {
struct TradeExecuted {
  AgentId a, b;
  double gain_a, gain_b;
  bool operator==(const TradeExecuted&) const = default;
};
struct TributePaid {
  AgentId payer, receiver;
  double amount;
  bool operator==(const TributePaid&) const = default;
};
struct TributeRefused {
  AgentId payer, receiver;
  bool operator==(const TributeRefused&) const = default;
};
struct AttackResolved {
  AgentId attacker, defender;
  double loot;
  double attacker_arms_loss;
  double defender_arms_loss;
  double ally_support_arms;
  bool operator==(const AttackResolved&) const = default;
};
struct AllianceFormed {
  AgentId a, b;
  bool operator==(const AllianceFormed&) const = default;
};
struct ArmsBuilt {
  AgentId agent;
  double wealth_spent;
  double arms_gained;
  bool operator==(const ArmsBuilt&) const = default;
};
struct NoOp {
  AgentId agent;
  bool operator==(const NoOp&) const = default;
};
}  // namespace event

using ResolvedEvent =
    std::variant<event::TradeExecuted, event::TributePaid, event::TributeRefused, event::AttackResolved,
                 event::AllianceFormed, event::ArmsBuilt, event::NoOp>;

struct EngineParams {
  double trade_gain = 0.10;        // g: surplus as a fraction of the poorer partner's wealth
  double mercantile_share = 0.60;  // s: mercantile cut of the surplus, in (0.5, 1)
  double tribute_rate = 0.10;      // tau
  double loot_rate = 0.50;         // lambda
  double attrition = 0.20;         // kappa
  double ally_support = 0.50;      // sigma
  double build_fraction = 0.25;    // beta
  double build_rate = 1.0;         // r: arms per wealth unit spent
  double threat_ratio = 1.5;       // rho
  double desperation_threshold = 10.0;
  double arms_price = 1.0;  // p: wealth units per arms unit, accounting only
  std::int64_t horizon = 10;
  std::int64_t max_extensions = 5;

  bool alliances_enabled = false;
  bool trade_enabled = true;
  bool combat_noise = false;
  double combat_noise_amplitude = 0.25;  // loot multiplier drawn from [1-a, 1+a]

  bool operator==(const EngineParams&) const = default;
};

// Returns one message per violated constraint; empty when valid.
std::vector<std::string> validate(const EngineParams& params);

using AlliancePair = std::pair<AgentId, AgentId>;  // always (lower, higher)

AlliancePair make_pair_key(AgentId a, AgentId b);

struct WorldState {
  Turn turn = 0;
  std::vector<StateAgent> agents;  // agents[i].id == i
  std::set<AlliancePair> alliances;
  std::uint64_t rng_seed = 0;  // combat noise is a pure function of (seed, turn, attacker, defender)

  bool operator==(const WorldState&) const = default;

  const StateAgent& agent(AgentId id) const;
  StateAgent& agent(AgentId id);
  bool has_agent(AgentId id) const { return id < agents.size(); }
  bool allied(AgentId a, AgentId b) const;
  std::vector<AgentId> allies_of(AgentId id) const;
};

double total_wealth(const WorldState& w);
double total_arms(const WorldState& w);
// wealth + p * arms summed over all agents.
double total_value(const WorldState& w, double arms_price);

struct AgentSpec {
  std::string name;
  StrategyKind strategy = StrategyKind::Mercantile;
  double wealth = 100.0;
  double arms = 0.0;

  bool operator==(const AgentSpec&) const = default;
};

struct ScenarioConfig {
  std::vector<AgentSpec> agents;
  EngineParams params;

  bool operator==(const ScenarioConfig&) const = default;
};

double default_arms(StrategyKind kind);
ScenarioConfig default_scenario();
std::vector<std::string> validate(const ScenarioConfig& config);
WorldState initial_world(const ScenarioConfig& config, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Observation

struct PublicStocks {
  AgentId id;
  StrategyKind strategy;
  double wealth;
  double arms;
};

// What an agent may see when choosing: every agent's stocks and the alliance
// set are public; only its own memory is included; nobody's pending action is.
struct AgentView {
  AgentId self = 0;
  Turn turn = 0;
  std::vector<PublicStocks> stocks;
  std::set<AlliancePair> alliances;
  DiplomaticMemory memory;

  const PublicStocks& of(AgentId id) const { return stocks.at(id); }
  const PublicStocks& own() const { return stocks.at(self); }
};

AgentView observe(const WorldState& world, AgentId viewer);

using Policy = std::function<Action(const AgentView&, const EngineParams&)>;

// ---------------------------------------------------------------------------
// Resolution primitives

struct TradeGains {
  double gain_a;
  double gain_b;
};
TradeGains resolve_trade(double wealth_a, double wealth_b, bool a_is_mercantile, bool b_is_mercantile,
                         const EngineParams& params);

using TributeOutcome = std::variant<event::TributePaid, event::TributeRefused>;
TributeOutcome resolve_tribute(const StateAgent& payer, AgentId receiver, const WorldState& world,
                               const EngineParams& params);

struct AttackOutcome {
  double loot;
  double attacker_arms_loss;
  double defender_arms_loss;
};
// loot_multiplier scales the raw loot before the clamp to defender wealth.
AttackOutcome resolve_attack(const Resources& attacker, const Resources& defender, double defender_ally_arms,
                             const EngineParams& params, double loot_multiplier = 1.0);

Resources apply_build(const Resources& res, const EngineParams& params);

double combat_noise_multiplier(std::uint64_t seed, Turn turn, AgentId attacker, AgentId defender,
                               double amplitude);

// ---------------------------------------------------------------------------
// Turns and runs

struct TurnRecord {
  Turn turn = 0;
  std::vector<Action> actions;        // indexed by agent id
  std::vector<ResolvedEvent> events;  // resolution order
  WorldState snapshot;                // world after the turn

  bool operator==(const TurnRecord&) const = default;
};

// Applies a single event's stock and alliance changes; memory is untouched.
void apply_event(WorldState& world, const ResolvedEvent& e);

// Re-derives the post-turn world from the prior snapshot and a record's events.
WorldState replay_turn(const WorldState& before, const TurnRecord& record);

std::pair<WorldState, TurnRecord> step(const WorldState& world, const std::vector<Policy>& policies,
                                       const EngineParams& params);

struct DualWinner {
  AgentId absolute;  // richest
  AgentId relative;  // best armed
  bool operator==(const DualWinner&) const = default;
};

struct OutcomeReport {
  std::vector<AgentId> absolute_ranking;  // by wealth, descending
  std::vector<AgentId> relative_ranking;  // by arms, descending
  std::optional<AgentId> overall_winner;  // empty means indeterminate
  std::int64_t extensions_used = 0;
  std::optional<DualWinner> dual_winner_note;

  bool operator==(const OutcomeReport&) const = default;
};

std::vector<AgentId> rank_by_wealth(const WorldState& world);
std::vector<AgentId> rank_by_arms(const WorldState& world);

OutcomeReport determine_outcome(const WorldState& world, const std::vector<Policy>& policies,
                                const EngineParams& params);

struct RunTrace {
  static constexpr int kVersion = 1;

  ScenarioConfig config;
  std::uint64_t seed = 0;
  int version = kVersion;
  WorldState initial;
  std::vector<TurnRecord> turns;
  OutcomeReport outcome;

  bool operator==(const RunTrace&) const = default;

  const WorldState& final_state() const { return turns.empty() ? initial : turns.back().snapshot; }
};

RunTrace run(const ScenarioConfig& config, std::uint64_t seed);
RunTrace run(const ScenarioConfig& config, std::uint64_t seed, const std::vector<Policy>& policies);

}  // namespace statecraft
