#include "statecraft/world.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "statecraft/strategies.h"

namespace statecraft {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_fraction(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

void debit_wealth(StateAgent& a, double amount) { a.resources.wealth = std::max(0.0, a.resources.wealth - amount); }
void debit_arms(StateAgent& a, double amount) { a.resources.arms = std::max(0.0, a.resources.arms - amount); }

std::string describe(const StateAgent& a) {
  std::ostringstream os;
  os << "agent " << a.id << " (" << a.name << ")";
  return os.str();
}

}  // namespace

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Mercantile:
      return "mercantile";
    case StrategyKind::Militarist:
      return "militarist";
    case StrategyKind::Mixed:
      return "mixed";
  }
  return "unknown";
}

std::optional<StrategyKind> parse_strategy(const std::string& name) {
  if (name == "mercantile") return StrategyKind::Mercantile;
  if (name == "militarist") return StrategyKind::Militarist;
  if (name == "mixed") return StrategyKind::Mixed;
  return std::nullopt;
}

std::optional<AgentId> action_counterpart(const Action& a) {
  return std::visit(overloaded{
                        [](const action::Trade& t) -> std::optional<AgentId> { return t.partner; },
                        [](const action::PayTribute& t) -> std::optional<AgentId> { return t.receiver; },
                        [](const action::Attack& t) -> std::optional<AgentId> { return t.target; },
                        [](const action::ProposeAlliance& t) -> std::optional<AgentId> { return t.partner; },
                        [](const auto&) -> std::optional<AgentId> { return std::nullopt; },
                    },
                    a);
}

std::string action_name(const Action& a) {
  return std::visit(overloaded{
                        [](const action::BuildArms&) { return std::string("build_arms"); },
                        [](const action::Trade&) { return std::string("trade"); },
                        [](const action::PayTribute&) { return std::string("pay_tribute"); },
                        [](const action::Attack&) { return std::string("attack"); },
                        [](const action::ProposeAlliance&) { return std::string("propose_alliance"); },
                        [](const action::Idle&) { return std::string("idle"); },
                    },
                    a);
}

std::vector<std::string> validate(const EngineParams& p) {
  std::vector<std::string> out;
  auto fraction = [&](const char* name, double v) {
    if (!is_fraction(v)) out.push_back(std::string(name) + " out of [0,1]");
  };
  fraction("trade_gain", p.trade_gain);
  if (!(std::isfinite(p.mercantile_share) && p.mercantile_share > 0.5 && p.mercantile_share < 1.0))
    out.emplace_back("mercantile_share out of (0.5,1)");
  fraction("tribute_rate", p.tribute_rate);
  fraction("loot_rate", p.loot_rate);
  fraction("attrition", p.attrition);
  fraction("ally_support", p.ally_support);
  fraction("build_fraction", p.build_fraction);
  if (!(std::isfinite(p.build_rate) && p.build_rate >= 0.0)) out.emplace_back("build_rate must be finite and >= 0");
  if (!(std::isfinite(p.threat_ratio) && p.threat_ratio >= 1.0))
    out.emplace_back("threat_ratio must be finite and >= 1");
  if (!(std::isfinite(p.desperation_threshold) && p.desperation_threshold >= 0.0))
    out.emplace_back("desperation_threshold must be finite and >= 0");
  if (!(std::isfinite(p.arms_price) && p.arms_price > 0.0)) out.emplace_back("arms_price must be finite and > 0");
  if (p.horizon < 0) out.emplace_back("horizon must be >= 0");
  if (p.max_extensions < 0) out.emplace_back("max_extensions must be >= 0");
  fraction("combat_noise_amplitude", p.combat_noise_amplitude);
  return out;
}

AlliancePair make_pair_key(AgentId a, AgentId b) { return a < b ? AlliancePair{a, b} : AlliancePair{b, a}; }

const StateAgent& WorldState::agent(AgentId id) const {
  if (!has_agent(id)) throw EngineError("unknown agent id " + std::to_string(id));
  return agents[id];
}

StateAgent& WorldState::agent(AgentId id) {
  if (!has_agent(id)) throw EngineError("unknown agent id " + std::to_string(id));
  return agents[id];
}

bool WorldState::allied(AgentId a, AgentId b) const { return alliances.contains(make_pair_key(a, b)); }

std::vector<AgentId> WorldState::allies_of(AgentId id) const {
  std::vector<AgentId> out;
  for (const auto& [a, b] : alliances) {
    if (a == id) out.push_back(b);
    if (b == id) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double total_wealth(const WorldState& w) {
  double s = 0.0;
  for (const auto& a : w.agents) s += a.resources.wealth;
  return s;
}

double total_arms(const WorldState& w) {
  double s = 0.0;
  for (const auto& a : w.agents) s += a.resources.arms;
  return s;
}

double total_value(const WorldState& w, double arms_price) {
  double s = 0.0;
  for (const auto& a : w.agents) s += a.resources.wealth + arms_price * a.resources.arms;
  return s;
}

double default_arms(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Militarist:
      return 20.0;
    case StrategyKind::Mixed:
      return 10.0;
    case StrategyKind::Mercantile:
      return 5.0;
  }
  return 0.0;
}

ScenarioConfig default_scenario() {
  ScenarioConfig c;
  c.agents = {
      {"Athens", StrategyKind::Mercantile, 100.0, default_arms(StrategyKind::Mercantile)},
      {"Sparta", StrategyKind::Militarist, 100.0, default_arms(StrategyKind::Militarist)},
      {"Corinth", StrategyKind::Mixed, 100.0, default_arms(StrategyKind::Mixed)},
  };
  return c;
}

std::vector<std::string> validate(const ScenarioConfig& config) {
  std::vector<std::string> out = validate(config.params);
  if (config.agents.empty()) out.emplace_back("agents must not be empty");
  for (std::size_t i = 0; i < config.agents.size(); ++i) {
    const auto& a = config.agents[i];
    const std::string where = "agents[" + std::to_string(i) + "]";
    if (a.name.empty()) out.push_back(where + ".name must not be empty");
    if (!(std::isfinite(a.wealth) && a.wealth >= 0.0)) out.push_back(where + ".wealth must be finite and >= 0");
    if (!(std::isfinite(a.arms) && a.arms >= 0.0)) out.push_back(where + ".arms must be finite and >= 0");
  }
  return out;
}

WorldState initial_world(const ScenarioConfig& config, std::uint64_t seed) {
  WorldState w;
  w.rng_seed = seed;
  for (std::size_t i = 0; i < config.agents.size(); ++i) {
    const auto& spec = config.agents[i];
    StateAgent a;
    a.id = static_cast<AgentId>(i);
    a.name = spec.name;
    a.strategy = spec.strategy;
    a.resources = {spec.wealth, spec.arms};
    w.agents.push_back(std::move(a));
  }
  return w;
}

AgentView observe(const WorldState& world, AgentId viewer) {
  if (!world.has_agent(viewer)) throw EngineError("observe: unknown viewer id " + std::to_string(viewer));
  AgentView v;
  v.self = viewer;
  v.turn = world.turn;
  v.alliances = world.alliances;
  v.memory = world.agents[viewer].memory;
  v.stocks.reserve(world.agents.size());
  for (const auto& a : world.agents) v.stocks.push_back({a.id, a.strategy, a.resources.wealth, a.resources.arms});
  return v;
}

TradeGains resolve_trade(double wealth_a, double wealth_b, bool a_is_mercantile, bool b_is_mercantile,
                         const EngineParams& params) {
  const double surplus = params.trade_gain * std::min(wealth_a, wealth_b);
  double share_a = 0.5;
  if (a_is_mercantile && !b_is_mercantile) share_a = params.mercantile_share;
  if (b_is_mercantile && !a_is_mercantile) share_a = 1.0 - params.mercantile_share;
  const double gain_a = share_a * surplus;
  return {gain_a, surplus - gain_a};
}

TributeOutcome resolve_tribute(const StateAgent& payer, AgentId receiver, const WorldState& world,
                               const EngineParams& params) {
  if (!world.has_agent(receiver)) throw EngineError("tribute: unknown receiver id " + std::to_string(receiver));
  if (receiver == payer.id) throw EngineError("tribute: " + describe(payer) + " cannot pay itself");
  if (payer.memory.abandoned_tribute.contains(receiver)) return event::TributeRefused{payer.id, receiver};
  return event::TributePaid{payer.id, receiver, params.tribute_rate * payer.resources.wealth};
}

AttackOutcome resolve_attack(const Resources& attacker, const Resources& defender, double defender_ally_arms,
                             const EngineParams& params, double loot_multiplier) {
  const double effective_defense = defender.arms + params.ally_support * defender_ally_arms;
  AttackOutcome out{};
  if (attacker.arms > effective_defense) {
    out.loot = std::min(defender.wealth, params.loot_rate * (attacker.arms - effective_defense) * loot_multiplier);
  }
  out.attacker_arms_loss = std::min(attacker.arms, params.attrition * effective_defense);
  out.defender_arms_loss = std::min(defender.arms, params.attrition * attacker.arms);
  return out;
}

Resources apply_build(const Resources& res, const EngineParams& params) {
  const double spend = params.build_fraction * res.wealth;
  return {res.wealth - spend, res.arms + params.build_rate * spend};
}

double combat_noise_multiplier(std::uint64_t seed, Turn turn, AgentId attacker, AgentId defender, double amplitude) {
  const auto t = static_cast<std::uint64_t>(turn);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32), attacker, defender};
  std::mt19937_64 gen(seq);
  // 53 high bits -> [0,1); spelled out so results do not depend on the library's distributions
  const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return 1.0 + amplitude * (2.0 * u - 1.0);
}

void apply_event(WorldState& world, const ResolvedEvent& e) {
  std::visit(overloaded{
                 [&](const event::TradeExecuted& t) {
                   world.agent(t.a).resources.wealth += t.gain_a;
                   world.agent(t.b).resources.wealth += t.gain_b;
                 },
                 [&](const event::TributePaid& t) {
                   debit_wealth(world.agent(t.payer), t.amount);
                   world.agent(t.receiver).resources.wealth += t.amount;
                 },
                 [&](const event::AttackResolved& t) {
                   debit_wealth(world.agent(t.defender), t.loot);
                   world.agent(t.attacker).resources.wealth += t.loot;
                   debit_arms(world.agent(t.attacker), t.attacker_arms_loss);
                   debit_arms(world.agent(t.defender), t.defender_arms_loss);
                 },
                 [&](const event::AllianceFormed& t) { world.alliances.insert(make_pair_key(t.a, t.b)); },
                 [&](const event::ArmsBuilt& t) {
                   auto& r = world.agent(t.agent).resources;
                   r.wealth = std::max(0.0, r.wealth - t.wealth_spent);
                   r.arms += t.arms_gained;
                 },
                 [](const event::TributeRefused&) {},
                 [](const event::NoOp&) {},
             },
             e);
}

namespace {

void finish_turn(WorldState& world, const std::vector<ResolvedEvent>& events, Turn turn) {
  for (auto& a : world.agents) a.memory = update_memory(a, events, turn);
  world.turn = turn + 1;
}

void check_action(const WorldState& world, const StateAgent& actor, const Action& a) {
  const auto target = action_counterpart(a);
  if (!target) return;
  if (*target == actor.id)
    throw EngineError(describe(actor) + " chose " + action_name(a) + " targeting itself");
  if (!world.has_agent(*target))
    throw EngineError(describe(actor) + " chose " + action_name(a) + " targeting unknown agent " +
                      std::to_string(*target));
}

template <class T>
const T* as(const Action& a) {
  return std::get_if<T>(&a);
}

}  // namespace

WorldState replay_turn(const WorldState& before, const TurnRecord& record) {
  WorldState w = before;
  for (const auto& e : record.events) apply_event(w, e);
  finish_turn(w, record.events, record.turn);
  return w;
}

std::pair<WorldState, TurnRecord> step(const WorldState& world, const std::vector<Policy>& policies,
                                       const EngineParams& params) {
  const std::size_t n = world.agents.size();
  if (policies.size() != n) throw EngineError("step: expected one policy per agent");

  TurnRecord rec;
  rec.turn = world.turn;
  rec.actions.reserve(n);
  for (const auto& agent : world.agents) {
    Action a = policies[agent.id](observe(world, agent.id), params);
    check_action(world, agent, a);
    rec.actions.push_back(a);
  }
  const auto& acts = rec.actions;

  WorldState w = world;
  auto emit = [&](ResolvedEvent e) {
    apply_event(w, e);
    rec.events.push_back(std::move(e));
  };

  // Alliances: reciprocated proposals between non-militarists.
  for (AgentId a = 0; a < n; ++a) {
    const auto* p = as<action::ProposeAlliance>(acts[a]);
    if (!p) continue;
    const AgentId b = p->partner;
    const auto* back = as<action::ProposeAlliance>(acts[b]);
    const bool mutual = back && back->partner == a;
    const bool eligible = params.alliances_enabled && w.agents[a].strategy != StrategyKind::Militarist &&
                          w.agents[b].strategy != StrategyKind::Militarist && !w.allied(a, b);
    if (mutual && eligible) {
      if (a < b) emit(event::AllianceFormed{a, b});
    } else {
      emit(event::NoOp{a});
    }
  }

  // Trades: ascending proposer id, at most one executed trade per agent.
  std::vector<std::optional<AgentId>> trade_partner(n);
  for (AgentId a = 0; a < n; ++a) {
    const auto* t = as<action::Trade>(acts[a]);
    if (!t) continue;
    const AgentId b = t->partner;
    if (trade_partner[a] == b) continue;  // reciprocal proposal, already executed from b's side
    const auto* back = as<action::Trade>(acts[b]);
    const auto* hostile = as<action::Attack>(acts[b]);
    const bool accepted = (back && back->partner == a) ||
                          (w.agents[b].strategy == StrategyKind::Mercantile && !(hostile && hostile->target == a));
    const auto& ra = w.agents[a].resources;
    const auto& rb = w.agents[b].resources;
    const bool feasible = params.trade_enabled && params.trade_gain > 0.0 && ra.wealth > 0.0 && rb.wealth > 0.0;
    if (accepted && feasible && !trade_partner[a] && !trade_partner[b]) {
      const auto g = resolve_trade(ra.wealth, rb.wealth, w.agents[a].strategy == StrategyKind::Mercantile,
                                   w.agents[b].strategy == StrategyKind::Mercantile, params);
      trade_partner[a] = b;
      trade_partner[b] = a;
      emit(event::TradeExecuted{a, b, g.gain_a, g.gain_b});
    } else {
      emit(event::NoOp{a});
    }
  }

  // Tributes: ascending payer id on post-trade stocks.
  for (AgentId a = 0; a < n; ++a) {
    const auto* t = as<action::PayTribute>(acts[a]);
    if (!t) continue;
    std::visit([&](const auto& e) { emit(e); }, resolve_tribute(w.agents[a], t->receiver, w, params));
  }

  // Attacks: every battle is evaluated on the same pre-phase stocks. When several
  // battles together would take more than an agent holds, that agent's debits are
  // scaled down pro rata so that the combined effect never drives a stock negative.
  {
    const WorldState pre = w;
    std::vector<event::AttackResolved> battles;
    std::vector<double> wealth_debit(n, 0.0), arms_debit(n, 0.0);
    for (AgentId a = 0; a < n; ++a) {
      const auto* t = as<action::Attack>(acts[a]);
      if (!t) continue;
      const AgentId d = t->target;
      double ally_arms = 0.0;
      for (AgentId ally : pre.allies_of(d))
        if (ally != a) ally_arms += pre.agents[ally].resources.arms;
      const double mult =
          params.combat_noise ? combat_noise_multiplier(pre.rng_seed, pre.turn, a, d, params.combat_noise_amplitude)
                              : 1.0;
      const auto o = resolve_attack(pre.agents[a].resources, pre.agents[d].resources, ally_arms, params, mult);
      battles.push_back({a, d, o.loot, o.attacker_arms_loss, o.defender_arms_loss, params.ally_support * ally_arms});
      wealth_debit[d] += o.loot;
      arms_debit[a] += o.attacker_arms_loss;
      arms_debit[d] += o.defender_arms_loss;
    }
    auto scale = [](double have, double want) { return want > have ? have / want : 1.0; };
    for (auto& b : battles) {
      b.loot *= scale(pre.agents[b.defender].resources.wealth, wealth_debit[b.defender]);
      b.attacker_arms_loss *= scale(pre.agents[b.attacker].resources.arms, arms_debit[b.attacker]);
      b.defender_arms_loss *= scale(pre.agents[b.defender].resources.arms, arms_debit[b.defender]);
      emit(b);
    }
  }

  // Builds and idles.
  for (AgentId a = 0; a < n; ++a) {
    if (as<action::BuildArms>(acts[a])) {
      const auto before = w.agents[a].resources;
      const auto after = apply_build(before, params);
      emit(event::ArmsBuilt{a, before.wealth - after.wealth, after.arms - before.arms});
    } else if (as<action::Idle>(acts[a])) {
      emit(event::NoOp{a});
    }
  }

  finish_turn(w, rec.events, world.turn);
  rec.snapshot = w;
  return {std::move(w), std::move(rec)};
}

namespace {

std::vector<AgentId> rank_by(const WorldState& world, double Resources::*field) {
  std::vector<AgentId> ids(world.agents.size());
  std::iota(ids.begin(), ids.end(), AgentId{0});
  std::stable_sort(ids.begin(), ids.end(), [&](AgentId x, AgentId y) {
    return world.agents[x].resources.*field > world.agents[y].resources.*field;
  });
  return ids;
}

}  // namespace

std::vector<AgentId> rank_by_wealth(const WorldState& world) { return rank_by(world, &Resources::wealth); }
std::vector<AgentId> rank_by_arms(const WorldState& world) { return rank_by(world, &Resources::arms); }

OutcomeReport determine_outcome(const WorldState& world, const std::vector<Policy>& policies,
                                const EngineParams& params) {
  OutcomeReport out;
  WorldState w = world;
  for (;;) {
    out.absolute_ranking = rank_by_wealth(w);
    out.relative_ranking = rank_by_arms(w);
    if (out.absolute_ranking.empty()) return out;
    if (out.absolute_ranking.front() == out.relative_ranking.front()) {
      out.overall_winner = out.absolute_ranking.front();
      return out;
    }
    if (out.extensions_used >= params.max_extensions) break;
    w = step(w, policies, params).first;
    ++out.extensions_used;
  }
  out.dual_winner_note = DualWinner{out.absolute_ranking.front(), out.relative_ranking.front()};
  return out;
}

RunTrace run(const ScenarioConfig& config, std::uint64_t seed) {
  return run(config, seed, default_policies(initial_world(config, seed)));
}

RunTrace run(const ScenarioConfig& config, std::uint64_t seed, const std::vector<Policy>& policies) {
  if (const auto errs = validate(config); !errs.empty()) {
    std::string msg = "invalid scenario config:";
    for (const auto& e : errs) msg += "\n  - " + e;
    throw EngineError(msg);
  }
  RunTrace trace;
  trace.config = config;
  trace.seed = seed;
  trace.initial = initial_world(config, seed);
  WorldState w = trace.initial;
  trace.turns.reserve(static_cast<std::size_t>(config.params.horizon));
  for (std::int64_t t = 0; t < config.params.horizon; ++t) {
    auto [next, rec] = step(w, policies, config.params);
    w = std::move(next);
    trace.turns.push_back(std::move(rec));
  }
  trace.outcome = determine_outcome(w, policies, config.params);
  return trace;
}

}  // namespace statecraft
