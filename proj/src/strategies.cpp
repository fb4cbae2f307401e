#include "statecraft/strategies.h"

#include <algorithm>
#include <optional>

namespace statecraft {

namespace {

void require_kind(const AgentView& view, StrategyKind kind) {
  if (view.own().strategy != kind)
    throw EngineError("agent " + std::to_string(view.self) + " is " + to_string(view.own().strategy) +
                      ", not " + to_string(kind));
}

bool attacked_us(const AgentView& view, AgentId x) { return view.memory.attacked_by.contains(x); }
bool abandoned(const AgentView& view, AgentId x) { return view.memory.abandoned_tribute.contains(x); }

// Lowest-id agent other than self satisfying pred.
template <class Pred>
std::optional<AgentId> first_other(const AgentView& view, Pred pred) {
  for (const auto& s : view.stocks)
    if (s.id != view.self && pred(s)) return s.id;
  return std::nullopt;
}

// Other agent maximizing key among those satisfying pred; ties to the lowest id.
template <class Pred, class Key>
std::optional<AgentId> best_other(const AgentView& view, Pred pred, Key key) {
  std::optional<AgentId> best;
  double best_key = 0.0;
  for (const auto& s : view.stocks) {
    if (s.id == view.self || !pred(s)) continue;
    const double k = key(s);
    if (!best || k > best_key) {
      best = s.id;
      best_key = k;
    }
  }
  return best;
}

// Alliance rule shared by mercantile and mixed states.
std::optional<Action> alliance_proposal(const AgentView& view, const EngineParams& params) {
  if (!params.alliances_enabled) return std::nullopt;
  const double own_arms = view.own().arms;
  const bool menaced = first_other(view, [&](const PublicStocks& s) {
                         return s.strategy == StrategyKind::Militarist && s.arms > params.threat_ratio * own_arms;
                       }).has_value();
  if (!menaced) return std::nullopt;
  const auto partner = first_other(view, [&](const PublicStocks& s) {
    return s.strategy != StrategyKind::Militarist && !view.alliances.contains(make_pair_key(view.self, s.id));
  });
  if (!partner) return std::nullopt;
  return action::ProposeAlliance{*partner};
}

}  // namespace

Action mercantile_policy(const AgentView& view, const EngineParams& params) {
  require_kind(view, StrategyKind::Mercantile);
  if (auto a = alliance_proposal(view, params)) return *a;

  const auto& own = view.own();
  auto threatens = [&](const PublicStocks& s) { return s.arms > params.threat_ratio * own.arms; };

  if (auto x = first_other(view, [&](const PublicStocks& s) {
        return threatens(s) && attacked_us(view, s.id) && !abandoned(view, s.id);
      }))
    return action::PayTribute{*x};

  if (own.wealth > params.desperation_threshold) {
    if (first_other(view, [&](const PublicStocks& s) {
          return threatens(s) && (abandoned(view, s.id) || attacked_us(view, s.id));
        }))
      return action::BuildArms{};
  }

  if (!params.trade_enabled) return action::Idle{};
  if (auto x = best_other(view, [](const PublicStocks&) { return true; }, [](const PublicStocks& s) { return s.wealth; }))
    return action::Trade{*x};
  return action::Idle{};
}

Action militarist_policy(const AgentView& view, const EngineParams& params) {
  (void)params;
  require_kind(view, StrategyKind::Militarist);
  const double own_arms = view.own().arms;
  if (auto prey = best_other(view, [&](const PublicStocks& s) { return s.arms < own_arms; },
                             [](const PublicStocks& s) { return -s.arms; }))
    return action::Attack{*prey};
  return action::BuildArms{};
}

Action mixed_policy(const AgentView& view, const EngineParams& params) {
  require_kind(view, StrategyKind::Mixed);
  if (auto a = alliance_proposal(view, params)) return *a;

  const auto& own = view.own();

  if (auto m = first_other(view, [&](const PublicStocks& s) {
        return s.strategy == StrategyKind::Militarist && s.arms > params.threat_ratio * own.arms &&
               !abandoned(view, s.id);
      }))
    return action::PayTribute{*m};

  std::optional<AgentId> partner;
  if (params.trade_enabled) {
    partner = best_other(view,
                         [&](const PublicStocks& s) {
                           return s.strategy != StrategyKind::Militarist && !attacked_us(view, s.id) && s.wealth > 0.0;
                         },
                         [](const PublicStocks& s) { return s.wealth; });
  }

  if (auto prey = best_other(view, [&](const PublicStocks& s) { return s.arms < 0.5 * own.arms; },
                             [](const PublicStocks& s) { return -s.arms; })) {
    const double expected_loot = params.loot_rate * (own.arms - view.of(*prey).arms);
    const double expected_trade =
        partner ? (1.0 - params.mercantile_share) * params.trade_gain * std::min(own.wealth, view.of(*partner).wealth)
                : 0.0;
    if (expected_loot > expected_trade) return action::Attack{*prey};
  }

  if (partner) return action::Trade{*partner};
  return action::BuildArms{};
}

Policy policy_for(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Mercantile:
      return mercantile_policy;
    case StrategyKind::Militarist:
      return militarist_policy;
    case StrategyKind::Mixed:
      return mixed_policy;
  }
  throw EngineError("no policy for strategy kind");
}

std::vector<Policy> default_policies(const WorldState& world) {
  std::vector<Policy> out;
  out.reserve(world.agents.size());
  for (const auto& a : world.agents) out.push_back(policy_for(a.strategy));
  return out;
}

DiplomaticMemory update_memory(const StateAgent& agent, const std::vector<ResolvedEvent>& events, Turn turn) {
  DiplomaticMemory m = agent.memory;
  for (const auto& e : events) {
    if (const auto* t = std::get_if<event::TributePaid>(&e); t && t->payer == agent.id) {
      m.tribute_paid_to.emplace(t->receiver, turn);
    } else if (const auto* a = std::get_if<event::AttackResolved>(&e); a && a->defender == agent.id) {
      m.attacked_by[a->attacker].push_back(turn);
    }
  }
  // Tribute followed by an attack from the same state, on the same turn or later.
  for (const auto& [receiver, first_paid] : m.tribute_paid_to) {
    const auto it = m.attacked_by.find(receiver);
    if (it == m.attacked_by.end()) continue;
    if (std::any_of(it->second.begin(), it->second.end(), [&](Turn t) { return t >= first_paid; }))
      m.abandoned_tribute.insert(receiver);
  }
  return m;
}

}  // namespace statecraft
