#pragma once

#include <vector>

#include "statecraft/world.h"

namespace statecraft {

// Archetype decision tables. Each is a pure function of (view, params); the
// first matching rule wins and ties between candidate agents go to the lowest id.
//
// Mercantile:
//   A0  alliances enabled, militarist arms > rho * own, not yet allied -> ProposeAlliance(other non-militarist)
//   M1  an aggressor with arms > rho * own has attacked us and is not abandoned -> PayTribute(aggressor)
//   M2  an agent with arms > rho * own is abandoned or has attacked us, and wealth > w_min -> BuildArms
//   M3  Trade(richest other), or Idle when trade is disabled
// Militarist:
//   S1  someone is weaker -> Attack(weakest)
//   S2  BuildArms
// Mixed:
//   A0  as for mercantile
//   X1  militarist arms > rho * own and not abandoned -> PayTribute(militarist)
//   X2  prey with arms < 0.5 * own whose expected loot beats the expected trade gain -> Attack(prey)
//   X3  Trade(richest non-militarist partner that has never attacked us)
//   X4  BuildArms
Action mercantile_policy(const AgentView& view, const EngineParams& params);
Action militarist_policy(const AgentView& view, const EngineParams& params);
Action mixed_policy(const AgentView& view, const EngineParams& params);

Policy policy_for(StrategyKind kind);

// Archetype policy for each agent, indexed by id.
std::vector<Policy> default_policies(const WorldState& world);

// Folds one turn's resolved events into the agent's memory.
DiplomaticMemory update_memory(const StateAgent& agent, const std::vector<ResolvedEvent>& events, Turn turn);

}  // namespace statecraft
