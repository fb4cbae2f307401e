#pragma once

#include <random>
#include <vector>

#include "statecraft/world.h"

namespace statecraft::testing {

inline Policy fixed(Action a) {
  return [a](const AgentView&, const EngineParams&) { return a; };
}

inline std::vector<Policy> idle_policies(std::size_t n) { return std::vector<Policy>(n, fixed(action::Idle{})); }

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(gen);
}

// Valid scenario with 2..5 agents, arbitrary strategy mix and randomized
// parameters and features.
inline ScenarioConfig random_scenario(std::mt19937_64& gen) {
  ScenarioConfig cfg;
  const int n = std::uniform_int_distribution<int>(2, 5)(gen);
  for (int i = 0; i < n; ++i) {
    const auto kind = static_cast<StrategyKind>(std::uniform_int_distribution<int>(0, 2)(gen));
    cfg.agents.push_back({"agent" + std::to_string(i), kind, uniform(gen, 0, 200), uniform(gen, 0, 40)});
  }
  if (gen() % 5 == 0) cfg.agents[0].wealth = 0.0;
  if (gen() % 5 == 0) cfg.agents[n - 1].arms = 0.0;
  auto& p = cfg.params;
  p.trade_gain = uniform(gen, 0, 0.3);
  p.mercantile_share = uniform(gen, 0.51, 0.95);
  p.tribute_rate = uniform(gen, 0, 0.5);
  p.loot_rate = uniform(gen, 0, 1);
  p.attrition = uniform(gen, 0, 1);
  p.ally_support = uniform(gen, 0, 1);
  p.build_fraction = uniform(gen, 0, 1);
  p.build_rate = uniform(gen, 0.2, 3);
  p.threat_ratio = uniform(gen, 1, 3);
  p.desperation_threshold = uniform(gen, 0, 50);
  p.arms_price = uniform(gen, 0.2, 3);
  p.horizon = std::uniform_int_distribution<int>(0, 25)(gen);
  p.max_extensions = std::uniform_int_distribution<int>(0, 5)(gen);
  p.alliances_enabled = gen() % 2 == 0;
  p.trade_enabled = gen() % 4 != 0;
  p.combat_noise = gen() % 2 == 0;
  p.combat_noise_amplitude = uniform(gen, 0, 1);
  return cfg;
}

}  // namespace statecraft::testing
