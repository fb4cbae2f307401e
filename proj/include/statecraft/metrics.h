#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "statecraft/world.h"

// Observers over runs. Nothing here feeds back into the engine.
namespace statecraft::metrics {

enum class SumClass { Positive, Zero, Negative };

std::string to_string(SumClass c);

SumClass classify_sum(double total_value_before, double total_value_after, double eps = 1e-9);

// Change in total value (wealth + p * arms) caused by a single event, measured
// by applying it to `before` and summing over the agents it touches.
double event_value_delta(const WorldState& before, const ResolvedEvent& e, double arms_price);

bool is_defeated(const StateAgent& agent, double defeat_threshold, const EngineParams& params);

struct FatigueReading {
  AgentId agent;
  AgentId opponent;
  double own_damage;
  double opponent_damage;
  double fatigue;  // own_damage - opponent_damage

  bool operator==(const FatigueReading&) const = default;
};

// One reading per agent per combat pair, pairs in ascending (lower, higher) id
// order, lower id first. Damage is destroyed arms at price p plus wealth lost
// to loot.
std::vector<FatigueReading> fatigue_readings(const std::vector<TurnRecord>& window, const EngineParams& params);

// Largest share of total arms; 1/n when nobody is armed.
double hegemony_index(const WorldState& world);

struct RunRow {
  std::uint64_t seed = 0;
  double final_hegemony = 0.0;
  std::vector<Resources> final_stocks;  // by agent id
  std::string outcome;                  // winner's name or "indeterminate"

  bool operator==(const RunRow&) const = default;
};

struct BatchSummary {
  std::string config_hash;
  std::vector<std::string> agent_names;
  std::vector<RunRow> rows;  // ordered by seed
  // trajectories[run][turn][agent], including the initial state at turn 0
  std::vector<std::vector<std::vector<Resources>>> trajectories;
  std::map<std::string, std::size_t> outcome_tally;
  double median_final_hegemony = 0.0;
  std::vector<double> median_final_wealth;
  std::vector<double> median_final_arms;

  bool operator==(const BatchSummary&) const = default;
};

double median(std::vector<double> xs);

std::string outcome_label(const RunTrace& trace);

BatchSummary summarize_batch(const std::vector<RunTrace>& traces);

// Fixed columns: seed, hegemony_index, then <name>_wealth and <name>_arms for
// every agent in id order, then outcome.
std::string to_csv(const BatchSummary& summary);

}  // namespace statecraft::metrics
