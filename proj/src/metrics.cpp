#include "statecraft/metrics.h"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "statecraft/harness.h"

namespace statecraft::metrics {

namespace {

std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

std::vector<AgentId> touched(const ResolvedEvent& e) {
  return std::visit(
      [](const auto& ev) -> std::vector<AgentId> {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, event::TradeExecuted> || std::is_same_v<T, event::AllianceFormed>)
          return {ev.a, ev.b};
        else if constexpr (std::is_same_v<T, event::TributePaid> || std::is_same_v<T, event::TributeRefused>)
          return {ev.payer, ev.receiver};
        else if constexpr (std::is_same_v<T, event::AttackResolved>)
          return {ev.attacker, ev.defender};
        else
          return {ev.agent};
      },
      e);
}

}  // namespace

std::string to_string(SumClass c) {
  switch (c) {
    case SumClass::Positive:
      return "positive";
    case SumClass::Zero:
      return "zero";
    case SumClass::Negative:
      return "negative";
  }
  return "unknown";
}

SumClass classify_sum(double before, double after, double eps) {
  const double d = after - before;
  if (d > eps) return SumClass::Positive;
  if (d < -eps) return SumClass::Negative;
  return SumClass::Zero;
}

double event_value_delta(const WorldState& before, const ResolvedEvent& e, double arms_price) {
  WorldState after = before;
  apply_event(after, e);
  auto ids = touched(e);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  double delta = 0.0;
  for (AgentId id : ids) {
    const auto& b = before.agent(id).resources;
    const auto& a = after.agent(id).resources;
    delta += (a.wealth - b.wealth) + arms_price * (a.arms - b.arms);
  }
  return delta;
}

bool is_defeated(const StateAgent& agent, double defeat_threshold, const EngineParams& params) {
  return agent.resources.wealth + params.arms_price * agent.resources.arms < defeat_threshold;
}

std::vector<FatigueReading> fatigue_readings(const std::vector<TurnRecord>& window, const EngineParams& params) {
  std::map<AlliancePair, std::pair<double, double>> damage;  // (lower id's damage, higher id's damage)
  for (const auto& rec : window) {
    for (const auto& e : rec.events) {
      const auto* a = std::get_if<event::AttackResolved>(&e);
      if (!a) continue;
      const double attacker_damage = params.arms_price * a->attacker_arms_loss;
      const double defender_damage = params.arms_price * a->defender_arms_loss + a->loot;
      auto& d = damage[make_pair_key(a->attacker, a->defender)];
      if (a->attacker < a->defender) {
        d.first += attacker_damage;
        d.second += defender_damage;
      } else {
        d.first += defender_damage;
        d.second += attacker_damage;
      }
    }
  }
  std::vector<FatigueReading> out;
  for (const auto& [pair, d] : damage) {
    out.push_back({pair.first, pair.second, d.first, d.second, d.first - d.second});
    out.push_back({pair.second, pair.first, d.second, d.first, d.second - d.first});
  }
  return out;
}

double hegemony_index(const WorldState& world) {
  if (world.agents.empty()) return 0.0;
  const double total = total_arms(world);
  if (total <= 0.0) return 1.0 / static_cast<double>(world.agents.size());
  double top = 0.0;
  for (const auto& a : world.agents) top = std::max(top, a.resources.arms);
  return top / total;
}

double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  return xs.size() % 2 == 1 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

std::string outcome_label(const RunTrace& trace) {
  if (!trace.outcome.overall_winner) return "indeterminate";
  return trace.initial.agent(*trace.outcome.overall_winner).name;
}

BatchSummary summarize_batch(const std::vector<RunTrace>& traces) {
  if (traces.empty()) throw std::invalid_argument("summarize_batch: no traces");
  BatchSummary s;
  s.config_hash = harness::config_hash(traces.front().config);
  for (const auto& t : traces) {
    if (harness::config_hash(t.config) != s.config_hash)
      throw std::invalid_argument("summarize_batch: traces come from different configs (" + s.config_hash + " vs " +
                                  harness::config_hash(t.config) + ")");
  }
  for (const auto& a : traces.front().initial.agents) s.agent_names.push_back(a.name);

  std::vector<const RunTrace*> order;
  for (const auto& t : traces) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(), [](const RunTrace* a, const RunTrace* b) { return a->seed < b->seed; });

  const std::size_t n = s.agent_names.size();
  std::vector<double> heg;
  std::vector<std::vector<double>> wealth(n), arms(n);
  for (const RunTrace* t : order) {
    const WorldState& fin = t->final_state();
    RunRow row;
    row.seed = t->seed;
    row.final_hegemony = hegemony_index(fin);
    for (const auto& a : fin.agents) {
      row.final_stocks.push_back(a.resources);
      wealth[a.id].push_back(a.resources.wealth);
      arms[a.id].push_back(a.resources.arms);
    }
    row.outcome = outcome_label(*t);
    ++s.outcome_tally[row.outcome];
    heg.push_back(row.final_hegemony);

    std::vector<std::vector<Resources>> traj;
    auto stocks = [](const WorldState& w) {
      std::vector<Resources> r;
      for (const auto& a : w.agents) r.push_back(a.resources);
      return r;
    };
    traj.push_back(stocks(t->initial));
    for (const auto& rec : t->turns) traj.push_back(stocks(rec.snapshot));
    s.trajectories.push_back(std::move(traj));
    s.rows.push_back(std::move(row));
  }
  s.median_final_hegemony = median(heg);
  for (std::size_t i = 0; i < n; ++i) {
    s.median_final_wealth.push_back(median(wealth[i]));
    s.median_final_arms.push_back(median(arms[i]));
  }
  return s;
}

std::string to_csv(const BatchSummary& summary) {
  std::ostringstream os;
  os << "seed,hegemony_index";
  for (const auto& name : summary.agent_names) os << ',' << name << "_wealth," << name << "_arms";
  os << ",outcome\n";
  for (const auto& row : summary.rows) {
    os << row.seed << ',' << format_number(row.final_hegemony);
    for (const auto& r : row.final_stocks) os << ',' << format_number(r.wealth) << ',' << format_number(r.arms);
    os << ',' << row.outcome << '\n';
  }
  return os.str();
}

}  // namespace statecraft::metrics
