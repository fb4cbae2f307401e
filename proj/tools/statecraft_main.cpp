#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "statecraft/gametheory.h"
#include "statecraft/harness.h"
#include "statecraft/metrics.h"
#include "statecraft/world.h"

namespace fs = std::filesystem;
using namespace statecraft;
using harness::json;

namespace {

ScenarioConfig config_or_default(const std::string& path) {
  return path.empty() ? default_scenario() : harness::load_config_file(path);
}

std::vector<double> parse_allocation(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw std::invalid_argument("--alloc: '" + item + "' is not a number");
    out.push_back(x);
  }
  if (out.empty()) throw std::invalid_argument("--alloc: empty allocation");
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
}

json summary_json(const metrics::BatchSummary& s) {
  return {{"runs", s.rows.size()},
          {"config_hash", s.config_hash},
          {"median_final_hegemony", s.median_final_hegemony},
          {"median_final_wealth", s.median_final_wealth},
          {"median_final_arms", s.median_final_arms},
          {"outcomes", s.outcome_tally}};
}

int cmd_run(const std::string& config_path, std::uint64_t seed, const std::string& out) {
  const auto trace = run(config_or_default(config_path), seed);
  const fs::path path(out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  harness::write_trace(path, trace);
  std::cout << json{{"trace", out},
                    {"turns", trace.turns.size()},
                    {"final_hegemony", metrics::hegemony_index(trace.final_state())},
                    {"outcome", harness::to_json(trace.outcome)}}
                   .dump(2)
            << '\n';
  return 0;
}

int cmd_batch(const std::string& config_path, std::uint64_t count, std::uint64_t start, const std::string& out_dir,
              const std::string& summary_path, unsigned threads) {
  const auto config = config_or_default(config_path);
  const auto traces = harness::run_batch(config, harness::seed_range(start, count), threads);
  fs::create_directories(out_dir);
  for (const auto& t : traces) harness::write_trace(fs::path(out_dir) / ("trace_" + std::to_string(t.seed) + ".jsonl"), t);
  if (traces.empty()) {
    std::cout << json{{"runs", 0}}.dump(2) << '\n';
    return 0;
  }
  const auto summary = metrics::summarize_batch(traces);
  write_text(summary_path, metrics::to_csv(summary));
  std::cout << summary_json(summary).dump(2) << '\n';
  return 0;
}

int cmd_analyze(const std::string& dir, const std::string& out) {
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
  if (files.empty()) throw std::runtime_error("no traces found in " + dir);
  std::sort(files.begin(), files.end());
  std::vector<RunTrace> traces;
  for (const auto& f : files) {
    try {
      traces.push_back(harness::read_trace(f));
    } catch (const harness::TraceError& e) {
      throw harness::TraceError(f.string() + ": " + e.what());
    }
  }
  const auto summary = metrics::summarize_batch(traces);
  write_text(out, metrics::to_csv(summary));
  std::cout << summary_json(summary).dump(2) << '\n';
  return 0;
}

json profile_json(const harness::GameDocument& doc, const game::StrategyProfile& p) {
  const auto& g = *doc.normal_form;
  json payoffs = json::array();
  for (std::size_t i = 0; i < g.players(); ++i) payoffs.push_back(g.payoff(p, i));
  json j{{"profile", p}, {"payoffs", payoffs}};
  if (!doc.strategy_names.empty()) {
    json labels = json::array();
    for (std::size_t i = 0; i < p.size(); ++i) labels.push_back(doc.strategy_names[i][p[i]]);
    j["labels"] = labels;
  }
  return j;
}

int cmd_nash(const std::string& in) {
  const auto doc = harness::load_game_file(in);
  if (!doc.normal_form) throw game::GameError("game nash needs a normal-form game (strategy_counts and payoffs)");
  json eq = json::array();
  for (const auto& p : game::pure_nash(*doc.normal_form)) eq.push_back(profile_json(doc, p));
  std::cout << json{{"pure_nash_equilibria", eq}}.dump(2) << '\n';
  return 0;
}

int cmd_core(const std::string& in, const std::string& alloc, double grid) {
  const auto doc = harness::load_game_file(in);
  const auto v = doc.characteristic ? *doc.characteristic : game::build_characteristic(*doc.normal_form);
  const auto x = parse_allocation(alloc);
  const auto blocking = game::blocking_coalitions(x, v);
  json blockers = json::array();
  for (auto s : blocking) blockers.push_back({{"coalition", s}, {"members", game::members(s)}, {"value", v.value(s)}});
  const auto search = game::core_empty(v, grid);
  json core{{"grid_step", grid}, {"points_checked", search.points_checked}};
  if (search.witness) {
    core["result"] = "nonempty";
    core["witness"] = *search.witness;
  } else {
    core["result"] = "empty-at-resolution";
  }
  std::cout << json{{"characteristic", harness::characteristic_to_json(v)["characteristic"]},
                    {"allocation", x},
                    {"in_core", blocking.empty()},
                    {"blocking_coalitions", blockers},
                    {"core_search", core}}
                   .dump(2)
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"statecraft: three-state mixed-sum international relations simulator"};
  app.require_subcommand(1);

  std::string config_path, out, traces_dir, summary, game_in, alloc;
  std::uint64_t seed = 0, seeds = 0, seed_start = 0;
  unsigned threads = 0;
  double grid = 0.01;

  auto* run_cmd = app.add_subcommand("run", "Run one seeded simulation and write its trace");
  run_cmd->add_option("--config", config_path, "Scenario config (JSON); default scenario if omitted")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", seed, "Seed");
  run_cmd->add_option("--out", out, "Trace output path (.jsonl)")->required();

  auto* batch_cmd = app.add_subcommand("batch", "Run a seed sweep");
  batch_cmd->add_option("--config", config_path, "Scenario config (JSON)")->check(CLI::ExistingFile);
  batch_cmd->add_option("--seeds", seeds, "Number of seeds")->required();
  batch_cmd->add_option("--seed-start", seed_start, "First seed");
  batch_cmd->add_option("--out", out, "Directory for trace files")->required();
  batch_cmd->add_option("--summary", summary, "Summary CSV path")->required();
  batch_cmd->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");

  auto* analyze_cmd = app.add_subcommand("analyze", "Summarize a directory of traces into CSV");
  analyze_cmd->add_option("--traces", traces_dir, "Directory of .jsonl traces")->required();
  analyze_cmd->add_option("--out", out, "CSV output path")->required();

  auto* game_cmd = app.add_subcommand("game", "Normal-form and coalitional game analysis");
  game_cmd->require_subcommand(1);
  auto* nash_cmd = game_cmd->add_subcommand("nash", "List pure-strategy Nash equilibria");
  nash_cmd->add_option("--in", game_in, "Game file (JSON)")->required()->check(CLI::ExistingFile);
  auto* core_cmd = game_cmd->add_subcommand("core", "Test an allocation against the core and search for a core point");
  core_cmd->add_option("--in", game_in, "Game or characteristic-function file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  core_cmd->add_option("--alloc", alloc, "Comma-separated allocation x1,x2,...")->required();
  core_cmd->add_option("--grid", grid, "Grid step for the core search")->check(CLI::PositiveNumber);

  app.failure_message(CLI::FailureMessage::help);
  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(config_path, seed, out);
    if (*batch_cmd) return cmd_batch(config_path, seeds, seed_start, out, summary, threads);
    if (*analyze_cmd) return cmd_analyze(traces_dir, out);
    if (*nash_cmd) return cmd_nash(game_in);
    if (*core_cmd) return cmd_core(game_in, alloc, grid);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
