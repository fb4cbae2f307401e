#include <fstream>
#include <istream>
#include <ostream>

#include "statecraft/harness.h"

namespace statecraft::harness {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

AgentId id_of(const json& j, const char* key) { return j.at(key).get<AgentId>(); }

StrategyKind strategy_of(const json& j) {
  const auto name = j.get<std::string>();
  if (auto k = parse_strategy(name)) return *k;
  throw TraceError("unknown strategy '" + name + "' in trace");
}

}  // namespace

json to_json(const Action& a) {
  return std::visit(overloaded{
                        [](const action::BuildArms&) { return json{{"type", "build_arms"}}; },
                        [](const action::Trade& t) { return json{{"type", "trade"}, {"partner", t.partner}}; },
                        [](const action::PayTribute& t) {
                          return json{{"type", "pay_tribute"}, {"receiver", t.receiver}};
                        },
                        [](const action::Attack& t) { return json{{"type", "attack"}, {"target", t.target}}; },
                        [](const action::ProposeAlliance& t) {
                          return json{{"type", "propose_alliance"}, {"partner", t.partner}};
                        },
                        [](const action::Idle&) { return json{{"type", "idle"}}; },
                    },
                    a);
}

Action action_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "build_arms") return action::BuildArms{};
  if (type == "trade") return action::Trade{id_of(j, "partner")};
  if (type == "pay_tribute") return action::PayTribute{id_of(j, "receiver")};
  if (type == "attack") return action::Attack{id_of(j, "target")};
  if (type == "propose_alliance") return action::ProposeAlliance{id_of(j, "partner")};
  if (type == "idle") return action::Idle{};
  throw TraceError("unknown action type '" + type + "'");
}

json to_json(const ResolvedEvent& e) {
  return std::visit(
      overloaded{
          [](const event::TradeExecuted& t) {
            return json{{"type", "trade"}, {"a", t.a}, {"b", t.b}, {"gain_a", t.gain_a}, {"gain_b", t.gain_b}};
          },
          [](const event::TributePaid& t) {
            return json{{"type", "tribute_paid"}, {"payer", t.payer}, {"receiver", t.receiver}, {"amount", t.amount}};
          },
          [](const event::TributeRefused& t) {
            return json{{"type", "tribute_refused"}, {"payer", t.payer}, {"receiver", t.receiver}};
          },
          [](const event::AttackResolved& t) {
            return json{{"type", "attack"},
                        {"attacker", t.attacker},
                        {"defender", t.defender},
                        {"loot", t.loot},
                        {"attacker_arms_loss", t.attacker_arms_loss},
                        {"defender_arms_loss", t.defender_arms_loss},
                        {"ally_support_arms", t.ally_support_arms}};
          },
          [](const event::AllianceFormed& t) { return json{{"type", "alliance"}, {"a", t.a}, {"b", t.b}}; },
          [](const event::ArmsBuilt& t) {
            return json{{"type", "build"},
                        {"agent", t.agent},
                        {"wealth_spent", t.wealth_spent},
                        {"arms_gained", t.arms_gained}};
          },
          [](const event::NoOp& t) { return json{{"type", "noop"}, {"agent", t.agent}}; },
      },
      e);
}

ResolvedEvent event_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  auto num = [&](const char* k) { return j.at(k).get<double>(); };
  if (type == "trade") return event::TradeExecuted{id_of(j, "a"), id_of(j, "b"), num("gain_a"), num("gain_b")};
  if (type == "tribute_paid") return event::TributePaid{id_of(j, "payer"), id_of(j, "receiver"), num("amount")};
  if (type == "tribute_refused") return event::TributeRefused{id_of(j, "payer"), id_of(j, "receiver")};
  if (type == "attack")
    return event::AttackResolved{id_of(j, "attacker"),         id_of(j, "defender"),          num("loot"),
                                 num("attacker_arms_loss"), num("defender_arms_loss"), num("ally_support_arms")};
  if (type == "alliance") return event::AllianceFormed{id_of(j, "a"), id_of(j, "b")};
  if (type == "build") return event::ArmsBuilt{id_of(j, "agent"), num("wealth_spent"), num("arms_gained")};
  if (type == "noop") return event::NoOp{id_of(j, "agent")};
  throw TraceError("unknown event type '" + type + "'");
}

json to_json(const WorldState& w) {
  json agents = json::array();
  for (const auto& a : w.agents) {
    json attacked = json::array();
    for (const auto& [x, turns] : a.memory.attacked_by) attacked.push_back({x, turns});
    json paid = json::array();
    for (const auto& [x, t] : a.memory.tribute_paid_to) paid.push_back({x, t});
    agents.push_back({{"id", a.id},
                      {"name", a.name},
                      {"strategy", to_string(a.strategy)},
                      {"wealth", a.resources.wealth},
                      {"arms", a.resources.arms},
                      {"memory",
                       {{"abandoned_tribute", a.memory.abandoned_tribute},
                        {"tribute_paid_to", paid},
                        {"attacked_by", attacked}}}});
  }
  json alliances = json::array();
  for (const auto& [a, b] : w.alliances) alliances.push_back({a, b});
  return {{"turn", w.turn}, {"rng_seed", w.rng_seed}, {"agents", agents}, {"alliances", alliances}};
}

WorldState world_from_json(const json& j) {
  WorldState w;
  w.turn = j.at("turn").get<Turn>();
  w.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  for (const auto& ja : j.at("agents")) {
    StateAgent a;
    a.id = ja.at("id").get<AgentId>();
    a.name = ja.at("name").get<std::string>();
    a.strategy = strategy_of(ja.at("strategy"));
    a.resources = {ja.at("wealth").get<double>(), ja.at("arms").get<double>()};
    const auto& m = ja.at("memory");
    a.memory.abandoned_tribute = m.at("abandoned_tribute").get<std::set<AgentId>>();
    for (const auto& p : m.at("tribute_paid_to")) a.memory.tribute_paid_to[p.at(0).get<AgentId>()] = p.at(1).get<Turn>();
    for (const auto& p : m.at("attacked_by"))
      a.memory.attacked_by[p.at(0).get<AgentId>()] = p.at(1).get<std::vector<Turn>>();
    if (a.id != w.agents.size()) throw TraceError("agent ids in snapshot are not dense");
    w.agents.push_back(std::move(a));
  }
  for (const auto& p : j.at("alliances")) w.alliances.insert({p.at(0).get<AgentId>(), p.at(1).get<AgentId>()});
  return w;
}

json to_json(const OutcomeReport& o) {
  json j{{"absolute_ranking", o.absolute_ranking},
         {"relative_ranking", o.relative_ranking},
         {"extensions_used", o.extensions_used}};
  j["overall_winner"] = o.overall_winner ? json(*o.overall_winner) : json("indeterminate");
  j["dual_winner_note"] =
      o.dual_winner_note ? json{{"absolute", o.dual_winner_note->absolute}, {"relative", o.dual_winner_note->relative}}
                         : json(nullptr);
  return j;
}

OutcomeReport outcome_from_json(const json& j) {
  OutcomeReport o;
  o.absolute_ranking = j.at("absolute_ranking").get<std::vector<AgentId>>();
  o.relative_ranking = j.at("relative_ranking").get<std::vector<AgentId>>();
  o.extensions_used = j.at("extensions_used").get<std::int64_t>();
  const auto& w = j.at("overall_winner");
  if (w.is_number_integer()) o.overall_winner = w.get<AgentId>();
  const auto& note = j.at("dual_winner_note");
  if (!note.is_null()) o.dual_winner_note = DualWinner{note.at("absolute").get<AgentId>(), note.at("relative").get<AgentId>()};
  return o;
}

void write_trace(std::ostream& os, const RunTrace& trace) {
  const json header{{"record", "header"},
                    {"version", trace.version},
                    {"seed", trace.seed},
                    {"config_hash", config_hash(trace.config)},
                    {"config", config_to_json(trace.config)},
                    {"initial", to_json(trace.initial)}};
  os << header.dump() << '\n';
  for (const auto& rec : trace.turns) {
    json actions = json::array();
    for (const auto& a : rec.actions) actions.push_back(to_json(a));
    json events = json::array();
    for (const auto& e : rec.events) events.push_back(to_json(e));
    const json line{{"record", "turn"},
                    {"turn", rec.turn},
                    {"actions", actions},
                    {"events", events},
                    {"snapshot", to_json(rec.snapshot)}};
    os << line.dump() << '\n';
  }
  os << json{{"record", "footer"}, {"outcome", to_json(trace.outcome)}}.dump() << '\n';
}

RunTrace read_trace(std::istream& is) {
  RunTrace trace;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  auto fail = [&](const std::string& what) -> TraceError {
    return TraceError("trace line " + std::to_string(lineno) + ": " + what);
  };

  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error&) {
      // A partially written final line reads as truncation.
      throw TraceError("truncated trace");
    }
    try {
      const auto kind = j.at("record").get<std::string>();
      if (!have_header) {
        if (kind != "header") throw fail("expected header record");
        const int version = j.at("version").get<int>();
        if (version != RunTrace::kVersion)
          throw TraceError("unsupported trace version " + std::to_string(version) + " (this reader understands version " +
                           std::to_string(RunTrace::kVersion) + ")");
        trace.version = version;
        trace.seed = j.at("seed").get<std::uint64_t>();
        trace.config = load_config(j.at("config").dump());
        if (config_hash(trace.config) != j.at("config_hash").get<std::string>())
          throw fail("config hash does not match the embedded config");
        trace.initial = world_from_json(j.at("initial"));
        have_header = true;
      } else if (kind == "turn") {
        TurnRecord rec;
        rec.turn = j.at("turn").get<Turn>();
        for (const auto& a : j.at("actions")) rec.actions.push_back(action_from_json(a));
        for (const auto& e : j.at("events")) rec.events.push_back(event_from_json(e));
        rec.snapshot = world_from_json(j.at("snapshot"));
        trace.turns.push_back(std::move(rec));
      } else if (kind == "footer") {
        trace.outcome = outcome_from_json(j.at("outcome"));
        return trace;
      } else {
        throw fail("unexpected record '" + kind + "'");
      }
    } catch (const json::exception& e) {
      throw fail(std::string("malformed record: ") + e.what());
    } catch (const ConfigError& e) {
      throw fail(std::string("embedded config rejected: ") + e.what());
    }
  }
  throw TraceError("truncated trace");
}

void write_trace(const std::filesystem::path& path, const RunTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TraceError("cannot open " + path.string() + " for writing");
  write_trace(out, trace);
  if (!out) throw TraceError("failed writing " + path.string());
}

RunTrace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceError("cannot open " + path.string());
  return read_trace(in);
}

}  // namespace statecraft::harness
