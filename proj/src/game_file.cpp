#include <fstream>

#include "statecraft/harness.h"

namespace statecraft::harness {

GameDocument load_game(const json& doc) {
  if (!doc.is_object()) throw game::GameError("game file must be an object");
  if (!doc.contains("players") || !doc["players"].is_number_unsigned())
    throw game::GameError("game file needs a non-negative integer 'players'");
  const auto n = doc["players"].get<std::size_t>();

  GameDocument out;
  if (doc.contains("strategy_counts") || doc.contains("payoffs")) {
    const auto counts = doc.at("strategy_counts").get<std::vector<std::size_t>>();
    if (counts.size() != n) throw game::GameError("strategy_counts must list one entry per player");
    std::vector<double> flat;
    for (const auto& tuple : doc.at("payoffs")) {
      if (!tuple.is_array() || tuple.size() != n)
        throw game::GameError("every payoff entry must be a list of " + std::to_string(n) + " numbers");
      for (const auto& u : tuple) flat.push_back(u.get<double>());
    }
    out.normal_form.emplace(counts, std::move(flat));
    if (doc.contains("strategy_names")) {
      out.strategy_names = doc["strategy_names"].get<std::vector<std::vector<std::string>>>();
      if (out.strategy_names.size() != n) throw game::GameError("strategy_names must list one entry per player");
      for (std::size_t i = 0; i < n; ++i)
        if (out.strategy_names[i].size() != counts[i])
          throw game::GameError("strategy_names for player " + std::to_string(i) + " has the wrong length");
    }
  }
  if (doc.contains("characteristic")) {
    if (n == 0 || n > game::kMaxCoalitionPlayers) throw game::GameError("players out of range");
    const std::size_t size = (std::size_t{1} << n) - 1;
    std::vector<double> v(size);
    std::vector<bool> seen(size, false);
    for (const auto& [key, value] : doc["characteristic"].items()) {
      std::size_t mask = 0;
      try {
        std::size_t used = 0;
        mask = std::stoul(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw game::GameError("characteristic key '" + key + "' is not a bitmask integer");
      }
      if (mask == 0 || mask > size) throw game::GameError("characteristic key " + key + " is not a nonempty coalition");
      v[mask - 1] = value.get<double>();
      seen[mask - 1] = true;
    }
    for (std::size_t s = 0; s < size; ++s)
      if (!seen[s]) throw game::GameError("characteristic is missing coalition " + std::to_string(s + 1));
    out.characteristic.emplace(n, std::move(v));
  }
  if (!out.normal_form && !out.characteristic)
    throw game::GameError("game file needs either strategy_counts/payoffs or characteristic");
  return out;
}

GameDocument load_game_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw game::GameError("cannot open game file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw game::GameError(std::string("game file parse error: ") + e.what());
  }
  try {
    return load_game(doc);
  } catch (const json::exception& e) {
    throw game::GameError(std::string("malformed game file: ") + e.what());
  }
}

json characteristic_to_json(const game::CharacteristicFunction& v) {
  json m = json::object();
  for (game::Coalition s = 1; s <= v.grand(); ++s) m[std::to_string(s)] = v.value(s);
  return {{"players", v.players()}, {"characteristic", m}};
}

}  // namespace statecraft::harness
