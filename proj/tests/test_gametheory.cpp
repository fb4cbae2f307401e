#include <doctest.h>

#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "game_fixtures.h"
#include "statecraft/gametheory.h"

using namespace statecraft::game;
namespace fx = statecraft::testing;

namespace {

// Independent enumeration: walk every profile with an odometer and test each
// unilateral deviation by rebuilding the deviated profile from scratch.
std::vector<StrategyProfile> brute_force_nash(const NormalFormGame& g) {
  const auto& counts = g.strategy_counts();
  std::vector<StrategyProfile> out;
  StrategyProfile p(counts.size(), 0);
  for (;;) {
    bool ok = true;
    for (std::size_t i = 0; i < counts.size() && ok; ++i) {
      for (std::size_t d = 0; d < counts[i]; ++d) {
        StrategyProfile q = p;
        q[i] = d;
        if (g.payoff(q, i) > g.payoff(p, i)) ok = false;
      }
    }
    if (ok) out.push_back(p);
    std::size_t k = counts.size();
    while (k > 0) {
      --k;
      if (++p[k] < counts[k]) break;
      p[k] = 0;
      if (k == 0) return out;
    }
    if (counts.empty()) return out;
  }
}

NormalFormGame random_game(std::mt19937_64& gen, std::size_t players, std::size_t max_strategies, int payoff_range) {
  std::vector<std::size_t> counts;
  std::size_t profiles = 1;
  for (std::size_t i = 0; i < players; ++i) {
    counts.push_back(std::uniform_int_distribution<std::size_t>(1, max_strategies)(gen));
    profiles *= counts.back();
  }
  std::vector<double> pay(profiles * players);
  // small integer payoffs make ties (and so multiple equilibria) common
  for (auto& u : pay) u = std::uniform_int_distribution<int>(-payoff_range, payoff_range)(gen);
  return NormalFormGame(counts, pay);
}

// Exact check of the core inequalities with integer numerators over a common denominator.
bool exact_in_core(const std::vector<long long>& x_num, const std::vector<long long>& v_num) {
  const std::size_t n = x_num.size();
  for (Coalition s = 1; s < (Coalition{1} << n); ++s) {
    long long share = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (s >> i & 1u) share += x_num[i];
    if (share < v_num[s - 1]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("enumerate_coalitions") {
  CHECK(enumerate_coalitions(3).size() == 7);
  CHECK(enumerate_coalitions(1) == std::vector<Coalition>{1});
  CHECK_THROWS_AS(enumerate_coalitions(0), GameError);
  CHECK_THROWS_AS(enumerate_coalitions(21), GameError);
  for (std::size_t n = 1; n <= 10; ++n) {
    const auto cs = enumerate_coalitions(n);
    CHECK(cs.size() == (std::size_t{1} << n) - 1);
    CHECK(std::set<Coalition>(cs.begin(), cs.end()).size() == cs.size());
    CHECK(std::is_sorted(cs.begin(), cs.end()));
    CHECK(cs.front() != 0);
  }
}

TEST_CASE("NormalFormGame layout and validation") {
  const auto pd = fx::prisoners_dilemma();
  CHECK(pd.profile_count() == 4);
  CHECK(pd.payoff({0, 1}, 0) == 0);
  CHECK(pd.payoff({0, 1}, 1) == 5);
  CHECK(pd.profile_at(pd.index_of({1, 0})) == StrategyProfile{1, 0});
  CHECK_THROWS_AS(NormalFormGame({2, 2}, {1, 2, 3}), GameError);
  CHECK_THROWS_AS(NormalFormGame({}, {}), GameError);
  CHECK_THROWS_AS(NormalFormGame({2, 0}, {}), GameError);
  CHECK_THROWS_AS(pd.payoff({2, 0}, 0), GameError);
}

TEST_CASE("pure_nash") {
  CHECK(pure_nash(fx::prisoners_dilemma()) == std::vector<StrategyProfile>{{1, 1}});
  CHECK(pure_nash(fx::matching_pennies()).empty());
  CHECK(pure_nash(NormalFormGame({1}, {4.0})) == std::vector<StrategyProfile>{{0}});
  CHECK(pure_nash(NormalFormGame({1, 1}, {4.0, -1.0})) == std::vector<StrategyProfile>{{0, 0}});
  // coordination game: two equilibria, ascending order
  CHECK(pure_nash(NormalFormGame({2, 2}, {2, 2, 0, 0, 0, 0, 1, 1})) == std::vector<StrategyProfile>{{0, 0}, {1, 1}});
}

TEST_CASE("pure_nash agrees with brute force on random games") {
  std::mt19937_64 gen(1234);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t players = std::uniform_int_distribution<std::size_t>(1, 3)(gen);
    const auto g = random_game(gen, players, 4, 3);
    CHECK(pure_nash(g) == brute_force_nash(g));
  }
}

TEST_CASE("characteristic_value") {
  const auto pd = fx::prisoners_dilemma();
  CHECK(characteristic_value(pd, 0b01) == 1.0);
  CHECK(characteristic_value(pd, 0b10) == 1.0);
  CHECK(characteristic_value(pd, 0b11) == 6.0);
  CHECK(characteristic_value(NormalFormGame({3}, {2, 7, -1}), 1) == 7.0);
  CHECK_THROWS_AS(characteristic_value(pd, 0), GameError);
  CHECK_THROWS_AS(characteristic_value(pd, 0b100), GameError);
}

TEST_CASE("build_characteristic") {
  const auto v = build_characteristic(fx::prisoners_dilemma());
  CHECK(v.values() == std::vector<double>{1, 1, 6});

  const auto zero = build_characteristic(NormalFormGame({2, 2}, std::vector<double>(8, 0.0)));
  for (double x : zero.values()) CHECK(x == 0.0);

  std::mt19937_64 gen(5);
  const auto g3 = random_game(gen, 3, 3, 5);
  const auto v3 = build_characteristic(g3);
  CHECK(v3.values().size() == 7);
  for (Coalition s = 1; s <= 7; ++s) CHECK(v3.value(s) == characteristic_value(g3, s));

  CHECK_THROWS_AS(build_characteristic(NormalFormGame(std::vector<std::size_t>(11, 1), std::vector<double>(11, 0.0))),
                  GameError);
}

TEST_CASE("characteristic_value grows with the coalition's own strategy options") {
  // Dropping one strategy of a coalition member can only lower the coalition's
  // guaranteed value.
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t players = std::uniform_int_distribution<std::size_t>(2, 3)(gen);
    const auto g = random_game(gen, players, 4, 9);
    const Coalition s = std::uniform_int_distribution<Coalition>(1, (Coalition{1} << players) - 1)(gen);
    std::size_t member = 0;
    while (!(s >> member & 1u)) ++member;
    if (g.strategy_counts()[member] < 2) continue;
    const std::size_t dropped = std::uniform_int_distribution<std::size_t>(0, g.strategy_counts()[member] - 1)(gen);

    auto counts = g.strategy_counts();
    --counts[member];
    std::vector<double> pay;
    for (std::size_t idx = 0; idx < g.profile_count(); ++idx) {
      const auto p = g.profile_at(idx);
      if (p[member] == dropped) continue;
      for (std::size_t i = 0; i < players; ++i) pay.push_back(g.payoff_at(idx, i));
    }
    const NormalFormGame restricted(counts, pay);
    CHECK(characteristic_value(restricted, s) <= characteristic_value(g, s));
  }
}

TEST_CASE("in_core") {
  const auto additive = fx::additive(3);
  CHECK(in_core({1, 1, 1}, additive));
  CHECK(!in_core({2, 0.5, 0.5}, additive));

  const auto maj = fx::majority();
  CHECK(!in_core({1.0 / 3, 1.0 / 3, 1.0 / 3}, maj));
  const auto blockers = blocking_coalitions({1.0 / 3, 1.0 / 3, 1.0 / 3}, maj);
  CHECK(blockers == std::vector<Coalition>{3, 5, 6});

  CHECK_THROWS_WITH_AS(in_core({0.6, 0.5, 0.2}, maj), doctest::Contains("not efficient"), GameError);
  CHECK_THROWS_AS(in_core({1.0}, maj), GameError);
}

TEST_CASE("in_core with zero tolerance matches exact rational evaluation") {
  // Dyadic rationals (denominator 8) are exact in binary floating point.
  std::mt19937_64 gen(4242);
  constexpr double den = 8.0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 4)(gen);
    std::vector<long long> v_num((std::size_t{1} << n) - 1);
    for (auto& x : v_num) x = std::uniform_int_distribution<long long>(-8, 24)(gen);
    std::vector<long long> x_num(n);
    for (auto& x : x_num) x = std::uniform_int_distribution<long long>(-8, 16)(gen);
    v_num.back() = std::accumulate(x_num.begin(), x_num.end(), 0LL);  // efficiency

    std::vector<double> vv;
    for (auto x : v_num) vv.push_back(static_cast<double>(x) / den);
    Allocation xx;
    for (auto x : x_num) xx.push_back(static_cast<double>(x) / den);
    CHECK(in_core(xx, CharacteristicFunction(n, vv), 0.0) == exact_in_core(x_num, v_num));
  }
}

TEST_CASE("core_empty") {
  SUBCASE("majority game has no core point") {
    const auto r = core_empty(fx::majority(), 0.01);
    CHECK(!r.nonempty());
    CHECK(r.points_checked >= 5000);
  }
  SUBCASE("additive game") {
    const auto r = core_empty(fx::additive(3), 0.01);
    REQUIRE(r.nonempty());
    CHECK(*r.witness == Allocation{1, 1, 1});
  }
  SUBCASE("single player") {
    const auto r = core_empty(CharacteristicFunction(1, {5.0}), 0.5);
    REQUIRE(r.nonempty());
    CHECK(*r.witness == Allocation{5.0});
  }
  SUBCASE("guards") {
    CHECK_THROWS_AS(core_empty(fx::additive(7), 0.1), GameError);
    CHECK_THROWS_AS(core_empty(fx::additive(3), 0.0), GameError);
    CHECK_THROWS_AS(core_empty(fx::majority(), 1e-7), GameError);
  }
  SUBCASE("witnesses always pass in_core") {
    std::mt19937_64 gen(8);
    int found = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 4)(gen);
      std::vector<double> v((std::size_t{1} << n) - 1);
      for (Coalition s = 1; s <= v.size(); ++s)
        v[s - 1] = std::popcount(s) * std::uniform_real_distribution<double>(0.0, 1.0)(gen);
      v.back() = static_cast<double>(n);
      const CharacteristicFunction cf(n, v);
      const auto r = core_empty(cf, 0.05);
      if (r.witness) {
        ++found;
        CHECK(in_core(*r.witness, cf));
      }
    }
    CHECK(found > 0);
  }
  SUBCASE("PD maximin game core") {
    // v({0}) = v({1}) = 1, v(N) = 6: any split with both shares >= 1 works; the first grid point is (1, 5).
    const auto r = core_empty(build_characteristic(fx::prisoners_dilemma()), 0.5);
    REQUIRE(r.nonempty());
    CHECK(*r.witness == Allocation{1, 5});
  }
}
