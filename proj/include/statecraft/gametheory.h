#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

// Exact desk-scale game theory: pure-strategy Nash equilibria of normal-form
// games, maximin characteristic functions, and the core of a coalitional game.
namespace statecraft::game {

class GameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using StrategyProfile = std::vector<std::size_t>;  // one strategy index per player
using Coalition = std::uint32_t;                   // bitmask over players, bit i = player i
using Allocation = std::vector<double>;

inline constexpr std::size_t kMaxCoalitionPlayers = 20;
inline constexpr std::size_t kMaxCharacteristicPlayers = 10;
inline constexpr std::size_t kMaxProfiles = std::size_t{1} << 22;
inline constexpr std::size_t kMaxCorePlayers = 6;
inline constexpr double kDefaultTolerance = 1e-9;

// Dense payoff table. Profiles are laid out row-major: player 0's index varies
// slowest, the last player's fastest. Each profile holds one payoff per player.
class NormalFormGame {
 public:
  NormalFormGame(std::vector<std::size_t> strategy_counts, std::vector<double> payoffs);

  std::size_t players() const { return counts_.size(); }
  const std::vector<std::size_t>& strategy_counts() const { return counts_; }
  std::size_t profile_count() const { return profiles_; }

  std::size_t index_of(const StrategyProfile& p) const;
  StrategyProfile profile_at(std::size_t index) const;

  double payoff(const StrategyProfile& p, std::size_t player) const;
  double payoff_at(std::size_t profile_index, std::size_t player) const {
    return payoffs_[profile_index * counts_.size() + player];
  }
  const std::vector<double>& table() const { return payoffs_; }

 private:
  std::vector<std::size_t> counts_;
  std::vector<double> payoffs_;
  std::size_t profiles_ = 0;
};

// v(S) for every nonempty S, stored at index S - 1.
class CharacteristicFunction {
 public:
  CharacteristicFunction(std::size_t players, std::vector<double> values);

  std::size_t players() const { return n_; }
  Coalition grand() const { return static_cast<Coalition>((Coalition{1} << n_) - 1); }
  double value(Coalition s) const;
  const std::vector<double>& values() const { return v_; }

 private:
  std::size_t n_;
  std::vector<double> v_;
};

std::vector<Coalition> enumerate_coalitions(std::size_t n);
std::vector<std::size_t> members(Coalition s);

std::vector<StrategyProfile> pure_nash(const NormalFormGame& game);

// Best total payoff S can guarantee when the rest of the players jointly pick
// the pure profile that is worst for S.
double characteristic_value(const NormalFormGame& game, Coalition s);
CharacteristicFunction build_characteristic(const NormalFormGame& game);

// Coalitions S with sum_{i in S} x_i < v(S) - eps. Throws GameError when x is
// not efficient to within eps or has the wrong length.
std::vector<Coalition> blocking_coalitions(const Allocation& x, const CharacteristicFunction& v,
                                           double eps = kDefaultTolerance);
bool in_core(const Allocation& x, const CharacteristicFunction& v, double eps = kDefaultTolerance);

struct CoreSearchResult {
  std::optional<Allocation> witness;  // empty means no core point at this grid resolution
  double grid_step = 0.0;
  std::size_t points_checked = 0;

  bool nonempty() const { return witness.has_value(); }
};

// Grid scan of the efficient, individually rational allocations. An empty
// result is only a statement about the grid, not a proof.
CoreSearchResult core_empty(const CharacteristicFunction& v, double grid_step, double eps = kDefaultTolerance);

}  // namespace statecraft::game
