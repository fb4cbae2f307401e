#include "statecraft/gametheory.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace statecraft::game {

NormalFormGame::NormalFormGame(std::vector<std::size_t> strategy_counts, std::vector<double> payoffs)
    : counts_(std::move(strategy_counts)), payoffs_(std::move(payoffs)) {
  if (counts_.empty()) throw GameError("game must have at least one player");
  profiles_ = 1;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] == 0) throw GameError("player " + std::to_string(i) + " has no strategies");
    if (profiles_ > kMaxProfiles / counts_[i]) throw GameError("game exceeds the profile limit");
    profiles_ *= counts_[i];
  }
  if (payoffs_.size() != profiles_ * counts_.size()) {
    std::ostringstream os;
    os << "payoff table has " << payoffs_.size() << " entries, expected " << profiles_ << " profiles x "
       << counts_.size() << " players";
    throw GameError(os.str());
  }
  for (double u : payoffs_)
    if (!std::isfinite(u)) throw GameError("payoffs must be finite");
}

std::size_t NormalFormGame::index_of(const StrategyProfile& p) const {
  if (p.size() != counts_.size()) throw GameError("profile length does not match player count");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (p[i] >= counts_[i]) throw GameError("strategy index out of range for player " + std::to_string(i));
    idx = idx * counts_[i] + p[i];
  }
  return idx;
}

StrategyProfile NormalFormGame::profile_at(std::size_t index) const {
  StrategyProfile p(counts_.size());
  for (std::size_t i = counts_.size(); i-- > 0;) {
    p[i] = index % counts_[i];
    index /= counts_[i];
  }
  return p;
}

double NormalFormGame::payoff(const StrategyProfile& p, std::size_t player) const {
  return payoff_at(index_of(p), player);
}

CharacteristicFunction::CharacteristicFunction(std::size_t players, std::vector<double> values)
    : n_(players), v_(std::move(values)) {
  if (n_ == 0 || n_ > kMaxCoalitionPlayers) throw GameError("characteristic function player count out of range");
  if (v_.size() != (std::size_t{1} << n_) - 1)
    throw GameError("characteristic function needs exactly 2^n - 1 values");
  for (double x : v_)
    if (!std::isfinite(x)) throw GameError("characteristic values must be finite");
}

double CharacteristicFunction::value(Coalition s) const {
  if (s == 0 || s > grand()) throw GameError("coalition " + std::to_string(s) + " is not a nonempty subset");
  return v_[s - 1];
}

std::vector<Coalition> enumerate_coalitions(std::size_t n) {
  if (n == 0) throw GameError("enumerate_coalitions: need at least one player");
  if (n > kMaxCoalitionPlayers) throw GameError("enumerate_coalitions: more than 20 players");
  const Coalition last = static_cast<Coalition>((Coalition{1} << n) - 1);
  std::vector<Coalition> out(last);
  std::iota(out.begin(), out.end(), Coalition{1});
  return out;
}

std::vector<std::size_t> members(Coalition s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; s != 0; ++i, s >>= 1)
    if (s & 1u) out.push_back(i);
  return out;
}

std::vector<StrategyProfile> pure_nash(const NormalFormGame& game) {
  const std::size_t n = game.players();
  const auto& counts = game.strategy_counts();
  // stride[i]: index distance between adjacent strategies of player i
  std::vector<std::size_t> stride(n, 1);
  for (std::size_t i = n - 1; i-- > 0;) stride[i] = stride[i + 1] * counts[i + 1];

  std::vector<StrategyProfile> out;
  for (std::size_t idx = 0; idx < game.profile_count(); ++idx) {
    bool stable = true;
    for (std::size_t i = 0; i < n && stable; ++i) {
      const std::size_t own = (idx / stride[i]) % counts[i];
      const std::size_t base = idx - own * stride[i];
      const double u = game.payoff_at(idx, i);
      for (std::size_t alt = 0; alt < counts[i]; ++alt) {
        if (game.payoff_at(base + alt * stride[i], i) > u) {
          stable = false;
          break;
        }
      }
    }
    if (stable) out.push_back(game.profile_at(idx));
  }
  return out;
}

double characteristic_value(const NormalFormGame& game, Coalition s) {
  const std::size_t n = game.players();
  if (s == 0) throw GameError("characteristic_value: empty coalition");
  if (n >= 32 || s >= (Coalition{1} << n)) throw GameError("characteristic_value: coalition names unknown players");
  const auto in_s = members(s);
  const auto& counts = game.strategy_counts();

  std::size_t joint = 1;
  for (auto i : in_s) joint *= counts[i];
  std::vector<double> worst(joint, std::numeric_limits<double>::infinity());

  for (std::size_t idx = 0; idx < game.profile_count(); ++idx) {
    const auto p = game.profile_at(idx);
    std::size_t key = 0;
    double sum = 0.0;
    for (auto i : in_s) {
      key = key * counts[i] + p[i];
      sum += game.payoff_at(idx, i);
    }
    worst[key] = std::min(worst[key], sum);
  }
  return *std::max_element(worst.begin(), worst.end());
}

CharacteristicFunction build_characteristic(const NormalFormGame& game) {
  const std::size_t n = game.players();
  if (n > kMaxCharacteristicPlayers) throw GameError("build_characteristic: more than 10 players");
  std::vector<double> v;
  for (Coalition s : enumerate_coalitions(n)) v.push_back(characteristic_value(game, s));
  return CharacteristicFunction(n, std::move(v));
}

std::vector<Coalition> blocking_coalitions(const Allocation& x, const CharacteristicFunction& v, double eps) {
  if (x.size() != v.players()) {
    std::ostringstream os;
    os << "allocation has " << x.size() << " entries for a " << v.players() << "-player game";
    throw GameError(os.str());
  }
  const double total = std::accumulate(x.begin(), x.end(), 0.0);
  const double gap = total - v.value(v.grand());
  if (std::abs(gap) > eps) {
    std::ostringstream os;
    os.precision(17);
    os << "allocation is not efficient: sum " << total << " differs from v(N) " << v.value(v.grand()) << " by "
       << gap;
    throw GameError(os.str());
  }
  std::vector<Coalition> out;
  for (Coalition s = 1; s <= v.grand(); ++s) {
    double share = 0.0;
    for (auto i : members(s)) share += x[i];
    if (share < v.value(s) - eps) out.push_back(s);
  }
  return out;
}

bool in_core(const Allocation& x, const CharacteristicFunction& v, double eps) {
  return blocking_coalitions(x, v, eps).empty();
}

namespace {

struct GridScan {
  const CharacteristicFunction& v;
  double step;
  double eps;
  std::vector<double> floor;  // v({i})
  Allocation x;
  CoreSearchResult result;

  // Assigns x[i] for i < n-1 by recursion; the last share takes the remainder.
  bool visit(std::size_t i, double assigned, double slack) {
    const std::size_t n = x.size();
    if (i + 1 == n) {
      x[i] = v.value(v.grand()) - assigned;
      ++result.points_checked;
      if (x[i] >= floor[i] - eps && in_core(x, v, eps)) {
        result.witness = x;
        return true;
      }
      return false;
    }
    for (std::size_t k = 0;; ++k) {
      const double extra = static_cast<double>(k) * step;
      if (extra > slack + eps) break;
      x[i] = floor[i] + extra;
      if (visit(i + 1, assigned + x[i], slack - extra)) return true;
    }
    return false;
  }
};

}  // namespace

CoreSearchResult core_empty(const CharacteristicFunction& v, double grid_step, double eps) {
  const std::size_t n = v.players();
  if (n > kMaxCorePlayers) throw GameError("core_empty: more than 6 players");
  if (!(grid_step > 0.0) || !std::isfinite(grid_step)) throw GameError("core_empty: grid step must be positive");

  GridScan scan{v, grid_step, eps, std::vector<double>(n), Allocation(n), {}};
  scan.result.grid_step = grid_step;
  double floor_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    scan.floor[i] = v.value(Coalition{1} << i);
    floor_sum += scan.floor[i];
  }
  const double slack = v.value(v.grand()) - floor_sum;
  if (slack < -eps) return scan.result;  // no efficient allocation is individually rational

  // Grid points = C(K + n - 1, n - 1) for K = slack / step.
  const double k = std::floor(slack / grid_step + 1.0);
  double points = 1.0;
  for (std::size_t j = 1; j < n; ++j) points = points * (k + static_cast<double>(j)) / static_cast<double>(j);
  if (points > 5e7) throw GameError("core_empty: grid too fine for this game");

  scan.visit(0, 0.0, slack);
  return scan.result;
}

}  // namespace statecraft::game
