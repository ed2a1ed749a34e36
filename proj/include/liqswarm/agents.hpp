#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "liqswarm/game.hpp"
#include "liqswarm/rewards.hpp"
#include "liqswarm/rng.hpp"

namespace liqswarm {

/// Policy kind of an agent; fixed for the whole run. The first three are
/// Q-learners that differ only in reward signal.
enum class Strategy { Difference, Local, Global, Random, Greedy };

inline constexpr std::size_t kStrategyCount = 5;
inline constexpr Strategy kAllStrategies[kStrategyCount] = {
    Strategy::Difference, Strategy::Local, Strategy::Global, Strategy::Random, Strategy::Greedy};

std::string_view to_string(Strategy strategy);
std::optional<Strategy> parse_strategy(std::string_view text);
bool is_learner(Strategy strategy);
/// Reward mode of a learner. Throws std::logic_error for baselines.
RewardMode reward_mode(Strategy strategy);

struct LearnerParams {
  double alpha = 0.1;
  double gamma = 0.0;
  double epsilon = 0.2;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Tabular action values over states 0..max_state (the balance) and actions
/// 1..s. State 0 has no actions. Stored as a packed triangle.
class QTable {
 public:
  explicit QTable(Units max_state);

  Units max_state() const { return max_state_; }
  bool feasible(Units s, Units a) const { return s >= 1 && s <= max_state_ && a >= 1 && a <= s; }

  double value(Units s, Units a) const { return values_[index(s, a)]; }
  void set(Units s, Units a, double v) { values_[index(s, a)] = v; }
  /// Values for actions 1..s of state s.
  std::span<const double> row(Units s) const;
  /// max_a Q(s, a); 0 for s == 0.
  double max_value(Units s) const;

  std::size_t entry_count() const { return values_.size(); }
  std::span<const double> raw() const { return values_; }

 private:
  std::size_t index(Units s, Units a) const;

  Units max_state_;
  std::vector<double> values_;
};

struct ActionChoice {
  Units offer = 0;
  bool explored = false;
};

/// Epsilon-greedy over {1..s}; ties in the greedy branch are broken
/// uniformly. Returns nullopt for a dormant agent (s == 0).
std::optional<ActionChoice> select_action(const QTable& q, Units s, const LearnerParams& params,
                                          Rng& rng);

/// One-step Q-learning update of entry (s, a). An empty successor action set
/// (s_next == 0) bootstraps on 0. Throws std::logic_error for infeasible
/// (s, a) or out-of-range s_next.
void q_update(QTable& q, Units s, Units a, double reward, Units s_next,
              const LearnerParams& params);

std::optional<Units> random_policy(Units s, Rng& rng);
std::optional<Units> greedy_policy(Units s);

inline constexpr double kDefaultGreedyPenaltyRate = 0.2;

/// Charge against a greedy agent's recorded liquidity when it over-offers
/// its partner under MinFill. Affects metrics only.
double greedy_liquidity_penalty(Units a_i, Units a_j, double rate = kDefaultGreedyPenaltyRate);

}  // namespace liqswarm
