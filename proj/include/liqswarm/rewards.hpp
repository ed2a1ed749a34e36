#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "liqswarm/game.hpp"

namespace liqswarm {

enum class RewardMode { Difference, Local, Global };

inline constexpr double kDefaultRepeatPenalty = 0.1;

/// Inputs for one paired learner. `outcome.offer_i` is the learner's own
/// offer and `outcome.offer_j` the partner's.
struct RewardContext {
  TradeOutcome outcome;
  Units own_offer = 0;
  std::int64_t episode_total = 0;  ///< G: sum of q over every pair this episode
  bool repeated_partner = false;
};

/// Marginal contribution: q with the agent's offer minus q with the offer
/// replaced by zero, partner's offer held fixed.
double difference_reward(ClearingRule rule, Units a_i, Units a_j);

/// 2q - a_i, less `penalty` when trading with the previous episode's partner.
double local_reward(Units q, Units a_i, bool repeated_partner,
                    double penalty = kDefaultRepeatPenalty);

double global_reward(std::int64_t episode_total);

/// Single-context dispatch shared by assign_rewards and the environment.
/// Throws std::logic_error when the context is internally inconsistent.
double reward_for(RewardMode mode, const RewardContext& context, ClearingRule rule,
                  double repeat_penalty = kDefaultRepeatPenalty);

std::vector<double> assign_rewards(RewardMode mode, std::span<const RewardContext> contexts,
                                   ClearingRule rule,
                                   double repeat_penalty = kDefaultRepeatPenalty);

}  // namespace liqswarm
