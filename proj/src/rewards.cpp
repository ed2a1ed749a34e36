#include "liqswarm/rewards.hpp"

#include <stdexcept>

namespace liqswarm {

double difference_reward(ClearingRule rule, Units a_i, Units a_j) {
  const Units with_agent = clear(rule, a_i, a_j).quantity;
  const Units without_agent = clear(rule, 0, a_j).quantity;
  return static_cast<double>(with_agent - without_agent);
}

double local_reward(Units q, Units a_i, bool repeated_partner, double penalty) {
  if (q > a_i) throw std::logic_error("local_reward: cleared quantity exceeds own offer");
  return 2.0 * q - a_i - (repeated_partner ? penalty : 0.0);
}

double global_reward(std::int64_t episode_total) {
  if (episode_total < 0) throw std::logic_error("global_reward: negative episode total");
  return static_cast<double>(episode_total);
}

double reward_for(RewardMode mode, const RewardContext& context, ClearingRule rule,
                  double repeat_penalty) {
  const TradeOutcome& o = context.outcome;
  if (context.own_offer != o.offer_i) {
    throw std::logic_error("reward context: own_offer does not match outcome");
  }
  if (context.episode_total < o.quantity) {
    throw std::logic_error("reward context: episode total below pair quantity");
  }
  switch (mode) {
    case RewardMode::Difference:
      return difference_reward(rule, o.offer_i, o.offer_j);
    case RewardMode::Local:
      return local_reward(o.quantity, context.own_offer, context.repeated_partner, repeat_penalty);
    case RewardMode::Global:
      return global_reward(context.episode_total);
  }
  throw std::logic_error("unknown reward mode");
}

std::vector<double> assign_rewards(RewardMode mode, std::span<const RewardContext> contexts,
                                   ClearingRule rule, double repeat_penalty) {
  std::vector<double> rewards;
  rewards.reserve(contexts.size());
  for (const auto& c : contexts) rewards.push_back(reward_for(mode, c, rule, repeat_penalty));
  return rewards;
}

}  // namespace liqswarm
