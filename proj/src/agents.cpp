#include "liqswarm/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace liqswarm {

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::Difference: return "diff";
    case Strategy::Local: return "local";
    case Strategy::Global: return "global";
    case Strategy::Random: return "random";
    case Strategy::Greedy: return "greedy";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view text) {
  for (Strategy s : kAllStrategies) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

bool is_learner(Strategy strategy) {
  return strategy == Strategy::Difference || strategy == Strategy::Local ||
         strategy == Strategy::Global;
}

RewardMode reward_mode(Strategy strategy) {
  switch (strategy) {
    case Strategy::Difference: return RewardMode::Difference;
    case Strategy::Local: return RewardMode::Local;
    case Strategy::Global: return RewardMode::Global;
    default: throw std::logic_error("baseline strategy has no reward mode");
  }
}

void LearnerParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0, 1]");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in [0, 1)");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must be in [0, 1]");
}

QTable::QTable(Units max_state) : max_state_(max_state) {
  if (max_state < 0) throw std::invalid_argument("QTable: negative max state");
  const auto n = static_cast<std::size_t>(max_state);
  values_.assign(n * (n + 1) / 2, 0.0);
}

std::size_t QTable::index(Units s, Units a) const {
  if (!feasible(s, a)) {
    throw std::logic_error("QTable: infeasible entry (" + std::to_string(s) + ", " +
                           std::to_string(a) + ")");
  }
  const auto row = static_cast<std::size_t>(s);
  return row * (row - 1) / 2 + static_cast<std::size_t>(a - 1);
}

std::span<const double> QTable::row(Units s) const {
  if (s == 0) return {};
  return std::span<const double>(values_).subspan(index(s, 1), static_cast<std::size_t>(s));
}

double QTable::max_value(Units s) const {
  if (s == 0) return 0.0;
  const auto r = row(s);
  return *std::max_element(r.begin(), r.end());
}

std::optional<ActionChoice> select_action(const QTable& q, Units s, const LearnerParams& params,
                                          Rng& rng) {
  if (s <= 0) return std::nullopt;
  if (rng.bernoulli(params.epsilon)) {
    return ActionChoice{static_cast<Units>(rng.between(1, s)), true};
  }
  const auto r = q.row(s);
  const double best = *std::max_element(r.begin(), r.end());
  const auto ties = static_cast<std::uint64_t>(std::count(r.begin(), r.end(), best));
  auto pick = rng.below(ties);
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (r[k] == best && pick-- == 0) return ActionChoice{static_cast<Units>(k + 1), false};
  }
  throw std::logic_error("select_action: tie selection fell through");
}

void q_update(QTable& q, Units s, Units a, double reward, Units s_next,
              const LearnerParams& params) {
  if (!q.feasible(s, a)) throw std::logic_error("q_update: infeasible state-action pair");
  if (s_next < 0 || s_next > q.max_state()) throw std::logic_error("q_update: successor out of range");
  const double old = q.value(s, a);
  const double target = reward + params.gamma * q.max_value(s_next);
  const double updated = old + params.alpha * (target - old);
  if (!std::isfinite(updated)) throw std::logic_error("q_update: non-finite value");
  q.set(s, a, updated);
}

std::optional<Units> random_policy(Units s, Rng& rng) {
  if (s <= 0) return std::nullopt;
  return static_cast<Units>(rng.between(1, s));
}

std::optional<Units> greedy_policy(Units s) {
  if (s <= 0) return std::nullopt;
  return s;
}

double greedy_liquidity_penalty(Units a_i, Units a_j, double rate) {
  return rate * std::max<Units>(0, a_i - a_j);
}

}  // namespace liqswarm
