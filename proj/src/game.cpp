#include "liqswarm/game.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace liqswarm {

std::string_view to_string(ClearingRule rule) {
  return rule == ClearingRule::Exact ? "exact" : "minfill";
}

std::optional<ClearingRule> parse_clearing_rule(std::string_view text) {
  if (text == "exact") return ClearingRule::Exact;
  if (text == "minfill") return ClearingRule::MinFill;
  return std::nullopt;
}

TradeOutcome clear(ClearingRule rule, Units a_i, Units a_j) {
  if (a_i < 0 || a_j < 0) throw std::invalid_argument("offers must be non-negative");
  Units q = 0;
  switch (rule) {
    case ClearingRule::Exact:
      q = (a_i == a_j && a_i > 0) ? a_i : 0;
      break;
    case ClearingRule::MinFill:
      q = (a_i > 0 && a_j > 0) ? std::min(a_i, a_j) : 0;
      break;
  }
  return TradeOutcome{a_i, a_j, q, q > 0};
}

std::pair<Units, Units> payoff(const TradeOutcome& outcome) {
  return {outcome.quantity, outcome.quantity};
}

std::vector<Units> best_response_set(ClearingRule rule, Units balance_i, Units a_j) {
  if (balance_i < 0 || a_j < 0) throw std::invalid_argument("balances and offers must be non-negative");
  Units best = -1;
  std::vector<Units> responses;
  for (Units a = 0; a <= balance_i; ++a) {
    const Units u = payoff(clear(rule, a, a_j)).first;
    if (u > best) {
      best = u;
      responses.clear();
    }
    if (u == best) responses.push_back(a);
  }
  return responses;
}

std::vector<StrategyProfile> enumerate_pure_nash(ClearingRule rule, Units balance_i,
                                                 Units balance_j, Units bound) {
  if (balance_i < 0 || balance_j < 0) throw std::invalid_argument("balances must be non-negative");
  if (balance_i > bound || balance_j > bound) {
    throw std::invalid_argument("balance exceeds enumeration bound " + std::to_string(bound));
  }
  // Best-response sets for each fixed opponent action, computed once per side.
  std::vector<std::vector<Units>> br_i(balance_j + 1), br_j(balance_i + 1);
  for (Units a_j = 0; a_j <= balance_j; ++a_j) br_i[a_j] = best_response_set(rule, balance_i, a_j);
  for (Units a_i = 0; a_i <= balance_i; ++a_i) br_j[a_i] = best_response_set(rule, balance_j, a_i);

  std::vector<StrategyProfile> equilibria;
  for (Units a_i = 0; a_i <= balance_i; ++a_i) {
    for (Units a_j = 0; a_j <= balance_j; ++a_j) {
      if (std::binary_search(br_i[a_j].begin(), br_i[a_j].end(), a_i) &&
          std::binary_search(br_j[a_i].begin(), br_j[a_i].end(), a_j)) {
        equilibria.push_back({a_i, a_j});
      }
    }
  }
  return equilibria;
}

bool matches_closed_form(ClearingRule rule, Units balance_i, Units balance_j,
                         const std::vector<StrategyProfile>& equilibria) {
  const Units m = std::min(balance_i, balance_j);
  std::vector<StrategyProfile> trading;
  for (const auto& p : equilibria) {
    if (clear(rule, p.action_i, p.action_j).matched) trading.push_back(p);
  }
  std::sort(trading.begin(), trading.end());

  std::vector<StrategyProfile> expected;
  if (rule == ClearingRule::Exact) {
    for (Units a = 1; a <= m; ++a) expected.push_back({a, a});
  } else if (m > 0) {
    expected.push_back({m, m});
  }
  return trading == expected;
}

}  // namespace liqswarm
