#pragma once

// Two-player Liquidity Game stage: clearing rules, payoffs and a brute-force
// pure Nash equilibrium oracle. All functions are pure.

#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace liqswarm {

/// Bond units. Balances and offers are magnitudes, always >= 0.
using Units = std::int32_t;

enum class ClearingRule { Exact, MinFill };

std::string_view to_string(ClearingRule rule);
std::optional<ClearingRule> parse_clearing_rule(std::string_view text);

struct TradeOutcome {
  Units offer_i = 0;
  Units offer_j = 0;
  Units quantity = 0;
  bool matched = false;

  friend bool operator==(const TradeOutcome&, const TradeOutcome&) = default;
};

struct StrategyProfile {
  Units action_i = 0;
  Units action_j = 0;

  friend auto operator<=>(const StrategyProfile&, const StrategyProfile&) = default;
};

/// Converts two simultaneous offers into a trade. Exact clears only on an
/// equal positive match; MinFill clears min(a_i, a_j) when both are positive.
/// Throws std::invalid_argument on negative offers.
TradeOutcome clear(ClearingRule rule, Units a_i, Units a_j);

/// Both players receive the cleared quantity.
std::pair<Units, Units> payoff(const TradeOutcome& outcome);

/// Every legal offer in {0..balance_i} maximizing player i's payoff against
/// the fixed opponent offer a_j, in increasing order.
std::vector<Units> best_response_set(ClearingRule rule, Units balance_i, Units a_j);

inline constexpr Units kDefaultEnumerationBound = 64;

/// Exhaustive pure-NE search over the (B_i+1) x (B_j+1) profile grid.
/// Throws std::invalid_argument for negative balances or balances above
/// `bound`. Profiles are returned sorted.
std::vector<StrategyProfile> enumerate_pure_nash(ClearingRule rule, Units balance_i,
                                                 Units balance_j,
                                                 Units bound = kDefaultEnumerationBound);

/// Checks an equilibrium set against the closed forms on its positive-trade
/// subset: Exact yields every diagonal (a, a) with 1 <= a <= min(B_i, B_j);
/// MinFill yields exactly (m, m) with m = min(B_i, B_j). Zero-trade profiles
/// are not constrained.
bool matches_closed_form(ClearingRule rule, Units balance_i, Units balance_j,
                         const std::vector<StrategyProfile>& equilibria);

}  // namespace liqswarm
