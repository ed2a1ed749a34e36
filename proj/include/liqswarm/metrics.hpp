#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "liqswarm/environment.hpp"

namespace liqswarm {

struct SeriesPoint {
  std::int64_t episode = 0;
  double value = 0.0;

  friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

using Series = std::vector<SeriesPoint>;

/// Running total of cleared volume G.
Series cumulative_liquidity(std::span<const EpisodeRecord> records);
/// Running total of one cohort's recorded liquidity (greedy charges applied).
Series cumulative_cohort_liquidity(std::span<const EpisodeRecord> records, Strategy cohort);

/// Trailing moving average over the last `window` points; the first points
/// average whatever is available.
Series smooth(const Series& raw, std::int32_t window);

/// Share of the episode's initial balances that was cleared. Each unit of q
/// leaves both counterparties' balances, so the raw ratio is
/// 2 * G / initial_balance_sum, which is 1 when every unit held is traded.
Series percent_cleared(std::span<const EpisodeRecord> records, std::int32_t window);

/// hit_count / paired_count per episode, smoothed. Episodes without pairs
/// are omitted.
Series hit_rate(std::span<const EpisodeRecord> records, std::int32_t window);

/// Episode of the first point with value >= threshold.
std::optional<std::int64_t> first_crossing(const Series& series, double threshold);

struct RunSummary {
  double total_liquidity = 0.0;     ///< sum of G over all episodes
  double recorded_liquidity = 0.0;  ///< sum of cohort liquidity (per agent, charges applied)
  double mean_hit_rate_tail = 0.0;  ///< raw hit rate averaged over the final 10% of episodes
  std::optional<std::int64_t> episodes_to_threshold;
};

RunSummary summarize(std::span<const EpisodeRecord> records, std::int32_t window,
                     double threshold);

}  // namespace liqswarm
