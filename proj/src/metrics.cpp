#include "liqswarm/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace liqswarm {

namespace {

void require_window(std::int32_t window) {
  if (window < 1) throw std::invalid_argument("smoothing window must be at least 1");
}

Series raw_hit_rate(std::span<const EpisodeRecord> records) {
  Series raw;
  raw.reserve(records.size());
  for (const auto& r : records) {
    if (r.paired_count == 0) continue;
    raw.push_back({r.episode, static_cast<double>(r.hit_count) / static_cast<double>(r.paired_count)});
  }
  return raw;
}

}  // namespace

Series cumulative_liquidity(std::span<const EpisodeRecord> records) {
  Series out;
  out.reserve(records.size());
  std::int64_t total = 0;
  for (const auto& r : records) {
    total += r.total_cleared;
    out.push_back({r.episode, static_cast<double>(total)});
  }
  return out;
}

Series cumulative_cohort_liquidity(std::span<const EpisodeRecord> records, Strategy cohort) {
  Series out;
  out.reserve(records.size());
  double total = 0.0;
  for (const auto& r : records) {
    total += r.cohort_liquidity[static_cast<std::size_t>(cohort)];
    out.push_back({r.episode, total});
  }
  return out;
}

Series smooth(const Series& raw, std::int32_t window) {
  require_window(window);
  Series out;
  out.reserve(raw.size());
  // Re-summing each window keeps results independent of accumulated
  // rounding from a running sum.
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const std::size_t begin = k + 1 >= static_cast<std::size_t>(window) ? k + 1 - window : 0;
    double sum = 0.0;
    for (std::size_t m = begin; m <= k; ++m) sum += raw[m].value;
    out.push_back({raw[k].episode, sum / static_cast<double>(k + 1 - begin)});
  }
  return out;
}

Series percent_cleared(std::span<const EpisodeRecord> records, std::int32_t window) {
  require_window(window);
  Series raw;
  raw.reserve(records.size());
  for (const auto& r : records) {
    if (r.initial_balance_sum <= 0) {
      throw InvariantViolation("episode " + std::to_string(r.episode) + " has no initial balance");
    }
    raw.push_back({r.episode, 2.0 * static_cast<double>(r.total_cleared) /
                                  static_cast<double>(r.initial_balance_sum)});
  }
  return smooth(raw, window);
}

Series hit_rate(std::span<const EpisodeRecord> records, std::int32_t window) {
  return smooth(raw_hit_rate(records), window);
}

std::optional<std::int64_t> first_crossing(const Series& series, double threshold) {
  for (const auto& p : series) {
    if (p.value >= threshold) return p.episode;
  }
  return std::nullopt;
}

RunSummary summarize(std::span<const EpisodeRecord> records, std::int32_t window,
                     double threshold) {
  RunSummary summary;
  for (const auto& r : records) {
    summary.total_liquidity += static_cast<double>(r.total_cleared);
    for (const double v : r.cohort_liquidity) summary.recorded_liquidity += v;
  }
  const auto tail_len = static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(records.size())));
  const auto tail = raw_hit_rate(records.subspan(records.size() - tail_len));
  if (!tail.empty()) {
    double sum = 0.0;
    for (const auto& p : tail) sum += p.value;
    summary.mean_hit_rate_tail = sum / static_cast<double>(tail.size());
  }
  summary.episodes_to_threshold = first_crossing(hit_rate(records, window), threshold);
  return summary;
}

}  // namespace liqswarm
