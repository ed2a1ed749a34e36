#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "liqswarm/agents.hpp"
#include "liqswarm/config.hpp"
#include "liqswarm/game.hpp"
#include "liqswarm/rng.hpp"

namespace liqswarm {

enum class FirmSize { Small, Large };

/// Aborts a run: a conservation or bounds check failed.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A learner transition waiting for its successor state (next-episode
/// bootstrap only).
struct PendingUpdate {
  Units state = 0;
  Units action = 0;
  double reward = 0.0;
};

struct AgentState {
  std::int32_t id = 0;
  FirmSize size = FirmSize::Small;
  Units cap = 0;
  Units balance = 0;
  Strategy strategy = Strategy::Random;
  std::optional<QTable> qtable;  ///< learners only
  std::int32_t previous_partner = -1;
  std::optional<PendingUpdate> pending;
};

class Population {
 public:
  /// Firm sizes: the first round(n * fraction_large) ids are large. Cohorts
  /// follow `config.strategy`, or `config.mix` shuffled over ids.
  static Population build(const ExperimentConfig& config);

  std::span<AgentState> agents() { return agents_; }
  std::span<const AgentState> agents() const { return agents_; }
  std::size_t size() const { return agents_.size(); }
  AgentState& operator[](std::size_t i) { return agents_[i]; }
  const AgentState& operator[](std::size_t i) const { return agents_[i]; }

 private:
  std::vector<AgentState> agents_;
};

/// Draws every agent's balance uniformly from {1..cap}. With `carryover`
/// an agent keeps a positive residual balance and only redraws at zero.
/// Learning state is untouched.
void reset_episode(Population& population, std::uint64_t master_seed, std::int64_t episode,
                   bool carryover = false);

struct Pairing {
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  std::optional<std::int32_t> unpaired;
};

/// Uniform random matching: Fisher-Yates shuffle, then adjacent pairs.
Pairing pair_agents(std::vector<std::int32_t> eligible, Rng& rng);

using CohortLiquidity = std::array<double, kStrategyCount>;
using CohortVolume = std::array<std::int64_t, kStrategyCount>;

struct EpisodeRecord {
  std::int64_t episode = 0;  ///< 1-based
  std::int64_t total_cleared = 0;
  std::int64_t initial_balance_sum = 0;
  std::int64_t hit_count = 0;     ///< paired agents whose pair cleared q > 0
  std::int64_t paired_count = 0;  ///< agents in a pair
  /// Sum of q over each cohort's paired agents, less greedy over-offer
  /// charges under MinFill.
  CohortLiquidity cohort_liquidity{};
  CohortVolume cohort_volume{};
};

/// Per-agent view of the most recent episode.
struct AgentStep {
  bool paired = false;
  std::int32_t partner = -1;
  Units start_balance = 0;
  Units offer = 0;
  Units quantity = 0;
  bool explored = false;
  std::optional<double> reward;  ///< learners only
};

/// The population-level episode loop.
class Market {
 public:
  explicit Market(const ExperimentConfig& config);

  Population& population() { return population_; }
  const Population& population() const { return population_; }
  const ExperimentConfig& config() const { return config_; }
  std::span<const AgentStep> last_steps() const { return steps_; }

  /// Reset, settle pending next-episode updates, pair, then step.
  EpisodeRecord run_episode(std::int64_t episode);

  /// Offers, clearing, balance updates, rewards and Q-updates for a given
  /// pairing over the current balances. Offers are drawn from per-agent
  /// streams before any pair clears, so the order of `pairing.pairs` does
  /// not affect any outcome.
  EpisodeRecord step(std::int64_t episode, const Pairing& pairing);

 private:
  void settle_pending();

  ExperimentConfig config_;
  Population population_;
  std::vector<AgentStep> steps_;
};

/// Full experiment. Deterministic in (config, master_seed) and independent
/// of `threads`. Throws ConfigError before running on an invalid config.
std::vector<EpisodeRecord> run_experiment(const ExperimentConfig& config);

}  // namespace liqswarm
