#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "liqswarm/agents.hpp"
#include "liqswarm/game.hpp"

namespace liqswarm {

/// Successor state used when bootstrapping the Q-update.
enum class Bootstrap {
  Residual,     ///< post-trade balance s - q within the same episode
  NextEpisode,  ///< the agent's balance at the start of its next episode
};

std::string_view to_string(Bootstrap b);

struct CohortShare {
  Strategy strategy;
  double weight;
};

struct ExperimentConfig {
  std::int32_t n_agents = 1300;
  double fraction_large = 0.33;
  Units cap_small = 10;
  Units cap_large = 40;
  std::int64_t episodes = 10000;
  ClearingRule clearing_rule = ClearingRule::MinFill;
  Strategy strategy = Strategy::Difference;
  bool mixed = false;              ///< use `mix` instead of `strategy`
  std::vector<CohortShare> mix;    ///< cohort weights for mixed runs
  double alpha = 0.1;
  double gamma = 0.0;
  double epsilon = 0.2;
  double repeat_penalty = 0.1;
  double greedy_penalty_rate = 0.2;
  std::int32_t smoothing_window = 100;
  double hit_threshold = 0.7;
  bool carryover = false;
  Bootstrap bootstrap = Bootstrap::Residual;
  std::uint64_t master_seed = 0;
  bool strict_reproducibility = false;
  std::int32_t threads = 1;
  bool export_qtables = false;
  std::filesystem::path output_dir;

  /// Keys explicitly assigned through a file or flag.
  std::set<std::string> explicit_keys;

  LearnerParams learner() const { return {alpha, gamma, epsilon}; }
  /// "minfill_diff" style label; mixed runs read "minfill_mixed".
  std::string run_label() const;
};

/// Raised for parse and range errors. `field()` names the offending key
/// (empty for syntax errors that have no key).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Where a key's default comes from, recorded in run metadata: a model
/// constant, an implementation choice, or a per-run setting.
enum class Provenance { Model, Design, Run };
std::string_view to_string(Provenance p);

struct ConfigKey {
  std::string_view name;
  std::string_view help;
  Provenance provenance;
};

const std::vector<ConfigKey>& config_keys();

/// Assigns one key from its text form. Throws ConfigError.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);
/// Current value of a key in its canonical text form.
std::string get_setting(const ExperimentConfig& config, std::string_view key);

/// Parses flat `key = value` text; `#` starts a comment, blank lines are
/// ignored. Every key is optional.
void apply_config_text(ExperimentConfig& config, std::string_view text);
void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path);

/// Range checks across all fields. Throws ConfigError naming the field.
void validate(const ExperimentConfig& config);

/// Defaults, then `text`, then validation.
ExperimentConfig load_config(std::string_view text);

/// Shortest round-trip decimal form; locale independent.
std::string format_double(double v);

}  // namespace liqswarm
