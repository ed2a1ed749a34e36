#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "liqswarm/config.hpp"
#include "liqswarm/environment.hpp"
#include "liqswarm/metrics.hpp"

namespace liqswarm {

inline constexpr const char* kVersion = "1.0.0";

/// Output file or directory problem. Aborts the affected run only.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunResult {
  ExperimentConfig config;
  std::vector<EpisodeRecord> records;
  Population population;  ///< final state, for Q-table snapshots
  RunSummary summary;
};

RunResult execute_run(const ExperimentConfig& config);

/// Writes episodes.csv, cohorts.csv, series.csv, summary.csv and run.meta
/// (plus qtable_<cohort>.csv when export_qtables is set) into `dir`. Each
/// file is written to a temporary name and renamed into place. Refuses a
/// directory that already holds a run unless `overwrite`.
void write_run(const RunResult& result, const std::filesystem::path& dir, bool overwrite);

/// execute_run + write_run into config.output_dir.
RunSummary run_single(const ExperimentConfig& config, bool overwrite);

/// Cartesian grid rules x strategies x seeds over `base`. Each config's
/// output_dir is root/<rule>_<strategy>_s<seed>.
std::vector<ExperimentConfig> make_sweep_grid(const ExperimentConfig& base,
                                              const std::vector<ClearingRule>& rules,
                                              const std::vector<Strategy>& strategies,
                                              const std::vector<std::uint64_t>& seeds,
                                              const std::filesystem::path& root);

struct SweepEntry {
  std::filesystem::path dir;
  bool ok = false;
  std::string error;
};

struct SweepReport {
  std::vector<SweepEntry> entries;
  std::size_t failures() const;
};

/// Runs every config (up to `jobs` at a time). A failing run is recorded and
/// the sweep continues. Writes manifest.csv (run,status,error) into `root`.
SweepReport run_sweep(const std::vector<ExperimentConfig>& configs,
                      const std::filesystem::path& root, bool overwrite, int jobs);

/// Reads episodes.csv (and cohorts.csv when present) from a run directory.
std::vector<EpisodeRecord> read_episodes(const std::filesystem::path& dir);

/// Recomputes series.csv and summary.csv from a run's episodes.csv. Window
/// and threshold default to the values in run.meta, else 100 and 0.7.
RunSummary report(const std::filesystem::path& dir, std::optional<std::int32_t> window,
                  std::optional<double> threshold);

}  // namespace liqswarm
