#include "liqswarm/runner.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "liqswarm/rng.hpp"

namespace liqswarm {

namespace fs = std::filesystem;

namespace {

constexpr const char* kEpisodesHeader = "episode,total_G,initial_balance_sum,hit_count,paired_count";
constexpr const char* kCohortsHeader = "episode,cohort,liquidity,trade_volume";
constexpr const char* kSeriesHeader = "episode,cum_liquidity,pct_cleared_smoothed,hit_rate_smoothed";
constexpr const char* kSummaryHeader =
    "total_liquidity,recorded_liquidity,mean_hit_rate_tail,episodes_to_threshold";

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw OutputError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw OutputError("cannot rename " + tmp.string() + ": " + ec.message());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw OutputError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::int64_t to_int(const std::string& s, const fs::path& file) {
  try {
    std::size_t used = 0;
    const auto v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw OutputError(file.string() + ": malformed integer '" + s + "'");
  }
}

double to_real(const std::string& s, const fs::path& file) {
  try {
    std::size_t used = 0;
    const auto v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw OutputError(file.string() + ": malformed number '" + s + "'");
  }
}

std::string episodes_csv(const std::vector<EpisodeRecord>& records) {
  std::string out = std::string(kEpisodesHeader) + "\n";
  for (const auto& r : records) {
    out += std::to_string(r.episode) + ',' + std::to_string(r.total_cleared) + ',' +
           std::to_string(r.initial_balance_sum) + ',' + std::to_string(r.hit_count) + ',' +
           std::to_string(r.paired_count) + '\n';
  }
  return out;
}

std::string cohorts_csv(const std::vector<EpisodeRecord>& records, const Population& population) {
  std::array<bool, kStrategyCount> present{};
  for (const auto& a : population.agents()) present[static_cast<std::size_t>(a.strategy)] = true;
  std::string out = std::string(kCohortsHeader) + "\n";
  for (const auto& r : records) {
    for (std::size_t c = 0; c < kStrategyCount; ++c) {
      if (!present[c]) continue;
      out += std::to_string(r.episode) + ',' + std::string(to_string(kAllStrategies[c])) + ',' +
             format_double(r.cohort_liquidity[c]) + ',' + std::to_string(r.cohort_volume[c]) + '\n';
    }
  }
  return out;
}

std::string series_csv(const std::vector<EpisodeRecord>& records, std::int32_t window) {
  const auto cum = cumulative_liquidity(records);
  const auto pct = percent_cleared(records, window);
  const auto hit = hit_rate(records, window);
  std::map<std::int64_t, double> hit_by_episode;
  for (const auto& p : hit) hit_by_episode.emplace(p.episode, p.value);

  std::string out = std::string(kSeriesHeader) + "\n";
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto e = records[k].episode;
    out += std::to_string(e) + ',' + format_double(cum[k].value) + ',' + format_double(pct[k].value) + ',';
    if (const auto it = hit_by_episode.find(e); it != hit_by_episode.end()) out += format_double(it->second);
    out += '\n';
  }
  return out;
}

std::string summary_csv(const RunSummary& s) {
  std::string out = std::string(kSummaryHeader) + "\n";
  out += format_double(s.total_liquidity) + ',' + format_double(s.recorded_liquidity) + ',' +
         format_double(s.mean_hit_rate_tail) + ',' +
         (s.episodes_to_threshold ? std::to_string(*s.episodes_to_threshold) : std::string()) + '\n';
  return out;
}

std::string metadata(const ExperimentConfig& config) {
  std::string out;
  out += "version=" + std::string(kVersion) + "\n";
  out += "rng=" + std::string(Rng::kAlgorithm) + "\n";
  out += "smoothing=trailing moving average\n";
  out += "pct_cleared=2*total_G/initial_balance_sum\n";
  out += "hit_rate=hit_count/paired_count\n";
  out += "label=" + config.run_label() + "\n";
  for (const auto& key : config_keys()) {
    out += "config." + std::string(key.name) + "=" + get_setting(config, key.name) + "\n";
  }
  for (const auto& key : config_keys()) {
    const bool user = config.explicit_keys.contains(std::string(key.name));
    out += "source." + std::string(key.name) + "=" +
           (user ? std::string("user") : std::string(to_string(key.provenance))) + "\n";
  }
  return out;
}

std::string qtable_csv(const Population& population, Strategy cohort) {
  std::string out = "agent,state,action,value\n";
  for (const auto& a : population.agents()) {
    if (a.strategy != cohort || !a.qtable) continue;
    for (Units s = 1; s <= a.qtable->max_state(); ++s) {
      for (Units act = 1; act <= s; ++act) {
        out += std::to_string(a.id) + ',' + std::to_string(s) + ',' + std::to_string(act) + ',' +
               format_double(a.qtable->value(s, act)) + '\n';
      }
    }
  }
  return out;
}

std::map<std::string, std::string> read_metadata(const fs::path& dir) {
  std::map<std::string, std::string> meta;
  const auto path = dir / "run.meta";
  if (!fs::exists(path)) return meta;
  for (const auto& line : lines_of(read_file(path))) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) meta.emplace(line.substr(0, eq), line.substr(eq + 1));
  }
  return meta;
}

}  // namespace

RunResult execute_run(const ExperimentConfig& config) {
  validate(config);
  Market market(config);
  std::vector<EpisodeRecord> records;
  records.reserve(static_cast<std::size_t>(config.episodes));
  for (std::int64_t e = 1; e <= config.episodes; ++e) records.push_back(market.run_episode(e));
  auto summary = summarize(records, config.smoothing_window, config.hit_threshold);
  return RunResult{config, std::move(records), market.population(), summary};
}

void write_run(const RunResult& result, const fs::path& dir, bool overwrite) {
  if (dir.empty()) throw OutputError("no output directory given");
  std::error_code ec;
  if (fs::exists(dir / "run.meta", ec) && !overwrite) {
    throw OutputError(dir.string() + " already holds a run; pass overwrite to replace it");
  }
  fs::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create " + dir.string() + ": " + ec.message());

  const auto& cfg = result.config;
  write_atomic(dir / "episodes.csv", episodes_csv(result.records));
  write_atomic(dir / "cohorts.csv", cohorts_csv(result.records, result.population));
  write_atomic(dir / "series.csv", series_csv(result.records, cfg.smoothing_window));
  write_atomic(dir / "summary.csv", summary_csv(result.summary));
  if (cfg.export_qtables) {
    for (const Strategy s : kAllStrategies) {
      if (!is_learner(s)) continue;
      const bool present = std::any_of(result.population.agents().begin(), result.population.agents().end(),
                                       [s](const AgentState& a) { return a.strategy == s; });
      if (present) write_atomic(dir / ("qtable_" + std::string(to_string(s)) + ".csv"), qtable_csv(result.population, s));
    }
  }
  // run.meta last: its presence marks a complete run.
  write_atomic(dir / "run.meta", metadata(cfg));
}

RunSummary run_single(const ExperimentConfig& config, bool overwrite) {
  if (config.output_dir.empty()) throw ConfigError("output_dir", "required");
  if (!overwrite && fs::exists(config.output_dir / "run.meta")) {
    throw OutputError(config.output_dir.string() + " already holds a run; pass overwrite to replace it");
  }
  const auto result = execute_run(config);
  write_run(result, config.output_dir, overwrite);
  return result.summary;
}

std::vector<ExperimentConfig> make_sweep_grid(const ExperimentConfig& base,
                                              const std::vector<ClearingRule>& rules,
                                              const std::vector<Strategy>& strategies,
                                              const std::vector<std::uint64_t>& seeds,
                                              const fs::path& root) {
  std::vector<ExperimentConfig> grid;
  for (const auto rule : rules) {
    for (const auto strategy : strategies) {
      for (const auto seed : seeds) {
        ExperimentConfig c = base;
        c.clearing_rule = rule;
        c.strategy = strategy;
        c.mixed = false;
        c.master_seed = seed;
        c.explicit_keys.insert({"clearing_rule", "strategy", "master_seed", "output_dir"});
        c.output_dir = root / (c.run_label() + "_s" + std::to_string(seed));
        grid.push_back(std::move(c));
      }
    }
  }
  return grid;
}

std::size_t SweepReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const SweepEntry& e) { return !e.ok; }));
}

SweepReport run_sweep(const std::vector<ExperimentConfig>& configs, const fs::path& root,
                      bool overwrite, int jobs) {
  SweepReport report;
  report.entries.resize(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < configs.size(); k = next++) {
      auto& entry = report.entries[k];
      entry.dir = configs[k].output_dir;
      try {
        run_single(configs[k], overwrite);
        entry.ok = true;
      } catch (const std::exception& e) {
        entry.error = e.what();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(configs.size())));
    for (int w = 0; w < n; ++w) pool.emplace_back(worker);
  }

  std::string manifest = "run,status,error\n";
  for (const auto& e : report.entries) {
    std::string error = e.error;
    std::replace(error.begin(), error.end(), ',', ';');
    std::replace(error.begin(), error.end(), '\n', ' ');
    manifest += e.dir.filename().string() + ',' + (e.ok ? "ok" : "failed") + ',' + error + '\n';
  }
  std::error_code ec;
  fs::create_directories(root, ec);
  write_atomic(root / "manifest.csv", manifest);
  return report;
}

std::vector<EpisodeRecord> read_episodes(const fs::path& dir) {
  const auto path = dir / "episodes.csv";
  const auto lines = lines_of(read_file(path));
  if (lines.empty() || lines.front() != kEpisodesHeader) {
    throw OutputError(path.string() + ": unexpected header");
  }
  std::vector<EpisodeRecord> records;
  std::map<std::int64_t, std::size_t> index;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto f = split(lines[k], ',');
    if (f.size() != 5) throw OutputError(path.string() + ": expected 5 fields on line " + std::to_string(k + 1));
    EpisodeRecord r;
    r.episode = to_int(f[0], path);
    r.total_cleared = to_int(f[1], path);
    r.initial_balance_sum = to_int(f[2], path);
    r.hit_count = to_int(f[3], path);
    r.paired_count = to_int(f[4], path);
    index[r.episode] = records.size();
    records.push_back(r);
  }

  const auto cohorts = dir / "cohorts.csv";
  if (fs::exists(cohorts)) {
    const auto clines = lines_of(read_file(cohorts));
    if (clines.empty() || clines.front() != kCohortsHeader) {
      throw OutputError(cohorts.string() + ": unexpected header");
    }
    for (std::size_t k = 1; k < clines.size(); ++k) {
      const auto f = split(clines[k], ',');
      if (f.size() != 4) throw OutputError(cohorts.string() + ": expected 4 fields");
      const auto it = index.find(to_int(f[0], cohorts));
      const auto strategy = parse_strategy(f[1]);
      if (it == index.end() || !strategy) throw OutputError(cohorts.string() + ": unknown episode or cohort");
      const auto c = static_cast<std::size_t>(*strategy);
      records[it->second].cohort_liquidity[c] = to_real(f[2], cohorts);
      records[it->second].cohort_volume[c] = to_int(f[3], cohorts);
    }
  }
  return records;
}

RunSummary report(const fs::path& dir, std::optional<std::int32_t> window,
                  std::optional<double> threshold) {
  const auto meta = read_metadata(dir);
  ExperimentConfig defaults;
  std::int32_t w = defaults.smoothing_window;
  double t = defaults.hit_threshold;
  if (const auto it = meta.find("config.smoothing_window"); it != meta.end()) {
    w = static_cast<std::int32_t>(to_int(it->second, dir / "run.meta"));
  }
  if (const auto it = meta.find("config.hit_threshold"); it != meta.end()) t = to_real(it->second, dir / "run.meta");
  if (window) w = *window;
  if (threshold) t = *threshold;
  if (w < 1) throw ConfigError("smoothing_window", "must be at least 1");

  const auto records = read_episodes(dir);
  const auto summary = summarize(records, w, t);
  write_atomic(dir / "series.csv", series_csv(records, w));
  write_atomic(dir / "summary.csv", summary_csv(summary));
  return summary;
}

}  // namespace liqswarm
