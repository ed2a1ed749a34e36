// liqswarm command line: run, sweep and report. Uses only the C API.

#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "liqswarm/liqswarm.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitPartial = 3;

int exit_code(lqs_status status) {
  switch (status) {
    case LQS_OK: return kExitOk;
    case LQS_ERR_CONFIG:
    case LQS_ERR_ARGUMENT:
    case LQS_ERR_EXISTS: return kExitConfig;
    case LQS_ERR_PARTIAL: return kExitPartial;
    default: return kExitRuntime;
  }
}

int report_failure(lqs_status status) {
  std::fprintf(stderr, "liqswarm: %s\n", lqs_last_error());
  return exit_code(status);
}

struct ConfigDeleter {
  void operator()(lqs_config* c) const { lqs_config_destroy(c); }
};
struct RunDeleter {
  void operator()(lqs_run* r) const { lqs_run_destroy(r); }
};
using ConfigPtr = std::unique_ptr<lqs_config, ConfigDeleter>;
using RunPtr = std::unique_ptr<lqs_run, RunDeleter>;

// One CLI flag per configuration key; values are collected as text and
// applied after the config file so flags win.
struct KeyFlags {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App& app) {
    for (size_t k = 0; k < lqs_config_key_count(); ++k) {
      const std::string name = lqs_config_key_name(k);
      options[name] = app.add_option("--" + name, values[name], lqs_config_key_help(k))->group("Config keys");
    }
  }

  lqs_status build(const std::string& file, ConfigPtr& out) const {
    lqs_config* raw = nullptr;
    if (auto s = lqs_config_create(&raw); s != LQS_OK) return s;
    out.reset(raw);
    if (!file.empty()) {
      if (auto s = lqs_config_load_file(raw, file.c_str()); s != LQS_OK) return s;
    }
    for (const auto& [name, opt] : options) {
      if (opt->count() == 0) continue;
      if (auto s = lqs_config_set(raw, name.c_str(), values.at(name).c_str()); s != LQS_OK) return s;
    }
    return lqs_config_validate(raw);
  }
};

void print_summary(const lqs_summary& s) {
  std::printf("total_liquidity=%.17g\nrecorded_liquidity=%.17g\nmean_hit_rate_tail=%.17g\n",
              s.total_liquidity, s.recorded_liquidity, s.mean_hit_rate_tail);
  if (s.episodes_to_threshold >= 0) {
    std::printf("episodes_to_threshold=%lld\n", static_cast<long long>(s.episodes_to_threshold));
  } else {
    std::printf("episodes_to_threshold=\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bilateral liquidity-formation simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", lqs_version());

  std::string config_file;
  bool overwrite = false;

  auto* run = app.add_subcommand("run", "Run one configuration and write its output directory");
  KeyFlags run_flags;
  run->add_option("--config", config_file, "flat key = value config file")->check(CLI::ExistingFile);
  run->add_flag("--overwrite", overwrite, "replace an existing run directory");
  run_flags.attach(*run);

  auto* sweep = app.add_subcommand("sweep", "Run the rule x strategy x seed grid");
  KeyFlags sweep_flags;
  std::string rules = "exact,minfill";
  std::string strategies = "diff,local,global,random,greedy";
  std::string seeds = "1,2,3,4,5";
  int jobs = 1;
  sweep->add_option("--config", config_file, "base config file")->check(CLI::ExistingFile);
  sweep->add_option("--rules", rules, "comma-separated clearing rules")->capture_default_str();
  sweep->add_option("--strategies", strategies, "comma-separated strategies")->capture_default_str();
  sweep->add_option("--seeds", seeds, "comma-separated master seeds")->capture_default_str();
  sweep->add_option("--jobs", jobs, "runs executed concurrently")->capture_default_str()->check(CLI::PositiveNumber);
  sweep->add_flag("--overwrite", overwrite, "replace existing run directories");
  sweep_flags.attach(*sweep);

  auto* rep = app.add_subcommand("report", "Recompute series.csv and summary.csv from episodes.csv");
  std::string run_dir;
  int window = 0;
  double threshold = -1.0;
  rep->add_option("run_dir", run_dir, "run directory")->required()->check(CLI::ExistingDirectory);
  rep->add_option("--window", window, "smoothing window (default: from run.meta)");
  rep->add_option("--threshold", threshold, "hit-rate threshold (default: from run.meta)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (run->parsed()) {
    ConfigPtr cfg;
    if (auto s = run_flags.build(config_file, cfg); s != LQS_OK) return report_failure(s);
    lqs_run* raw = nullptr;
    if (auto s = lqs_run_create(cfg.get(), &raw); s != LQS_OK) return report_failure(s);
    RunPtr result(raw);
    if (auto s = lqs_run_write(result.get(), nullptr, overwrite ? 1 : 0); s != LQS_OK) return report_failure(s);
    lqs_summary summary{};
    lqs_run_summary(result.get(), &summary);
    print_summary(summary);
    return kExitOk;
  }

  if (sweep->parsed()) {
    ConfigPtr cfg;
    if (auto s = sweep_flags.build(config_file, cfg); s != LQS_OK) return report_failure(s);
    char root[4096];
    size_t needed = 0;
    if (auto s = lqs_config_get(cfg.get(), "output_dir", root, sizeof root, &needed); s != LQS_OK) {
      return report_failure(s);
    }
    if (root[0] == '\0') {
      std::fprintf(stderr, "liqswarm: sweep needs --output_dir\n");
      return kExitConfig;
    }
    size_t failed = 0;
    const auto s = lqs_sweep(cfg.get(), rules.c_str(), strategies.c_str(), seeds.c_str(), root,
                             overwrite ? 1 : 0, jobs, &failed);
    if (s != LQS_OK) return report_failure(s);
    std::printf("sweep complete: %s\n", root);
    return kExitOk;
  }

  lqs_summary summary{};
  if (auto s = lqs_report(run_dir.c_str(), window, threshold, &summary); s != LQS_OK) return report_failure(s);
  print_summary(summary);
  return kExitOk;
}
