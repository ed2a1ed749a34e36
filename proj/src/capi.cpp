#include "liqswarm/liqswarm.h"

#include <algorithm>
#include <cstring>
#include <sstream>
#include <string>

#include "liqswarm/config.hpp"
#include "liqswarm/game.hpp"
#include "liqswarm/runner.hpp"

struct lqs_config {
  liqswarm::ExperimentConfig value;
};

struct lqs_run {
  liqswarm::RunResult result;
};

namespace {

thread_local std::string last_error;

lqs_status fail(lqs_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Maps core exceptions onto status codes.
template <typename Fn>
lqs_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const liqswarm::ConfigError& e) {
    return fail(LQS_ERR_CONFIG, e.what());
  } catch (const liqswarm::OutputError& e) {
    const std::string msg = e.what();
    return fail(msg.find("already holds a run") != std::string::npos ? LQS_ERR_EXISTS : LQS_ERR_RUNTIME, msg);
  } catch (const liqswarm::InvariantViolation& e) {
    return fail(LQS_ERR_RUNTIME, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(LQS_ERR_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(LQS_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(LQS_ERR_RUNTIME, "unknown error");
  }
}

std::vector<std::string> split_list(const char* text) {
  std::vector<std::string> out;
  std::istringstream in(text ? text : "");
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void fill_summary(const liqswarm::RunSummary& s, lqs_summary* out) {
  out->total_liquidity = s.total_liquidity;
  out->recorded_liquidity = s.recorded_liquidity;
  out->mean_hit_rate_tail = s.mean_hit_rate_tail;
  out->episodes_to_threshold = s.episodes_to_threshold.value_or(-1);
}

liqswarm::ClearingRule to_rule(lqs_rule rule) {
  if (rule == LQS_RULE_EXACT) return liqswarm::ClearingRule::Exact;
  if (rule == LQS_RULE_MINFILL) return liqswarm::ClearingRule::MinFill;
  throw std::invalid_argument("unknown clearing rule");
}

}  // namespace

extern "C" {

const char* lqs_version(void) { return liqswarm::kVersion; }

const char* lqs_last_error(void) { return last_error.c_str(); }

lqs_status lqs_config_create(lqs_config** out) {
  if (!out) return fail(LQS_ERR_ARGUMENT, "null output pointer");
  return guarded([&] {
    *out = new lqs_config{};
    return LQS_OK;
  });
}

lqs_status lqs_config_clone(const lqs_config* config, lqs_config** out) {
  if (!config || !out) return fail(LQS_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new lqs_config{config->value};
    return LQS_OK;
  });
}

void lqs_config_destroy(lqs_config* config) { delete config; }

lqs_status lqs_config_set(lqs_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return fail(LQS_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    liqswarm::apply_setting(config->value, key, value);
    return LQS_OK;
  });
}

lqs_status lqs_config_load_file(lqs_config* config, const char* path) {
  if (!config || !path) return fail(LQS_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    liqswarm::apply_config_file(config->value, path);
    return LQS_OK;
  });
}

lqs_status lqs_config_get(const lqs_config* config, const char* key, char* buf, size_t len,
                          size_t* required) {
  if (!config || !key) return fail(LQS_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    const auto text = liqswarm::get_setting(config->value, key);
    if (required) *required = text.size() + 1;
    if (!buf && required) return LQS_OK;
    if (!buf || len < text.size() + 1) {
      return fail(LQS_ERR_ARGUMENT, "buffer too small for value of " + std::string(key));
    }
    std::memcpy(buf, text.c_str(), text.size() + 1);
    return LQS_OK;
  });
}

lqs_status lqs_config_validate(const lqs_config* config) {
  if (!config) return fail(LQS_ERR_ARGUMENT, "null config");
  return guarded([&] {
    liqswarm::validate(config->value);
    return LQS_OK;
  });
}

size_t lqs_config_key_count(void) { return liqswarm::config_keys().size(); }

const char* lqs_config_key_name(size_t index) {
  const auto& keys = liqswarm::config_keys();
  return index < keys.size() ? keys[index].name.data() : nullptr;
}

const char* lqs_config_key_help(size_t index) {
  const auto& keys = liqswarm::config_keys();
  return index < keys.size() ? keys[index].help.data() : nullptr;
}

lqs_status lqs_run_create(const lqs_config* config, lqs_run** out) {
  if (!config || !out) return fail(LQS_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new lqs_run{liqswarm::execute_run(config->value)};
    return LQS_OK;
  });
}

void lqs_run_destroy(lqs_run* run) { delete run; }

size_t lqs_run_episode_count(const lqs_run* run) { return run ? run->result.records.size() : 0; }

lqs_status lqs_run_episode(const lqs_run* run, size_t index, lqs_episode* out) {
  if (!run || !out) return fail(LQS_ERR_ARGUMENT, "null argument");
  if (index >= run->result.records.size()) return fail(LQS_ERR_ARGUMENT, "episode index out of range");
  const auto& r = run->result.records[index];
  *out = lqs_episode{r.episode, r.total_cleared, r.initial_balance_sum, r.hit_count, r.paired_count};
  return LQS_OK;
}

lqs_status lqs_run_summary(const lqs_run* run, lqs_summary* out) {
  if (!run || !out) return fail(LQS_ERR_ARGUMENT, "null argument");
  fill_summary(run->result.summary, out);
  return LQS_OK;
}

lqs_status lqs_run_write(const lqs_run* run, const char* dir, int overwrite) {
  if (!run) return fail(LQS_ERR_ARGUMENT, "null run");
  return guarded([&] {
    const std::filesystem::path target = dir ? std::filesystem::path(dir) : run->result.config.output_dir;
    liqswarm::write_run(run->result, target, overwrite != 0);
    return LQS_OK;
  });
}

lqs_status lqs_sweep(const lqs_config* base, const char* rules, const char* strategies,
                     const char* seeds, const char* out_dir, int overwrite, int jobs, size_t* failed) {
  if (!base || !out_dir) return fail(LQS_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    std::vector<liqswarm::ClearingRule> rule_list;
    for (const auto& r : split_list(rules)) {
      const auto parsed = liqswarm::parse_clearing_rule(r);
      if (!parsed) throw liqswarm::ConfigError("clearing_rule", "unknown rule '" + r + "'");
      rule_list.push_back(*parsed);
    }
    std::vector<liqswarm::Strategy> strategy_list;
    for (const auto& s : split_list(strategies)) {
      const auto parsed = liqswarm::parse_strategy(s);
      if (!parsed) throw liqswarm::ConfigError("strategy", "unknown strategy '" + s + "'");
      strategy_list.push_back(*parsed);
    }
    std::vector<std::uint64_t> seed_list;
    for (const auto& s : split_list(seeds)) {
      liqswarm::ExperimentConfig scratch;
      liqswarm::apply_setting(scratch, "master_seed", s);
      seed_list.push_back(scratch.master_seed);
    }
    if (rule_list.empty() || strategy_list.empty() || seed_list.empty()) {
      throw liqswarm::ConfigError("", "sweep needs at least one rule, strategy and seed");
    }
    liqswarm::validate(base->value);
    const auto grid = liqswarm::make_sweep_grid(base->value, rule_list, strategy_list, seed_list, out_dir);
    for (const auto& c : grid) liqswarm::validate(c);
    const auto report = liqswarm::run_sweep(grid, out_dir, overwrite != 0, jobs);
    if (failed) *failed = report.failures();
    if (report.failures() > 0) {
      std::string msg = std::to_string(report.failures()) + " of " + std::to_string(grid.size()) + " runs failed";
      for (const auto& e : report.entries) {
        if (!e.ok) msg += "\n  " + e.dir.filename().string() + ": " + e.error;
      }
      return fail(LQS_ERR_PARTIAL, msg);
    }
    return LQS_OK;
  });
}

lqs_status lqs_report(const char* run_dir, int32_t window, double threshold, lqs_summary* out) {
  if (!run_dir) return fail(LQS_ERR_ARGUMENT, "null run directory");
  return guarded([&] {
    const auto summary = liqswarm::report(run_dir, window > 0 ? std::optional<std::int32_t>(window) : std::nullopt,
                                          threshold >= 0.0 ? std::optional<double>(threshold) : std::nullopt);
    if (out) fill_summary(summary, out);
    return LQS_OK;
  });
}

lqs_status lqs_clear(lqs_rule rule, int32_t a_i, int32_t a_j, lqs_trade* out) {
  if (!out) return fail(LQS_ERR_ARGUMENT, "null output pointer");
  return guarded([&] {
    const auto t = liqswarm::clear(to_rule(rule), a_i, a_j);
    *out = lqs_trade{t.offer_i, t.offer_j, t.quantity, t.matched ? 1 : 0};
    return LQS_OK;
  });
}

lqs_status lqs_enumerate_pure_nash(lqs_rule rule, int32_t balance_i, int32_t balance_j,
                                   int32_t* profiles, size_t capacity, size_t* count) {
  if (!count || (capacity > 0 && !profiles)) return fail(LQS_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    const auto ne = liqswarm::enumerate_pure_nash(to_rule(rule), balance_i, balance_j);
    *count = ne.size();
    for (size_t k = 0; k < std::min(capacity, ne.size()); ++k) {
      profiles[2 * k] = ne[k].action_i;
      profiles[2 * k + 1] = ne[k].action_j;
    }
    return LQS_OK;
  });
}

}  // extern "C"
