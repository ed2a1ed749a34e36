#include "liqswarm/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace liqswarm {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view text) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(key), "expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

double parse_real(std::string_view key, std::string_view text) {
  double v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(key), "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(std::string(key), "expected true or false, got '" + std::string(text) + "'");
}

// Negative integers for count-like fields are parsed as signed and range
// checked in validate(), so "episodes = -1" reports a range error.
std::vector<CohortShare> parse_mix(std::string_view key, std::string_view text) {
  std::vector<CohortShare> shares;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw ConfigError(std::string(key), "expected strategy:weight, got '" + std::string(item) + "'");
    }
    const auto name = trim(item.substr(0, colon));
    const auto strategy = parse_strategy(name);
    if (!strategy) throw ConfigError(std::string(key), "unknown strategy '" + std::string(name) + "'");
    shares.push_back({*strategy, parse_real(key, trim(item.substr(colon + 1)))});
  }
  return shares;
}

std::string format_mix(const std::vector<CohortShare>& mix) {
  std::string out;
  for (const auto& share : mix) {
    if (!out.empty()) out += ',';
    out += std::string(to_string(share.strategy)) + ':' + format_double(share.weight);
  }
  return out;
}

struct KeyHandler {
  ConfigKey key;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

const std::vector<KeyHandler>& handlers() {
  using P = Provenance;
  static const std::vector<KeyHandler> table = {
      {{"n_agents", "number of agents", P::Model},
       [](auto& c, auto v) { c.n_agents = parse_int<std::int32_t>("n_agents", v); },
       [](const auto& c) { return std::to_string(c.n_agents); }},
      {{"fraction_large", "fraction of large firms", P::Model},
       [](auto& c, auto v) { c.fraction_large = parse_real("fraction_large", v); },
       [](const auto& c) { return format_double(c.fraction_large); }},
      {{"cap_small", "balance cap for small firms", P::Model},
       [](auto& c, auto v) { c.cap_small = parse_int<Units>("cap_small", v); },
       [](const auto& c) { return std::to_string(c.cap_small); }},
      {{"cap_large", "balance cap for large firms", P::Model},
       [](auto& c, auto v) { c.cap_large = parse_int<Units>("cap_large", v); },
       [](const auto& c) { return std::to_string(c.cap_large); }},
      {{"episodes", "number of episodes", P::Model},
       [](auto& c, auto v) { c.episodes = parse_int<std::int64_t>("episodes", v); },
       [](const auto& c) { return std::to_string(c.episodes); }},
      {{"clearing_rule", "exact or minfill", P::Run},
       [](auto& c, auto v) {
         const auto rule = parse_clearing_rule(v);
         if (!rule) throw ConfigError("clearing_rule", "expected exact or minfill, got '" + std::string(v) + "'");
         c.clearing_rule = *rule;
       },
       [](const auto& c) { return std::string(to_string(c.clearing_rule)); }},
      {{"strategy", "diff, local, global, random, greedy or mixed", P::Run},
       [](auto& c, auto v) {
         if (v == "mixed") {
           c.mixed = true;
           return;
         }
         const auto s = parse_strategy(v);
         if (!s) throw ConfigError("strategy", "unknown strategy '" + std::string(v) + "'");
         c.strategy = *s;
         c.mixed = false;
       },
       [](const auto& c) { return c.mixed ? std::string("mixed") : std::string(to_string(c.strategy)); }},
      {{"mix", "cohort weights for strategy=mixed, e.g. diff:0.5,greedy:0.5", P::Run},
       [](auto& c, auto v) { c.mix = parse_mix("mix", v); },
       [](const auto& c) { return format_mix(c.mix); }},
      {{"alpha", "learning rate", P::Model},
       [](auto& c, auto v) { c.alpha = parse_real("alpha", v); },
       [](const auto& c) { return format_double(c.alpha); }},
      {{"gamma", "discount factor", P::Design},
       [](auto& c, auto v) { c.gamma = parse_real("gamma", v); },
       [](const auto& c) { return format_double(c.gamma); }},
      {{"epsilon", "exploration probability", P::Model},
       [](auto& c, auto v) { c.epsilon = parse_real("epsilon", v); },
       [](const auto& c) { return format_double(c.epsilon); }},
      {{"repeat_penalty", "local-reward penalty for repeating a partner", P::Model},
       [](auto& c, auto v) { c.repeat_penalty = parse_real("repeat_penalty", v); },
       [](const auto& c) { return format_double(c.repeat_penalty); }},
      {{"greedy_penalty_rate", "MinFill over-offer charge on greedy liquidity", P::Model},
       [](auto& c, auto v) { c.greedy_penalty_rate = parse_real("greedy_penalty_rate", v); },
       [](const auto& c) { return format_double(c.greedy_penalty_rate); }},
      {{"smoothing_window", "trailing moving-average window (episodes)", P::Design},
       [](auto& c, auto v) { c.smoothing_window = parse_int<std::int32_t>("smoothing_window", v); },
       [](const auto& c) { return std::to_string(c.smoothing_window); }},
      {{"hit_threshold", "smoothed hit-rate threshold for episodes_to_threshold", P::Design},
       [](auto& c, auto v) { c.hit_threshold = parse_real("hit_threshold", v); },
       [](const auto& c) { return format_double(c.hit_threshold); }},
      {{"carryover", "keep residual balances across episodes", P::Design},
       [](auto& c, auto v) { c.carryover = parse_bool("carryover", v); },
       [](const auto& c) { return std::string(c.carryover ? "true" : "false"); }},
      {{"bootstrap", "Q-update successor: residual or next_episode", P::Design},
       [](auto& c, auto v) {
         if (v == "residual") c.bootstrap = Bootstrap::Residual;
         else if (v == "next_episode") c.bootstrap = Bootstrap::NextEpisode;
         else throw ConfigError("bootstrap", "expected residual or next_episode, got '" + std::string(v) + "'");
       },
       [](const auto& c) { return std::string(to_string(c.bootstrap)); }},
      {{"master_seed", "root of the random stream hierarchy", P::Run},
       [](auto& c, auto v) { c.master_seed = parse_int<std::uint64_t>("master_seed", v); },
       [](const auto& c) { return std::to_string(c.master_seed); }},
      {{"strict_reproducibility", "require an explicit master_seed", P::Run},
       [](auto& c, auto v) { c.strict_reproducibility = parse_bool("strict_reproducibility", v); },
       [](const auto& c) { return std::string(c.strict_reproducibility ? "true" : "false"); }},
      {{"threads", "worker threads inside one run", P::Run},
       [](auto& c, auto v) { c.threads = parse_int<std::int32_t>("threads", v); },
       [](const auto& c) { return std::to_string(c.threads); }},
      {{"export_qtables", "write per-cohort Q-table snapshots", P::Run},
       [](auto& c, auto v) { c.export_qtables = parse_bool("export_qtables", v); },
       [](const auto& c) { return std::string(c.export_qtables ? "true" : "false"); }},
      {{"output_dir", "run output directory", P::Run},
       [](auto& c, auto v) { c.output_dir = std::filesystem::path(std::string(v)); },
       [](const auto& c) { return c.output_dir.string(); }},
  };
  return table;
}

const KeyHandler& handler_for(std::string_view key) {
  for (const auto& h : handlers()) {
    if (h.key.name == key) return h;
  }
  throw ConfigError(std::string(key), "unknown configuration key");
}

}  // namespace

std::string_view to_string(Bootstrap b) {
  return b == Bootstrap::Residual ? "residual" : "next_episode";
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Model: return "model";
    case Provenance::Design: return "design";
    case Provenance::Run: return "run";
  }
  return "unknown";
}

std::string ExperimentConfig::run_label() const {
  return std::string(to_string(clearing_rule)) + "_" +
         (mixed ? std::string("mixed") : std::string(to_string(strategy)));
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& h : handlers()) out.push_back(h.key);
    return out;
  }();
  return keys;
}

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value) {
  handler_for(key).set(config, trim(value));
  config.explicit_keys.insert(std::string(key));
}

std::string get_setting(const ExperimentConfig& config, std::string_view key) {
  return handler_for(key).get(config);
}

void apply_config_text(ExperimentConfig& config, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected key = value");
    }
    apply_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(config, buf.str());
}

void validate(const ExperimentConfig& c) {
  if (c.n_agents < 1) throw ConfigError("n_agents", "must be at least 1");
  if (!(c.fraction_large >= 0.0 && c.fraction_large <= 1.0)) {
    throw ConfigError("fraction_large", "must be in [0, 1]");
  }
  if (c.cap_small < 1) throw ConfigError("cap_small", "must be at least 1");
  if (c.cap_large < 1) throw ConfigError("cap_large", "must be at least 1");
  if (c.episodes < 0) throw ConfigError("episodes", "must be non-negative");
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) throw ConfigError("alpha", "must be in (0, 1]");
  if (!(c.gamma >= 0.0 && c.gamma < 1.0)) throw ConfigError("gamma", "must be in [0, 1)");
  if (!(c.epsilon >= 0.0 && c.epsilon <= 1.0)) throw ConfigError("epsilon", "must be in [0, 1]");
  if (!(c.repeat_penalty >= 0.0)) throw ConfigError("repeat_penalty", "must be non-negative");
  if (!(c.greedy_penalty_rate >= 0.0)) throw ConfigError("greedy_penalty_rate", "must be non-negative");
  if (c.smoothing_window < 1) throw ConfigError("smoothing_window", "must be at least 1");
  if (!(c.hit_threshold >= 0.0 && c.hit_threshold <= 1.0)) {
    throw ConfigError("hit_threshold", "must be in [0, 1]");
  }
  if (c.threads < 1) throw ConfigError("threads", "must be at least 1");
  if (c.mixed) {
    if (c.mix.empty()) throw ConfigError("mix", "strategy=mixed requires cohort weights");
    double total = 0.0;
    for (const auto& share : c.mix) {
      if (!(share.weight >= 0.0)) throw ConfigError("mix", "weights must be non-negative");
      total += share.weight;
    }
    if (!(total > 0.0)) throw ConfigError("mix", "weights must not all be zero");
  }
  if (c.strict_reproducibility && !c.explicit_keys.contains("master_seed")) {
    throw ConfigError("master_seed", "required when strict_reproducibility is set");
  }
}

ExperimentConfig load_config(std::string_view text) {
  ExperimentConfig config;
  apply_config_text(config, text);
  validate(config);
  return config;
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

}  // namespace liqswarm
