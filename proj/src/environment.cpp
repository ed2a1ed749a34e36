#include "liqswarm/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "parallel.hpp"

namespace liqswarm {

namespace {

std::size_t cohort_index(Strategy s) { return static_cast<std::size_t>(s); }

// Largest-remainder apportionment of n agents over the mix weights.
std::vector<Strategy> apportion(const std::vector<CohortShare>& mix, std::int32_t n) {
  double total = 0.0;
  for (const auto& share : mix) total += share.weight;
  std::vector<std::int32_t> counts(mix.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::int32_t assigned = 0;
  for (std::size_t k = 0; k < mix.size(); ++k) {
    const double exact = n * mix[k].weight / total;
    counts[k] = static_cast<std::int32_t>(std::floor(exact));
    assigned += counts[k];
    remainders.emplace_back(exact - counts[k], k);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < n; ++r, ++assigned) ++counts[remainders[r % remainders.size()].second];

  std::vector<Strategy> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < mix.size(); ++k) labels.insert(labels.end(), counts[k], mix[k].strategy);
  return labels;
}

void shuffle(std::vector<Strategy>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

}  // namespace

Population Population::build(const ExperimentConfig& config) {
  const auto n = config.n_agents;
  const auto n_large = static_cast<std::int32_t>(std::lround(n * config.fraction_large));

  std::vector<Strategy> labels;
  if (config.mixed) {
    labels = apportion(config.mix, n);
    auto rng = make_stream(config.master_seed, Stream::Assignment, {});
    shuffle(labels, rng);
  } else {
    labels.assign(static_cast<std::size_t>(n), config.strategy);
  }

  Population pop;
  pop.agents_.reserve(static_cast<std::size_t>(n));
  for (std::int32_t id = 0; id < n; ++id) {
    AgentState agent;
    agent.id = id;
    agent.size = id < n_large ? FirmSize::Large : FirmSize::Small;
    agent.cap = agent.size == FirmSize::Large ? config.cap_large : config.cap_small;
    agent.strategy = labels[static_cast<std::size_t>(id)];
    if (is_learner(agent.strategy)) agent.qtable.emplace(agent.cap);
    pop.agents_.push_back(std::move(agent));
  }
  return pop;
}

void reset_episode(Population& population, std::uint64_t master_seed, std::int64_t episode,
                   bool carryover) {
  for (auto& agent : population.agents()) {
    if (carryover && agent.balance > 0) continue;
    auto rng = make_stream(master_seed, Stream::Balance,
                           {static_cast<std::uint64_t>(episode), static_cast<std::uint64_t>(agent.id)});
    agent.balance = static_cast<Units>(rng.between(1, agent.cap));
  }
}

Pairing pair_agents(std::vector<std::int32_t> eligible, Rng& rng) {
  for (std::size_t i = eligible.size(); i > 1; --i) std::swap(eligible[i - 1], eligible[rng.below(i)]);
  Pairing pairing;
  pairing.pairs.reserve(eligible.size() / 2);
  for (std::size_t k = 0; k + 1 < eligible.size(); k += 2) {
    pairing.pairs.emplace_back(eligible[k], eligible[k + 1]);
  }
  if (eligible.size() % 2 == 1) pairing.unpaired = eligible.back();
  return pairing;
}

Market::Market(const ExperimentConfig& config)
    : config_(config), population_(Population::build(config)), steps_(population_.size()) {}

void Market::settle_pending() {
  const auto params = config_.learner();
  for (auto& agent : population_.agents()) {
    if (!agent.pending) continue;
    const auto& p = *agent.pending;
    q_update(*agent.qtable, p.state, p.action, p.reward, agent.balance, params);
    agent.pending.reset();
  }
}

EpisodeRecord Market::run_episode(std::int64_t episode) {
  reset_episode(population_, config_.master_seed, episode, config_.carryover);
  if (config_.bootstrap == Bootstrap::NextEpisode) settle_pending();

  std::vector<std::int32_t> eligible;
  eligible.reserve(population_.size());
  for (const auto& agent : population_.agents()) {
    if (agent.balance >= 1) eligible.push_back(agent.id);
  }
  auto rng = make_stream(config_.master_seed, Stream::Pairing, {static_cast<std::uint64_t>(episode)});
  return step(episode, pair_agents(std::move(eligible), rng));
}

EpisodeRecord Market::step(std::int64_t episode, const Pairing& pairing) {
  auto agents = population_.agents();
  const auto params = config_.learner();
  const auto rule = config_.clearing_rule;
  const auto& pairs = pairing.pairs;

  EpisodeRecord record;
  record.episode = episode;
  for (const auto& agent : agents) {
    if (agent.balance < 0 || agent.balance > agent.cap) {
      throw InvariantViolation("agent " + std::to_string(agent.id) + " balance outside [0, cap]");
    }
    record.initial_balance_sum += agent.balance;
  }
  std::fill(steps_.begin(), steps_.end(), AgentStep{});

  // Phase 1: every paired agent commits an offer from its own stream.
  auto commit = [&](std::int32_t id, std::int32_t partner) {
    auto& agent = agents[static_cast<std::size_t>(id)];
    auto& st = steps_[static_cast<std::size_t>(id)];
    st.paired = true;
    st.partner = partner;
    st.start_balance = agent.balance;
    auto rng = make_stream(config_.master_seed, Stream::Action,
                           {static_cast<std::uint64_t>(episode), static_cast<std::uint64_t>(id)});
    std::optional<Units> offer;
    switch (agent.strategy) {
      case Strategy::Random: offer = random_policy(agent.balance, rng); break;
      case Strategy::Greedy: offer = greedy_policy(agent.balance); break;
      default:
        if (auto choice = select_action(*agent.qtable, agent.balance, params, rng)) {
          offer = choice->offer;
          st.explored = choice->explored;
        }
    }
    if (!offer) throw InvariantViolation("dormant agent " + std::to_string(id) + " was paired");
    st.offer = *offer;
  };
  detail::parallel_for(pairs.size(), config_.threads, [&](std::size_t k) {
    commit(pairs[k].first, pairs[k].second);
    commit(pairs[k].second, pairs[k].first);
  });

  // Phase 2: clear every pair.
  std::vector<Units> cleared(pairs.size());
  detail::parallel_for(pairs.size(), config_.threads, [&](std::size_t k) {
    const auto& [i, j] = pairs[k];
    cleared[k] = clear(rule, steps_[static_cast<std::size_t>(i)].offer,
                       steps_[static_cast<std::size_t>(j)].offer).quantity;
  });
  for (const Units q : cleared) record.total_cleared += q;

  // Phase 3: balances, rewards and updates; each agent writes only itself.
  auto settle = [&](std::int32_t id, std::int32_t partner, Units q) {
    auto& agent = agents[static_cast<std::size_t>(id)];
    auto& st = steps_[static_cast<std::size_t>(id)];
    const Units partner_offer = steps_[static_cast<std::size_t>(partner)].offer;
    st.quantity = q;
    const bool repeated = agent.previous_partner == partner;
    agent.previous_partner = partner;
    const Units s = agent.balance;
    agent.balance -= q;
    if (agent.balance < 0) throw InvariantViolation("negative balance for agent " + std::to_string(id));
    if (!is_learner(agent.strategy)) return;

    const RewardContext ctx{TradeOutcome{st.offer, partner_offer, q, q > 0}, st.offer,
                            record.total_cleared, repeated};
    const double r = reward_for(reward_mode(agent.strategy), ctx, rule, config_.repeat_penalty);
    st.reward = r;
    if (config_.bootstrap == Bootstrap::Residual) {
      q_update(*agent.qtable, s, st.offer, r, agent.balance, params);
    } else {
      agent.pending = PendingUpdate{s, st.offer, r};
    }
  };
  detail::parallel_for(pairs.size(), config_.threads, [&](std::size_t k) {
    const auto& [i, j] = pairs[k];
    settle(i, j, cleared[k]);
    settle(j, i, cleared[k]);
  });

  // Aggregation in agent-id order keeps floating sums independent of the
  // pairing order and the thread count.
  for (auto& agent : agents) {
    const auto& st = steps_[static_cast<std::size_t>(agent.id)];
    if (!st.paired) {
      agent.previous_partner = -1;
      continue;
    }
    ++record.paired_count;
    if (st.quantity > 0) ++record.hit_count;
    double recorded = st.quantity;
    if (agent.strategy == Strategy::Greedy && rule == ClearingRule::MinFill) {
      recorded -= greedy_liquidity_penalty(st.offer, steps_[static_cast<std::size_t>(st.partner)].offer,
                                           config_.greedy_penalty_rate);
    }
    record.cohort_liquidity[cohort_index(agent.strategy)] += recorded;
    record.cohort_volume[cohort_index(agent.strategy)] += st.quantity;
  }

  if (record.hit_count > record.paired_count) throw InvariantViolation("hit count exceeds paired count");
  if (record.total_cleared > record.initial_balance_sum) {
    throw InvariantViolation("cleared volume exceeds initial balances");
  }
  return record;
}

std::vector<EpisodeRecord> run_experiment(const ExperimentConfig& config) {
  validate(config);
  Market market(config);
  std::vector<EpisodeRecord> records;
  records.reserve(static_cast<std::size_t>(config.episodes));
  for (std::int64_t e = 1; e <= config.episodes; ++e) records.push_back(market.run_episode(e));
  return records;
}

}  // namespace liqswarm
