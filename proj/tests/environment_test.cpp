#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "liqswarm/environment.hpp"

using namespace liqswarm;

namespace {

ExperimentConfig small_config(Strategy strategy, ClearingRule rule, std::int32_t n = 4) {
  ExperimentConfig c;
  c.n_agents = n;
  c.fraction_large = 0.0;
  c.strategy = strategy;
  c.clearing_rule = rule;
  c.episodes = 10;
  c.master_seed = 9;
  return c;
}

bool same(const EpisodeRecord& a, const EpisodeRecord& b) {
  return a.episode == b.episode && a.total_cleared == b.total_cleared &&
         a.initial_balance_sum == b.initial_balance_sum && a.hit_count == b.hit_count &&
         a.paired_count == b.paired_count && a.cohort_liquidity == b.cohort_liquidity &&
         a.cohort_volume == b.cohort_volume;
}

}  // namespace

TEST(Population, SizesAndCaps) {
  ExperimentConfig c;
  c.n_agents = 1300;
  const auto pop = Population::build(c);
  ASSERT_EQ(pop.size(), 1300u);
  int large = 0;
  for (const auto& a : pop.agents()) {
    large += a.size == FirmSize::Large;
    EXPECT_EQ(a.cap, a.size == FirmSize::Large ? 40 : 10);
    EXPECT_TRUE(a.qtable.has_value());
    EXPECT_EQ(a.qtable->max_state(), a.cap);
  }
  EXPECT_EQ(large, 429);
}

TEST(Population, MixedCohortsFollowWeights) {
  ExperimentConfig c;
  c.n_agents = 10;
  c.mixed = true;
  c.mix = {{Strategy::Difference, 0.5}, {Strategy::Greedy, 0.3}, {Strategy::Random, 0.2}};
  const auto pop = Population::build(c);
  std::map<Strategy, int> counts;
  for (const auto& a : pop.agents()) {
    ++counts[a.strategy];
    EXPECT_EQ(a.qtable.has_value(), is_learner(a.strategy));
  }
  EXPECT_EQ(counts[Strategy::Difference], 5);
  EXPECT_EQ(counts[Strategy::Greedy], 3);
  EXPECT_EQ(counts[Strategy::Random], 2);
}

TEST(ResetEpisode, BalancesUniformWithinCap) {
  ExperimentConfig c = small_config(Strategy::Random, ClearingRule::MinFill, 1000);
  auto pop = Population::build(c);
  std::map<Units, int> counts;
  for (std::int64_t e = 1; e <= 20; ++e) {
    reset_episode(pop, c.master_seed, e);
    for (const auto& a : pop.agents()) ++counts[a.balance];
  }
  ASSERT_EQ(counts.size(), 10u);
  EXPECT_EQ(counts.begin()->first, 1);
  EXPECT_EQ(counts.rbegin()->first, 10);
  for (const auto& [v, n] : counts) EXPECT_NEAR(n / 20000.0, 0.1, 0.01) << v;
}

TEST(ResetEpisode, LearningStatePersists) {
  ExperimentConfig c = small_config(Strategy::Difference, ClearingRule::MinFill, 2);
  auto pop = Population::build(c);
  pop[0].qtable->set(3, 2, 4.5);
  pop[0].previous_partner = 1;
  reset_episode(pop, c.master_seed, 1);
  reset_episode(pop, c.master_seed, 2);
  EXPECT_EQ(pop[0].qtable->value(3, 2), 4.5);
  EXPECT_EQ(pop[0].previous_partner, 1);
}

TEST(ResetEpisode, CarryoverKeepsPositiveResidual) {
  ExperimentConfig c = small_config(Strategy::Random, ClearingRule::MinFill, 3);
  auto pop = Population::build(c);
  pop[0].balance = 7;
  pop[1].balance = 0;
  pop[2].balance = 2;
  reset_episode(pop, c.master_seed, 5, true);
  EXPECT_EQ(pop[0].balance, 7);
  EXPECT_GE(pop[1].balance, 1);
  EXPECT_EQ(pop[2].balance, 2);
}

TEST(PairAgents, FourAgentMatchingsEquallyLikely) {
  Rng rng(2024);
  constexpr int kTrials = 100000;
  std::map<std::set<std::int32_t>, int> partner_of_zero;
  std::map<std::int32_t, int> counts;
  for (int t = 0; t < kTrials; ++t) {
    const auto p = pair_agents({0, 1, 2, 3}, rng);
    ASSERT_EQ(p.pairs.size(), 2u);
    ASSERT_FALSE(p.unpaired);
    for (const auto& [a, b] : p.pairs) {
      if (a == 0) ++counts[b];
      if (b == 0) ++counts[a];
    }
  }
  ASSERT_EQ(counts.size(), 3u);
  for (const auto& [partner, n] : counts) EXPECT_NEAR(n / static_cast<double>(kTrials), 1.0 / 3.0, 0.01);
}

TEST(PairAgents, EdgeSizes) {
  Rng rng(1);
  const auto one = pair_agents({5}, rng);
  EXPECT_TRUE(one.pairs.empty());
  EXPECT_EQ(one.unpaired, 5);
  EXPECT_TRUE(pair_agents({}, rng).pairs.empty());

  std::vector<std::int32_t> ids(1300);
  for (std::int32_t i = 0; i < 1300; ++i) ids[static_cast<std::size_t>(i)] = i;
  const auto big = pair_agents(ids, rng);
  ASSERT_EQ(big.pairs.size(), 650u);
  std::set<std::int32_t> seen;
  for (const auto& [a, b] : big.pairs) {
    EXPECT_NE(a, b);
    seen.insert(a);
    seen.insert(b);
  }
  EXPECT_EQ(seen.size(), 1300u);
}

TEST(Market, GreedyOverOfferIsChargedUnderMinFill) {
  Market m(small_config(Strategy::Greedy, ClearingRule::MinFill, 2));
  m.population()[0].balance = 10;
  m.population()[1].balance = 4;
  const auto r = m.step(1, Pairing{{{0, 1}}, std::nullopt});
  EXPECT_EQ(r.total_cleared, 4);
  EXPECT_EQ(r.hit_count, 2);
  EXPECT_EQ(r.paired_count, 2);
  EXPECT_NEAR(r.cohort_liquidity[static_cast<std::size_t>(Strategy::Greedy)], 6.8, 1e-12);
  EXPECT_EQ(r.cohort_volume[static_cast<std::size_t>(Strategy::Greedy)], 8);
  EXPECT_EQ(m.population()[0].balance, 6);
  EXPECT_EQ(m.population()[1].balance, 0);
}

TEST(Market, GreedyChargeDoesNotTouchState) {
  auto with = small_config(Strategy::Greedy, ClearingRule::MinFill, 2);
  auto without = with;
  without.greedy_penalty_rate = 0.0;
  Market a(with), b(without);
  for (std::int64_t e = 1; e <= 50; ++e) {
    const auto ra = a.run_episode(e);
    const auto rb = b.run_episode(e);
    EXPECT_EQ(ra.total_cleared, rb.total_cleared);
    EXPECT_EQ(ra.hit_count, rb.hit_count);
    EXPECT_LE(ra.cohort_liquidity[4], rb.cohort_liquidity[4]);
    EXPECT_EQ(a.population()[0].balance, b.population()[0].balance);
  }
}

TEST(Market, ExactMismatchClearsNothing) {
  Market m(small_config(Strategy::Greedy, ClearingRule::Exact, 2));
  m.population()[0].balance = 3;
  m.population()[1].balance = 5;
  const auto r = m.step(1, Pairing{{{0, 1}}, std::nullopt});
  EXPECT_EQ(r.total_cleared, 0);
  EXPECT_EQ(r.hit_count, 0);
  EXPECT_EQ(r.cohort_liquidity[4], 0.0);
  EXPECT_EQ(m.population()[0].balance, 3);
}

TEST(Market, OutcomeIndependentOfPairOrder) {
  auto c = small_config(Strategy::Difference, ClearingRule::MinFill, 8);
  Market a(c), b(c);
  for (auto* m : {&a, &b}) {
    for (std::int32_t i = 0; i < 8; ++i) m->population()[static_cast<std::size_t>(i)].balance = 1 + i;
  }
  const Pairing forward{{{0, 1}, {2, 3}, {4, 5}, {6, 7}}, std::nullopt};
  const Pairing shuffled{{{7, 6}, {2, 3}, {5, 4}, {1, 0}}, std::nullopt};
  const auto ra = a.step(1, forward);
  const auto rb = b.step(1, shuffled);
  EXPECT_TRUE(same(ra, rb));
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(a.last_steps()[i].offer, b.last_steps()[i].offer);
    EXPECT_EQ(a.last_steps()[i].reward, b.last_steps()[i].reward);
    const auto qa = a.population()[i].qtable->raw();
    const auto qb = b.population()[i].qtable->raw();
    EXPECT_TRUE(std::equal(qa.begin(), qa.end(), qb.begin(), qb.end()));
  }
}

TEST(Market, DifferenceRewardsEqualQuantities) {
  Market m(small_config(Strategy::Difference, ClearingRule::MinFill, 40));
  for (std::int64_t e = 1; e <= 30; ++e) {
    const auto r = m.run_episode(e);
    double sum = 0.0;
    for (const auto& st : m.last_steps()) {
      if (!st.paired) continue;
      ASSERT_TRUE(st.reward);
      EXPECT_EQ(*st.reward, static_cast<double>(st.quantity));
      sum += *st.reward;
    }
    EXPECT_EQ(sum, 2.0 * static_cast<double>(r.total_cleared));
  }
}

TEST(Market, GlobalRewardIsEpisodeTotal) {
  Market m(small_config(Strategy::Global, ClearingRule::MinFill, 20));
  const auto r = m.run_episode(1);
  for (const auto& st : m.last_steps()) {
    if (st.paired) EXPECT_EQ(*st.reward, static_cast<double>(r.total_cleared));
  }
}

TEST(Market, OddPopulationLeavesOneOut) {
  Market m(small_config(Strategy::Random, ClearingRule::MinFill, 5));
  for (std::int64_t e = 1; e <= 20; ++e) {
    const auto r = m.run_episode(e);
    EXPECT_EQ(r.paired_count, 4);
    int idle = 0;
    for (std::size_t i = 0; i < 5; ++i) {
      if (!m.last_steps()[i].paired) {
        ++idle;
        EXPECT_EQ(m.population()[i].previous_partner, -1);
      }
    }
    EXPECT_EQ(idle, 1);
  }
}

TEST(Market, RepeatedPartnerPenalisesLocalReward) {
  auto c = small_config(Strategy::Local, ClearingRule::MinFill, 2);
  c.epsilon = 0.0;
  Market m(c);
  m.population()[0].balance = 1;
  m.population()[1].balance = 1;
  m.step(1, Pairing{{{0, 1}}, std::nullopt});
  EXPECT_DOUBLE_EQ(*m.last_steps()[0].reward, 1.0);
  m.population()[0].balance = 1;
  m.population()[1].balance = 1;
  m.step(2, Pairing{{{1, 0}}, std::nullopt});
  EXPECT_DOUBLE_EQ(*m.last_steps()[0].reward, 0.9);
}

TEST(Market, InvariantViolationOnCorruptBalance) {
  Market m(small_config(Strategy::Random, ClearingRule::MinFill, 2));
  m.population()[0].balance = 11;
  m.population()[1].balance = 3;
  EXPECT_THROW(m.step(1, Pairing{{{0, 1}}, std::nullopt}), InvariantViolation);
}

TEST(RunExperiment, ConservationAndBounds) {
  for (const auto rule : {ClearingRule::Exact, ClearingRule::MinFill}) {
    for (const auto s : kAllStrategies) {
      auto c = small_config(s, rule, 61);
      c.fraction_large = 0.33;
      c.episodes = 40;
      for (const auto& r : run_experiment(c)) {
        EXPECT_GE(r.total_cleared, 0);
        EXPECT_LE(2 * r.total_cleared, r.initial_balance_sum);
        EXPECT_LE(r.hit_count, r.paired_count);
        EXPECT_EQ(r.paired_count, 60);
        EXPECT_EQ(r.cohort_volume[static_cast<std::size_t>(s)], 2 * r.total_cleared);
      }
    }
  }
}

TEST(RunExperiment, DeterministicAcrossThreadCounts) {
  auto c = small_config(Strategy::Difference, ClearingRule::MinFill, 200);
  c.fraction_large = 0.33;
  c.episodes = 50;
  auto threaded = c;
  threaded.threads = 4;
  const auto a = run_experiment(c);
  const auto b = run_experiment(threaded);
  const auto again = run_experiment(c);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_TRUE(same(a[k], b[k]));
    EXPECT_TRUE(same(a[k], again[k]));
  }
  auto other = c;
  other.master_seed = 10;
  const auto d = run_experiment(other);
  bool differs = false;
  for (std::size_t k = 0; k < a.size(); ++k) differs |= !same(a[k], d[k]);
  EXPECT_TRUE(differs);
}

TEST(RunExperiment, NextEpisodeBootstrapAndCarryover) {
  auto c = small_config(Strategy::Difference, ClearingRule::MinFill, 30);
  c.gamma = 0.9;
  c.bootstrap = Bootstrap::NextEpisode;
  c.carryover = true;
  c.episodes = 60;
  const auto records = run_experiment(c);
  ASSERT_EQ(records.size(), 60u);
  for (const auto& r : records) EXPECT_LE(2 * r.total_cleared, r.initial_balance_sum);
}

TEST(RunExperiment, InvalidConfigRejectedBeforeRunning) {
  auto c = small_config(Strategy::Difference, ClearingRule::MinFill);
  c.episodes = -1;
  EXPECT_THROW(run_experiment(c), ConfigError);
}
