#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "liqswarm/liqswarm.h"

namespace fs = std::filesystem;

namespace {

struct ConfigHandle {
  lqs_config* ptr = nullptr;
  ConfigHandle() { EXPECT_EQ(lqs_config_create(&ptr), LQS_OK); }
  ~ConfigHandle() { lqs_config_destroy(ptr); }
};

std::string get(const lqs_config* cfg, const char* key) {
  size_t need = 0;
  EXPECT_EQ(lqs_config_get(cfg, key, nullptr, 0, &need), LQS_OK);
  std::string buf(need, '\0');
  EXPECT_EQ(lqs_config_get(cfg, key, buf.data(), buf.size(), &need), LQS_OK);
  buf.resize(need - 1);
  return buf;
}

}  // namespace

TEST(CApi, VersionAndKeys) {
  EXPECT_STREQ(lqs_version(), "1.0.0");
  ASSERT_GT(lqs_config_key_count(), 10u);
  bool found = false;
  for (size_t i = 0; i < lqs_config_key_count(); ++i) {
    found |= std::strcmp(lqs_config_key_name(i), "epsilon") == 0;
    EXPECT_GT(std::strlen(lqs_config_key_help(i)), 0u);
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(lqs_config_key_name(lqs_config_key_count()), nullptr);
}

TEST(CApi, ConfigSetGetAndErrors) {
  ConfigHandle cfg;
  EXPECT_EQ(get(cfg.ptr, "epsilon"), "0.2");
  EXPECT_EQ(lqs_config_set(cfg.ptr, "epsilon", "0.05"), LQS_OK);
  EXPECT_EQ(get(cfg.ptr, "epsilon"), "0.05");

  EXPECT_EQ(lqs_config_set(cfg.ptr, "epsilon", "lots"), LQS_ERR_CONFIG);
  EXPECT_NE(std::string(lqs_last_error()).find("epsilon"), std::string::npos);
  EXPECT_EQ(lqs_config_set(cfg.ptr, "bogus", "1"), LQS_ERR_CONFIG);
  EXPECT_EQ(lqs_config_set(nullptr, "epsilon", "1"), LQS_ERR_ARGUMENT);

  char tiny[2];
  size_t need = 0;
  EXPECT_EQ(lqs_config_get(cfg.ptr, "epsilon", tiny, sizeof tiny, &need), LQS_ERR_ARGUMENT);
  EXPECT_EQ(need, 5u);

  EXPECT_EQ(lqs_config_set(cfg.ptr, "episodes", "-1"), LQS_OK);
  EXPECT_EQ(lqs_config_validate(cfg.ptr), LQS_ERR_CONFIG);
  EXPECT_NE(std::string(lqs_last_error()).find("episodes"), std::string::npos);
  lqs_run* run = nullptr;
  EXPECT_EQ(lqs_run_create(cfg.ptr, &run), LQS_ERR_CONFIG);
  EXPECT_EQ(run, nullptr);
}

TEST(CApi, CloneIsIndependent) {
  ConfigHandle cfg;
  lqs_config* copy = nullptr;
  ASSERT_EQ(lqs_config_clone(cfg.ptr, &copy), LQS_OK);
  lqs_config_set(copy, "n_agents", "7");
  EXPECT_EQ(get(cfg.ptr, "n_agents"), "1300");
  EXPECT_EQ(get(copy, "n_agents"), "7");
  lqs_config_destroy(copy);
}

TEST(CApi, StageGame) {
  lqs_trade t{};
  ASSERT_EQ(lqs_clear(LQS_RULE_MINFILL, 7, 3, &t), LQS_OK);
  EXPECT_EQ(t.quantity, 3);
  EXPECT_EQ(t.matched, 1);
  ASSERT_EQ(lqs_clear(LQS_RULE_EXACT, 5, 4, &t), LQS_OK);
  EXPECT_EQ(t.quantity, 0);
  EXPECT_EQ(t.matched, 0);
  EXPECT_EQ(lqs_clear(LQS_RULE_EXACT, -1, 4, &t), LQS_ERR_ARGUMENT);

  size_t count = 0;
  ASSERT_EQ(lqs_enumerate_pure_nash(LQS_RULE_EXACT, 2, 3, nullptr, 0, &count), LQS_OK);
  ASSERT_EQ(count, 4u);
  std::vector<int32_t> profiles(2 * count);
  ASSERT_EQ(lqs_enumerate_pure_nash(LQS_RULE_EXACT, 2, 3, profiles.data(), count, &count), LQS_OK);
  EXPECT_EQ(profiles, (std::vector<int32_t>{0, 0, 0, 3, 1, 1, 2, 2}));
}

TEST(CApi, RunLifecycleAndWrite) {
  ConfigHandle cfg;
  lqs_config_set(cfg.ptr, "n_agents", "10");
  lqs_config_set(cfg.ptr, "episodes", "12");
  lqs_config_set(cfg.ptr, "master_seed", "5");
  lqs_run* run = nullptr;
  ASSERT_EQ(lqs_run_create(cfg.ptr, &run), LQS_OK);
  ASSERT_EQ(lqs_run_episode_count(run), 12u);
  lqs_episode ep{};
  ASSERT_EQ(lqs_run_episode(run, 0, &ep), LQS_OK);
  EXPECT_EQ(ep.episode, 1);
  EXPECT_EQ(ep.paired_count, 10);
  EXPECT_EQ(lqs_run_episode(run, 12, &ep), LQS_ERR_ARGUMENT);
  lqs_summary s{};
  ASSERT_EQ(lqs_run_summary(run, &s), LQS_OK);
  EXPECT_GE(s.total_liquidity, 0.0);

  const auto dir = fs::temp_directory_path() / "liqswarm_capi_run";
  fs::remove_all(dir);
  EXPECT_EQ(lqs_run_write(run, dir.c_str(), 0), LQS_OK);
  EXPECT_EQ(lqs_run_write(run, dir.c_str(), 0), LQS_ERR_EXISTS);
  EXPECT_EQ(lqs_run_write(run, dir.c_str(), 1), LQS_OK);
  EXPECT_EQ(lqs_run_write(run, nullptr, 0), LQS_ERR_RUNTIME);

  lqs_summary r{};
  ASSERT_EQ(lqs_report(dir.c_str(), 0, -1.0, &r), LQS_OK);
  EXPECT_EQ(r.total_liquidity, s.total_liquidity);
  EXPECT_EQ(r.episodes_to_threshold, s.episodes_to_threshold);
  EXPECT_EQ(lqs_report((dir / "nope").c_str(), 0, -1.0, &r), LQS_ERR_RUNTIME);
  fs::remove_all(dir);
  lqs_run_destroy(run);
  lqs_run_destroy(nullptr);
}

TEST(CApi, SweepReportsPartialFailure) {
  ConfigHandle cfg;
  lqs_config_set(cfg.ptr, "n_agents", "6");
  lqs_config_set(cfg.ptr, "episodes", "3");
  const auto dir = fs::temp_directory_path() / "liqswarm_capi_sweep";
  fs::remove_all(dir);
  size_t failed = 99;
  ASSERT_EQ(lqs_sweep(cfg.ptr, "exact,minfill", "diff,greedy", "1", dir.c_str(), 0, 1, &failed), LQS_OK);
  EXPECT_EQ(failed, 0u);
  EXPECT_TRUE(fs::exists(dir / "exact_diff_s1" / "run.meta"));
  EXPECT_EQ(lqs_sweep(cfg.ptr, "exact", "diff", "1,2", dir.c_str(), 0, 1, &failed), LQS_ERR_PARTIAL);
  EXPECT_EQ(failed, 1u);
  EXPECT_EQ(lqs_sweep(cfg.ptr, "sideways", "diff", "1", dir.c_str(), 0, 1, &failed), LQS_ERR_CONFIG);
  fs::remove_all(dir);
}
