#include <gtest/gtest.h>

#include <sstream>

#include "bcmec/errors.hpp"
#include "bcmec/harness/experiment.hpp"
#include "bcmec/mec/config.hpp"

using namespace bcmec;

TEST(EnvConfig, DefaultsValidate) {
  mec::EnvConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.effective_reputation_window(), c.horizon);
  EXPECT_EQ(c.action_space().subactions(), 36u);
}

TEST(EnvConfig, FewerUesThanServersRejected) {
  mec::EnvConfig c;
  c.num_ues = 2;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(EnvConfig, ParsesSections) {
  std::istringstream in(R"(; scenario
[env]
num_ues = 10
num_servers = 4
server_capacity_ghz = 5, 4, 3, 2
w_latency = 0.5

[mining]
block_size_kb = 8
reward_per_kb = 1.5

[gas]
usd_per_ether = 200
)");
  const auto c = mec::parse_env_config(in);
  EXPECT_EQ(c.num_ues, 10u);
  EXPECT_EQ(c.num_servers, 4u);
  EXPECT_EQ(c.server_capacity_ghz, (std::vector<double>{5, 4, 3, 2}));
  EXPECT_EQ(c.capacity_of(3), 2.0);
  EXPECT_EQ(c.reward_weights.w_latency, 0.5);
  EXPECT_EQ(c.mining.block_size_kb, 8.0);
  EXPECT_EQ(c.mining.block_reward(), 42.0);
  EXPECT_EQ(c.gas.usd_per_ether, 200.0);
}

TEST(EnvConfig, UnknownKeyIsError) {
  std::istringstream in("[env]\nnum_uess = 3\n");
  EXPECT_THROW(mec::parse_env_config(in), ConfigError);
}

TEST(EnvConfig, BadNumberIsError) {
  std::istringstream in("[env]\nprice_unit = cheap\n");
  EXPECT_THROW(mec::parse_env_config(in), ConfigError);
}

TEST(EnvConfig, WriteParseRoundTrip) {
  mec::EnvConfig c;
  c.num_ues = 7;
  c.price_unit = 0.1 + 0.2;
  c.hash_levels.levels = {0, 25, 50};
  c.mining.eta = 1.0 / 3.0;
  std::stringstream text;
  mec::write_env_config(text, c);
  const auto back = mec::parse_env_config(text);
  std::stringstream again;
  mec::write_env_config(again, back);
  EXPECT_EQ(text.str(), again.str());
  EXPECT_EQ(back.price_unit, c.price_unit);
  EXPECT_EQ(back.mining.eta, c.mining.eta);
}

TEST(ExperimentConfig, ParsesAllSections) {
  std::istringstream in(R"([env]
num_ues = 5
[experiment]
schemes = double_dqn, tabular_q, ga
seeds = 4, 5
total_timeslots = 100
disable_user_selection = true
[agent]
hidden = 16, 8
learning_rate = 0.001
output_activation = logistic
[tabular]
alpha = 0.01
[ga]
population = 20
)");
  const auto c = harness::parse_experiment_config(in);
  EXPECT_EQ(c.env.num_ues, 5u);
  EXPECT_EQ(c.schemes.size(), 3u);
  EXPECT_EQ(c.schemes[2], harness::Scheme::ga);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{4, 5}));
  EXPECT_EQ(c.total_timeslots, 100u);
  EXPECT_TRUE(c.ablation.disable_user_selection);
  EXPECT_FALSE(c.ablation.disable_resource_allocation);
  EXPECT_EQ(c.dqn.hidden, (std::vector<std::size_t>{16, 8}));
  EXPECT_EQ(c.dqn.adam.learning_rate, 0.001);
  EXPECT_EQ(c.dqn.output, nn::OutputActivation::logistic);
  EXPECT_EQ(c.tabular.alpha, 0.01);
  EXPECT_EQ(c.ga.population, 20u);
}

TEST(ExperimentConfig, RejectsInvalid) {
  std::istringstream no_seeds("[experiment]\nseeds =\n");
  EXPECT_THROW(harness::parse_experiment_config(no_seeds), ConfigError);
  std::istringstream bad_scheme("[experiment]\nschemes = sarsa\n");
  EXPECT_THROW(harness::parse_experiment_config(bad_scheme), ConfigError);
  std::istringstream bad_section("[optimizer]\nlr = 1\n");
  EXPECT_THROW(harness::parse_experiment_config(bad_section), ConfigError);
  std::istringstream bad_gamma("[agent]\ngamma = 1.0\n");
  EXPECT_THROW(harness::parse_experiment_config(bad_gamma), ConfigError);
}

TEST(ExperimentConfig, HashTracksContent) {
  harness::ExperimentConfig a, b;
  EXPECT_EQ(harness::config_hash(a), harness::config_hash(b));
  EXPECT_EQ(harness::config_hash(a).size(), 16u);
  b.env.mining.block_size_kb = 6.0;
  EXPECT_NE(harness::config_hash(a), harness::config_hash(b));
}

TEST(ExperimentConfig, WriteParseRoundTrip) {
  harness::ExperimentConfig c;
  c.schemes = {harness::Scheme::classic_dqn, harness::Scheme::random};
  c.seeds = {9};
  c.ablation.disable_resource_allocation = true;
  std::stringstream text;
  harness::write_experiment_config(text, c);
  const auto back = harness::parse_experiment_config(text);
  EXPECT_EQ(harness::config_hash(back), harness::config_hash(c));
}

TEST(ExperimentConfig, EpisodesFromHorizon) {
  harness::ExperimentConfig c;
  EXPECT_EQ(c.episodes(), 10u);
  c.total_timeslots = 201;
  EXPECT_EQ(c.episodes(), 2u);
  c.total_timeslots = 2001;
  EXPECT_EQ(c.episodes(), 11u);
}
