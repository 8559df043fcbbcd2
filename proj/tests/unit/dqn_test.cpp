#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "bcmec/agents/dqn.hpp"
#include "bcmec/agents/features.hpp"
#include "bcmec/agents/replay_buffer.hpp"
#include "bcmec/errors.hpp"

using namespace bcmec;
using namespace bcmec::agents;
using nn::DenseLayer;
using nn::DenseNet;
using nn::OutputActivation;

namespace {

// Single linear layer with zero weights: Q(s, .) = biases for every s.
DenseNet constant_q(std::vector<double> q, std::size_t inputs = 2) {
  DenseLayer layer{inputs, q.size(), std::vector<double>(inputs * q.size(), 0.0), std::move(q)};
  return DenseNet({layer}, OutputActivation::linear);
}

const std::vector<double> kState{0.3, 0.7};

Experience experience(Rng& rng, std::size_t inputs, std::size_t actions) {
  Experience e;
  for (std::size_t i = 0; i < inputs; ++i) {
    e.state.push_back(rng.uniform());
    e.next_state.push_back(rng.uniform());
  }
  e.action = rng.index(actions);
  e.reward = rng.uniform(-1.0, 2.0);
  e.next_mask.assign(actions, 1);
  e.next_mask[rng.index(actions)] = 0;
  e.terminal = rng.bernoulli(0.1);
  return e;
}

DqnConfig small_config() {
  DqnConfig c;
  c.hidden = {16, 8};
  c.batch_size = 16;
  c.target_sync_period = 10;
  return c;
}

}  // namespace

TEST(MaskedArgmax, LowestIndexWinsTies) {
  const std::vector<double> q{1.0, 3.0, 3.0, 2.0};
  EXPECT_EQ(masked_argmax(q, mdp::ActionMask{1, 1, 1, 1}), 1u);
  EXPECT_EQ(masked_argmax(q, mdp::ActionMask{1, 0, 1, 1}), 2u);
  EXPECT_EQ(masked_argmax(q, mdp::ActionMask{1, 0, 0, 1}), 3u);
  EXPECT_THROW(masked_argmax(q, mdp::ActionMask{0, 0, 0, 0}), InfeasibleAction);
}

TEST(SelectAction, GreedyPicksStrictMaximum) {
  const auto net = constant_q({0.1, 0.9, 0.5, 2.0});
  Rng rng(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(select_action(net, kState, {1, 1, 1, 0}, 0.0, rng), 1u);
}

TEST(SelectAction, SingleFeasibleActionIsForced) {
  const auto net = constant_q({5.0, 0.0, 0.0});
  Rng rng(2);
  for (double eps : {0.0, 0.5, 1.0}) {
    for (int i = 0; i < 50; ++i) EXPECT_EQ(select_action(net, kState, {0, 0, 1}, eps, rng), 2u);
  }
}

TEST(SelectAction, FullExplorationIsUniformOverFeasible) {
  const auto net = constant_q({0, 0, 0, 0, 0, 0});
  const mdp::ActionMask mask{1, 0, 1, 1, 0, 1};
  Rng rng(3);
  const int n = 10000;
  std::vector<int> counts(6, 0);
  for (int i = 0; i < n; ++i) ++counts[select_action(net, kState, mask, 1.0, rng)];
  const double p = 0.25;
  const double sigma = std::sqrt(n * p * (1 - p));
  for (std::size_t a = 0; a < 6; ++a) {
    if (!mask[a]) {
      EXPECT_EQ(counts[a], 0);
    } else {
      EXPECT_NEAR(counts[a], n * p, 3 * sigma);
    }
  }
}

TEST(SelectAction, EmptyMaskThrows) {
  Rng rng(4);
  EXPECT_THROW(select_action(constant_q({1, 2}), kState, {0, 0}, 1.0, rng), InfeasibleAction);
  EXPECT_THROW(select_action(constant_q({1, 2}), kState, {0, 0}, 0.0, rng), InfeasibleAction);
}

TEST(SelectAction, NeverReturnsMaskedAction) {
  DenseNet net({4, 16, 10}, OutputActivation::linear, 9);
  Rng rng(5);
  for (int i = 0; i < 5000; ++i) {
    mdp::ActionMask mask(10, 0);
    for (auto& m : mask) m = rng.bernoulli(0.4);
    mask[rng.index(10)] = 1;
    const std::vector<double> s{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
    EXPECT_TRUE(mask[select_action(net, s, mask, rng.uniform(), rng)]);
  }
}

TEST(DoubleDqnTarget, HandValue) {
  const auto online = constant_q({0.0, 5.0, 1.0});
  const auto target = constant_q({9.0, 2.0, 3.0});
  const mdp::ActionMask all{1, 1, 1};
  EXPECT_NEAR(double_dqn_target(1.0, kState, false, online, target, 0.85, all), 2.7, 1e-15);
  EXPECT_EQ(double_dqn_target(1.0, kState, true, online, target, 0.85, all), 1.0);
  // Masking the online favourite moves the evaluated action.
  EXPECT_NEAR(double_dqn_target(1.0, kState, false, online, target, 0.85, {1, 0, 1}), 1.0 + 0.85 * 3.0, 1e-15);
}

TEST(DoubleDqnTarget, ProbeReportsEvaluatedAction) {
  const auto online = constant_q({0.0, 5.0, 1.0});
  const auto target = constant_q({9.0, 2.0, 3.0});
  std::vector<TargetProbe> seen;
  TargetProbeHook hook = [&](const TargetProbe& p) { seen.push_back(p); };
  double_dqn_target(0.0, kState, false, online, target, 0.85, {1, 1, 1}, &hook);
  double_dqn_target(0.0, kState, true, online, target, 0.85, {1, 1, 1}, &hook);
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_EQ(seen[0].online_argmax, 1u);
  EXPECT_EQ(seen[0].evaluated_action, 1u);
}

TEST(ClassicDqnTarget, HandValues) {
  const auto target = constant_q({1.0, 0.5});
  EXPECT_NEAR(classic_dqn_target(0.0, kState, false, target, 0.85, {1, 1}), 0.85, 1e-15);
  EXPECT_EQ(classic_dqn_target(0.7, kState, true, target, 0.85, {1, 1}), 0.7);
  EXPECT_EQ(classic_dqn_target(0.7, kState, false, target, 0.0, {1, 1}), 0.7);
}

TEST(Targets, CoincideWhenNetworksEqual) {
  Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    DenseNet net({2, 8, 5}, OutputActivation::linear, 100 + i);
    const std::vector<double> s{rng.uniform(), rng.uniform()};
    mdp::ActionMask mask(5, 1);
    mask[rng.index(5)] = 0;
    const double r = rng.uniform(-1, 1);
    EXPECT_EQ(double_dqn_target(r, s, false, net, net, 0.85, mask), classic_dqn_target(r, s, false, net, 0.85, mask));
  }
}

TEST(ReplayBuffer, RingEviction) {
  ReplayBuffer buffer(3);
  for (std::size_t i = 0; i < 5; ++i) {
    Experience e;
    e.action = i;
    buffer.push(e);
    EXPECT_LE(buffer.size(), 3u);
  }
  EXPECT_EQ(buffer.size(), 3u);
  EXPECT_EQ(buffer[0].action, 2u);
  EXPECT_EQ(buffer[1].action, 3u);
  EXPECT_EQ(buffer[2].action, 4u);
  EXPECT_ANY_THROW(ReplayBuffer(0));
}

TEST(ReplayBuffer, SamplesDistinctRetainedEntries) {
  ReplayBuffer buffer(50);
  Rng rng(7);
  for (std::size_t i = 0; i < 173; ++i) {
    Experience e;
    e.action = i;
    buffer.push(e);
  }
  for (int trial = 0; trial < 200; ++trial) {
    const auto idx = buffer.sample_indices(20, rng);
    std::set<std::size_t> seen;
    for (auto i : idx) {
      ASSERT_LT(i, buffer.size());
      EXPECT_GE(buffer[i].action, 123u);
      seen.insert(i);
    }
    EXPECT_EQ(seen.size(), 20u);
  }
}

TEST(ReplayBuffer, SamplingIsUniform) {
  ReplayBuffer buffer(10);
  for (std::size_t i = 0; i < 10; ++i) buffer.push(Experience{});
  Rng rng(8);
  std::vector<int> counts(10, 0);
  const int trials = 20000;
  for (int t = 0; t < trials; ++t)
    for (auto i : buffer.sample_indices(3, rng)) ++counts[i];
  const double p = 0.3;
  const double sigma = std::sqrt(trials * p * (1 - p));
  for (int c : counts) EXPECT_NEAR(c, trials * p, 4 * sigma);
}

TEST(EpsilonSchedule, LinearThenFlat) {
  EpsilonSchedule s{1.0, 0.05, 100};
  EXPECT_EQ(s.value(0), 1.0);
  EXPECT_NEAR(s.value(50), 0.525, 1e-12);
  EXPECT_EQ(s.value(100), 0.05);
  EXPECT_EQ(s.value(100000), 0.05);
  double prev = 2.0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    const double v = s.value(t);
    EXPECT_LE(v, prev);
    EXPECT_GE(v, 0.05);
    EXPECT_LE(v, 1.0);
    prev = v;
  }
}

TEST(FeatureEncoder, Layout) {
  const mdp::ActionSpace space{3, 2, mdp::HashLevels{}, 500.0};
  FeatureEncoder enc(space, mdp::StateScaling{});
  EXPECT_EQ(enc.input_size(), 8u);
  const std::vector<mdp::ServerDecision> partial{{2, 5}};
  const auto v = enc.encode(mdp::SystemState{{0.6, 1.1, 1.6}, {1.0, 2.0}}, 1, partial);
  const std::vector<double> expect{0.0, 0.5, 1.0, 0.5, 1.0, 0.0, 1.0, 0.8};
  ASSERT_EQ(v.size(), expect.size());
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(v[i], expect[i], 1e-12) << i;
}

TEST(DqnAgent, UnderfullBufferIsNoOp) {
  DqnAgent agent(2, 4, small_config(), 1);
  ReplayBuffer buffer(100);
  Rng rng(1);
  for (int i = 0; i < 15; ++i) buffer.push(experience(rng, 2, 4));
  const auto before = agent.online();
  EXPECT_FALSE(agent.train_step(buffer).has_value());
  EXPECT_EQ(agent.online(), before);
  EXPECT_EQ(agent.train_steps(), 0u);
}

TEST(DqnAgent, SameSeedSameLosses) {
  ReplayBuffer buffer(500);
  Rng rng(2);
  for (int i = 0; i < 300; ++i) buffer.push(experience(rng, 2, 4));
  DqnAgent a(2, 4, small_config(), 11), b(2, 4, small_config(), 11);
  for (int i = 0; i < 30; ++i) {
    const auto la = a.train_step(buffer);
    const auto lb = b.train_step(buffer);
    ASSERT_TRUE(la && lb);
    EXPECT_EQ(*la, *lb);
  }
  EXPECT_EQ(a.online(), b.online());
}

TEST(DqnAgent, ZeroResidualLeavesParameters) {
  DqnConfig c = small_config();
  DqnAgent agent(2, 3, c, 3);
  Experience e;
  e.state = kState;
  e.next_state = kState;
  e.action = 1;
  e.reward = agent.online().forward(kState)[1];
  e.next_mask = {1, 1, 1};
  e.terminal = true;
  ReplayBuffer buffer(c.batch_size);
  for (std::size_t i = 0; i < c.batch_size; ++i) buffer.push(e);
  const auto before = agent.online();
  const auto loss = agent.train_step(buffer);
  ASSERT_TRUE(loss.has_value());
  EXPECT_EQ(*loss, 0.0);
  EXPECT_EQ(agent.online(), before);
}

TEST(DqnAgent, FrozenBatchLossDecreases) {
  DqnConfig c = small_config();
  c.adam.learning_rate = 0.001;
  DqnAgent agent(2, 4, c, 4);
  ReplayBuffer buffer(c.batch_size);
  Rng rng(4);
  for (std::size_t i = 0; i < c.batch_size; ++i) {
    auto e = experience(rng, 2, 4);
    e.terminal = true;  // fixed regression targets
    buffer.push(e);
  }
  double previous = 1e300;
  for (int step = 0; step < 50; ++step) {
    const double loss = *agent.train_step(buffer);
    EXPECT_LT(loss, previous) << step;
    previous = loss;
  }
}

TEST(DqnAgent, TargetSyncEveryPeriod) {
  DqnConfig c = small_config();
  DqnAgent agent(2, 4, c, 5);
  ReplayBuffer buffer(200);
  Rng rng(5);
  for (int i = 0; i < 200; ++i) buffer.push(experience(rng, 2, 4));
  for (std::uint64_t step = 1; step <= 3 * c.target_sync_period; ++step) {
    agent.train_step(buffer);
    if (step % c.target_sync_period == 0) {
      EXPECT_EQ(agent.target(), agent.online()) << step;
    } else {
      EXPECT_FALSE(agent.target() == agent.online()) << step;
    }
  }
}

TEST(DqnAgent, CheckpointRoundTrip) {
  DqnConfig c = small_config();
  DqnAgent agent(2, 4, c, 6);
  ReplayBuffer buffer(100);
  Rng rng(6);
  for (int i = 0; i < 100; ++i) buffer.push(experience(rng, 2, 4));
  for (int i = 0; i < 15; ++i) agent.train_step(buffer);
  std::stringstream text;
  agent.save(text, 1234);
  DqnAgent restored(2, 4, c, 99);
  EXPECT_EQ(restored.load(text), 1234u);
  EXPECT_EQ(restored.online(), agent.online());
  EXPECT_EQ(restored.target(), agent.target());
  EXPECT_EQ(restored.train_steps(), agent.train_steps());

  DqnAgent wrong_shape(3, 4, c, 1);
  std::stringstream again;
  agent.save(again, 0);
  EXPECT_ANY_THROW(wrong_shape.load(again));
}

TEST(DqnAgent, DoubleRuleReadsOnlineArgmax) {
  DqnConfig c = small_config();
  DqnAgent agent(2, 4, c, 7);
  ReplayBuffer buffer(300);
  Rng rng(7);
  for (int i = 0; i < 300; ++i) buffer.push(experience(rng, 2, 4));
  std::size_t probes = 0, mismatches = 0;
  agent.set_probe([&](const TargetProbe& p) {
    ++probes;
    const auto q = agent.online().forward(p.next_state);
    if (masked_argmax(q, *p.next_mask) != p.evaluated_action) ++mismatches;
  });
  for (int i = 0; i < 100; ++i) agent.train_step(buffer);
  EXPECT_GT(probes, 1000u);
  EXPECT_EQ(mismatches, 0u);
}
