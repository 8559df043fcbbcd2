#include <gtest/gtest.h>

#include <limits>

#include "bcmec/agents/genetic.hpp"
#include "bcmec/mec/environment.hpp"

using namespace bcmec;
using namespace bcmec::agents;
using mdp::ActionSpace;
using mdp::JointAction;

namespace {

double brute_force_best(const ActionSpace& space, const UtilityOracle& utility) {
  double best = -std::numeric_limits<double>::infinity();
  const std::size_t n = space.subactions();
  std::vector<std::size_t> digits(space.num_servers, 0);
  while (true) {
    JointAction a;
    for (auto d : digits) a.decisions.push_back(space.decode(d));
    if (!mdp::find_violation(space, a)) best = std::max(best, utility(a));
    std::size_t k = 0;
    while (k < digits.size() && ++digits[k] == n) digits[k++] = 0;
    if (k == digits.size()) break;
  }
  return best;
}

}  // namespace

TEST(Repair, ProducesFeasibleActions) {
  Rng rng(1);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t m = 1 + rng.index(5);
    const ActionSpace space{m + rng.index(3), m, mdp::HashLevels{}, 150.0 + rng.uniform(0, 300)};
    JointAction a;
    for (std::size_t k = 0; k < m; ++k) a.decisions.push_back({rng.index(space.num_ues + 2), rng.index(8)});
    const auto fixed = repair(space, a, rng);
    EXPECT_FALSE(mdp::find_violation(space, fixed).has_value());
  }
}

TEST(GaOptimize, SingletonSpace) {
  const ActionSpace space{1, 1, mdp::HashLevels{{0.0}}, 500.0};
  Rng rng(2);
  const auto a = ga_optimize(space, [](const JointAction&) { return 1.0; }, GaParams{}, rng);
  EXPECT_EQ(a, (JointAction{{{0, 0}}}));
}

TEST(GaOptimize, DeterministicPerSeed) {
  mec::MecEnvironment env(mec::EnvConfig{});
  auto utility = [&](const JointAction& a) { return env.evaluate_utility(a); };
  Rng a(3), b(3);
  EXPECT_EQ(ga_optimize(env.action_space(), utility, GaParams{}, a),
            ga_optimize(env.action_space(), utility, GaParams{}, b));
}

TEST(GaOptimize, NearBruteForceOnTinyInstances) {
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    mec::EnvConfig c;
    c.num_ues = 3;
    c.num_servers = 2;
    c.hash_levels.levels = {0.0, 100.0};
    c.rng_seed = seed;
    mec::MecEnvironment env(c);
    auto utility = [&](const JointAction& a) { return env.evaluate_utility(a); };
    const double best = brute_force_best(env.action_space(), utility);
    ASSERT_GT(best, 0.0);
    Rng rng(seed);
    const auto found = ga_optimize(env.action_space(), utility, GaParams{}, rng);
    EXPECT_FALSE(mdp::find_violation(env.action_space(), found).has_value());
    if (utility(found) >= 0.95 * best) ++hits;
  }
  EXPECT_GE(hits, 18);
}

TEST(GaOptimize, ReturnsFeasibleOnLargerInstances) {
  mec::EnvConfig c;
  c.num_ues = 12;
  c.num_servers = 8;
  c.total_network_hash = 300.0;
  mec::MecEnvironment env(c);
  Rng rng(4);
  const auto a = ga_optimize(env.action_space(), [&](const JointAction& x) { return env.evaluate_utility(x); },
                             GaParams{}, rng);
  EXPECT_FALSE(mdp::find_violation(env.action_space(), a).has_value());
}
