#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "bcmec/errors.hpp"
#include "bcmec/harness/experiment.hpp"
#include "bcmec/harness/runner.hpp"
#include "bcmec/harness/sweeps.hpp"

using namespace bcmec;
using namespace bcmec::harness;

namespace {

ExperimentConfig quick() {
  ExperimentConfig c;
  c.total_timeslots = 60;
  c.warmup_transitions = 300;
  c.eval_timeslots = 20;
  c.seeds = {1, 2};
  c.dqn.hidden = {16, 8};
  c.dqn.batch_size = 32;
  c.replay_capacity = 1000;
  c.ga.population = 10;
  c.ga.generations = 5;
  c.schemes = {Scheme::double_dqn, Scheme::tabular_q, Scheme::random, Scheme::min_latency};
  return c;
}

std::string strip_last_column(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

std::size_t count(const mdp::ActionMask& m) { return static_cast<std::size_t>(std::count(m.begin(), m.end(), 1)); }

}  // namespace

TEST(Scheme, NamesRoundTrip) {
  for (Scheme s : {Scheme::double_dqn, Scheme::classic_dqn, Scheme::tabular_q, Scheme::ga, Scheme::random,
                   Scheme::min_latency}) {
    EXPECT_EQ(scheme_from_string(to_string(s)), s);
  }
  EXPECT_THROW(scheme_from_string("ppo"), ConfigError);
  EXPECT_EQ(schemes_from_list(" ga ,random").size(), 2u);
}

TEST(RunTraining, ZeroTimeslotsGiveEmptySeries) {
  auto c = quick();
  c.total_timeslots = 0;
  c.schemes = {Scheme::double_dqn, Scheme::random};
  for (const auto& run : run_training(c)) EXPECT_TRUE(run.training.empty());
}

TEST(RunTraining, DeterministicPerSeed) {
  auto c = quick();
  c.schemes = {Scheme::double_dqn, Scheme::classic_dqn, Scheme::tabular_q, Scheme::ga, Scheme::random};
  const auto a = run_training(c);
  const auto b = run_training(c);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].training.size(), 60u);
    for (std::size_t t = 0; t < a[i].training.size(); ++t) {
      EXPECT_EQ(a[i].training[t].utility, b[i].training[t].utility) << a[i].label << " t=" << t;
    }
    EXPECT_EQ(a[i].eval.total_utility, b[i].eval.total_utility);
    EXPECT_EQ(a[i].checkpoint, b[i].checkpoint);
  }
  std::ostringstream ca, cb;
  write_training_csv(ca, a, config_hash(c));
  write_training_csv(cb, b, config_hash(c));
  EXPECT_EQ(ca.str(), cb.str());
}

TEST(RunTraining, ParallelMatchesSequential) {
  auto c = quick();
  const auto seq = run_training(c);
  c.jobs = 3;
  const auto par = run_training(c);
  ASSERT_EQ(seq.size(), par.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    EXPECT_EQ(seq[i].label, par[i].label);
    EXPECT_EQ(seq[i].seed, par[i].seed);
    EXPECT_EQ(seq[i].eval.total_utility, par[i].eval.total_utility);
  }
}

TEST(RunTraining, TraceAndChainRecorded) {
  auto c = quick();
  c.schemes = {Scheme::random};
  c.seeds = {3};
  RunOptions options;
  options.record_trace = true;
  const auto runs = run_training(c, options);
  ASSERT_EQ(runs.size(), 1u);
  EXPECT_EQ(runs[0].outcomes.size(), 60u);
  EXPECT_EQ(runs[0].actions.size(), 60u);
  std::istringstream chain(runs[0].chain_export);
  EXPECT_TRUE(ledger::Chain::import_lines(chain).verify());
}

TEST(RunTraining, DivergenceAborts) {
  auto c = quick();
  c.schemes = {Scheme::double_dqn};
  c.seeds = {1};
  c.dqn.adam.learning_rate = 1e250;
  EXPECT_THROW(run_training(c), TrainingDiverged);
}

TEST(RunTraining, LogisticHeadStaysFinite) {
  auto c = quick();
  c.schemes = {Scheme::double_dqn};
  c.seeds = {1};
  c.normalized_logistic_head = true;
  c.dqn.output = nn::OutputActivation::logistic;
  const auto runs = run_training(c);
  EXPECT_TRUE(std::isfinite(runs[0].eval.average_utility));
}

TEST(RunTraining, ArtExcludesNothingNegative) {
  const auto runs = run_training(quick());
  for (const auto& r : runs) {
    EXPECT_GE(r.art_s, 0.0);
    EXPECT_GE(r.env_s, 0.0);
    EXPECT_GE(r.eval.ecl_s, 0.0);
  }
}

TEST(Ablation, MedianLevel) {
  EXPECT_EQ(median_hash_level(mdp::HashLevels{}), 3u);
  EXPECT_EQ(median_hash_level(mdp::HashLevels{{0, 10, 20, 30, 40}}), 2u);
  EXPECT_EQ(median_hash_level(mdp::HashLevels{{0}}), 0u);
}

TEST(Ablation, UserSelectionIsRoundRobin) {
  const mdp::ActionSpace space{5, 3, mdp::HashLevels{}, 500.0};
  const AblationFlags flags{false, true};
  std::vector<mdp::ServerDecision> partial;
  for (std::size_t m = 0; m < 3; ++m) {
    const auto mask = ablated_mask(space, partial, flags, 7);
    EXPECT_EQ(count(mask), 6u);
    for (std::size_t a = 0; a < mask.size(); ++a) {
      if (mask[a]) EXPECT_EQ(space.decode(a).ue, (7 + m) % 5);
    }
    partial.push_back({(7 + m) % 5, 0});
  }
}

TEST(Ablation, ResourceAllocationPinsMedianLevel) {
  const mdp::ActionSpace space{4, 3, mdp::HashLevels{}, 150.0};
  const AblationFlags flags{true, false};
  auto mask = ablated_mask(space, {}, flags, 0);
  EXPECT_EQ(count(mask), 4u);
  for (std::size_t a = 0; a < mask.size(); ++a) {
    if (mask[a]) EXPECT_EQ(space.decode(a).hash_level, 3u);
  }
  // 120 of 150 committed: 60 no longer fits, so the fallback is 20.
  const std::vector<mdp::ServerDecision> partial{{0, 3}, {1, 3}};
  mask = ablated_mask(space, partial, flags, 0);
  for (std::size_t a = 0; a < mask.size(); ++a) {
    if (mask[a]) EXPECT_EQ(space.decode(a).hash_level, 1u);
  }
  EXPECT_EQ(count(mask), 2u);
}

TEST(Ablation, NotOfferedForSearchBaselines) {
  EXPECT_THROW(make_controller(quick(), Scheme::ga, AblationFlags{true, false}, 1), ConfigError);
}

TEST(Sweeps, UeCountRowsComplete) {
  auto c = quick();
  const auto table = sweep_ue_counts(c, {3, 5});
  EXPECT_EQ(table.rows.size(), 2u * c.schemes.size() * c.seeds.size());
  std::set<std::tuple<std::string, std::uint64_t, double>> keys;
  for (const auto& r : table.rows) {
    EXPECT_TRUE(std::isfinite(r.average_utility));
    keys.insert({r.scheme, r.seed, r.sweep_value});
  }
  EXPECT_EQ(keys.size(), table.rows.size());
}

TEST(Sweeps, SingleValueOneRowPerScheme) {
  auto c = quick();
  c.seeds = {4};
  const auto table = sweep_ue_counts(c, {6});
  EXPECT_EQ(table.rows.size(), c.schemes.size());
}

TEST(Sweeps, UeCountBelowServersRejected) {
  EXPECT_THROW(sweep_ue_counts(quick(), {2}), ConfigError);
  EXPECT_THROW(sweep_ue_counts(quick(), {4.5}), ConfigError);
}

TEST(Sweeps, RevenueLinearInDemand) {
  auto c = quick();
  c.schemes = {Scheme::min_latency};
  c.seeds = {1};
  const auto table = sweep_demand(c, {0.6, 1.0, 1.6});
  ASSERT_EQ(table.rows.size(), 3u);
  for (const auto& r : table.rows) EXPECT_NEAR(r.revenue, 3 * 0.15 * r.sweep_value, 1e-12);
  EXPECT_LT(table.rows[0].revenue, table.rows[1].revenue);
  EXPECT_LT(table.rows[1].revenue, table.rows[2].revenue);
  EXPECT_THROW(sweep_demand(c, {0.0}), ConfigError);
}

TEST(Sweeps, BlockSizeMiningMatchesHandValues) {
  auto c = quick();
  c.schemes = {Scheme::min_latency};
  c.seeds = {1};
  const auto table = sweep_block_size(c, {1, 5, 10});
  ASSERT_EQ(table.rows.size(), 3u);
  for (const auto& r : table.rows) {
    // Three servers at 100 of 500 MHash/s, propagation 60 s/KB, eta 1/600.
    const double expected = 3 * 30.0 * 0.2 * std::exp(-r.sweep_value / 10.0);
    EXPECT_NEAR(r.mining_reward, expected, 1e-12) << r.sweep_value;
  }
}

TEST(Sweeps, BlockSizeAddsAblationsForDqn) {
  auto c = quick();
  c.schemes = {Scheme::double_dqn, Scheme::random};
  c.seeds = {1};
  const auto table = sweep_block_size(c, {2});
  std::set<std::string> labels;
  for (const auto& r : table.rows) labels.insert(r.scheme);
  EXPECT_EQ(labels, (std::set<std::string>{"double_dqn", "double_dqn-no_resource_allocation",
                                           "double_dqn-no_user_selection", "random"}));
}

TEST(MeasureEclArt, ZeroRolloutsRejected) {
  auto c = quick();
  c.eval_rollouts = 0;
  EXPECT_THROW(measure_ecl_art(c), ConfigError);
}

TEST(MeasureEclArt, FastestPairingBeatsRandomOnLatency) {
  auto c = quick();
  c.schemes = {Scheme::min_latency, Scheme::random};
  c.env.server_capacity_ghz = {8.0, 5.0, 3.0};
  c.eval_rollouts = 3;
  const auto table = measure_ecl_art(c);
  std::map<std::string, double> ecl;
  for (const auto& r : table.rows) ecl[r.scheme] += r.ecl_s;
  EXPECT_LE(ecl["min_latency"], ecl["random"]);
}

TEST(ContractCost, DefaultsForFiveUsers) {
  const auto report = contract_cost_report(ledger::GasSchedule{}, 5);
  ASSERT_EQ(report.rows.size(), 3u);
  EXPECT_EQ(report.rows[0].function, "CreationTrade");
  EXPECT_DOUBLE_EQ(report.rows[0].usd, 0.663);
  EXPECT_DOUBLE_EQ(report.rows[1].usd, 15.2275);
  EXPECT_EQ(report.rows[2].gas, 4075775);
  EXPECT_NEAR(report.rows[2].usd, 15.8955, 0.005 * 15.8955);
  EXPECT_NEAR(report.per_user_usd, 3.1791, 0.005 * 3.1791);
}

TEST(ContractCost, SingleUserPaysTotal) {
  const auto report = contract_cost_report(ledger::GasSchedule{}, 1);
  EXPECT_EQ(report.per_user_usd, report.rows[2].usd);
  EXPECT_THROW(contract_cost_report(ledger::GasSchedule{}, 0), ConfigError);
}

TEST(ContractCost, DoubledScheduleDoublesUsd) {
  ledger::GasSchedule doubled;
  doubled.creation_trade_gas *= 2;
  doubled.trading_gas *= 2;
  const auto base = contract_cost_report(ledger::GasSchedule{}, 5);
  const auto twice = contract_cost_report(doubled, 5);
  // Display truncation can shift each figure by one unit in the last place.
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(twice.rows[i].usd, 2 * base.rows[i].usd, 2 * 1e-4 * 195);
  EXPECT_NEAR(twice.per_user_usd, 2 * base.per_user_usd, 0.005 * 2 * base.per_user_usd);
}

TEST(Csv, SweepHeaderAndArtLast) {
  SweepTable table;
  table.sweep_name = "num_ues";
  table.config_hash = "abc";
  table.rows.push_back({"random", 1, 6, 10, 0.5, 1, 0.3, 0.2, 4, 0.01});
  std::ostringstream out;
  write_sweep_csv(out, table);
  EXPECT_EQ(out.str(),
            "# config_hash=abc\n"
            "scheme,seed,num_ues,total_utility,average_utility,mining_reward,revenue,latency,ecl_s,art_s\n"
            "random,1,6,10,0.5,1,0.3,0.2,4,0.01\n");
}

TEST(Csv, SweepOutputReproducibleWithoutTiming) {
  auto c = quick();
  c.schemes = {Scheme::tabular_q, Scheme::double_dqn};
  std::ostringstream a, b;
  write_sweep_csv(a, sweep_ue_counts(c, {4}));
  write_sweep_csv(b, sweep_ue_counts(c, {4}));
  EXPECT_EQ(strip_last_column(a.str()), strip_last_column(b.str()));
}

TEST(Csv, ContractCost) {
  std::ostringstream out;
  write_contract_cost_csv(out, contract_cost_report(ledger::GasSchedule{}, 5));
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "function,gas,ether,usd");
  EXPECT_NE(out.str().find("CreationTrade,170948,0.0034,0.663"), std::string::npos);
  EXPECT_NE(out.str().find("Trading,3904827,0.07809,15.2275"), std::string::npos);
}

TEST(LedgerInvariants, TamperedChainDetected) {
  mec::MecEnvironment env(mec::EnvConfig{});
  env.step(mdp::JointAction{{{0, 1}, {1, 2}, {2, 3}}});
  EXPECT_NO_THROW(check_ledger_invariants(env));
  env.mutable_ledger().mutable_chain().mutable_blocks()[1].txs[0].amount = 99.0;
  EXPECT_THROW(check_ledger_invariants(env), InvariantViolation);
}
