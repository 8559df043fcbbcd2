#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bcmec/harness/experiment.hpp"
#include "bcmec/harness/runner.hpp"

namespace bcmec::harness {

struct MetricsRow {
  std::string scheme;
  std::uint64_t seed = 0;
  double sweep_value = 0.0;
  double total_utility = 0.0;
  double average_utility = 0.0;
  double mining_reward = 0.0;
  double revenue = 0.0;
  double latency = 0.0;
  double ecl_s = 0.0;
  double art_s = 0.0;
};

struct SweepTable {
  std::string sweep_name;  // CSV column for sweep_value
  std::string config_hash;
  std::vector<MetricsRow> rows;
};

// Per-timeslot training series of every configured scheme and seed.
std::vector<RunResult> run_training(const ExperimentConfig& config, const RunOptions& options = {});

SweepTable sweep_ue_counts(const ExperimentConfig& config, const std::vector<double>& ue_counts);
SweepTable sweep_demand(const ExperimentConfig& config, const std::vector<double>& demands);
// Also runs both ablation modes for every DQN scheme in the config.
SweepTable sweep_block_size(const ExperimentConfig& config, const std::vector<double>& block_sizes);

// ECL and ART per scheme and seed at each UE count (the configured one when
// ue_counts is empty). Throws ConfigError when eval_rollouts is zero.
SweepTable measure_ecl_art(const ExperimentConfig& config, const std::vector<double>& ue_counts = {});

struct ContractCostRow {
  std::string function;
  std::int64_t gas = 0;
  double ether = 0.0;
  double usd = 0.0;
};

struct ContractCostReport {
  std::vector<ContractCostRow> rows;  // CreationTrade, Trading, Total
  std::size_t users = 0;
  double per_user_usd = 0.0;
};

ContractCostReport contract_cost_report(const ledger::GasSchedule& schedule, std::size_t users);

// CSV writers. A leading '#' comment line carries the config hash; ART is
// the last column so byte comparisons can drop it.
void write_sweep_csv(std::ostream& out, const SweepTable& table);
void write_training_csv(std::ostream& out, const std::vector<RunResult>& runs, const std::string& config_hash);
void write_contract_cost_csv(std::ostream& out, const ContractCostReport& report);

// Gnuplot script plotting average utility against the sweep value, one
// line per scheme.
void write_plot_script(std::ostream& out, const SweepTable& table, const std::string& csv_name);

}  // namespace bcmec::harness
