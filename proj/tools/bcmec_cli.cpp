// bcmec: training runs, parameter sweeps, ECL/ART bench and contract cost
// report for the blockchain MEC simulator.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bcmec/errors.hpp"
#include "bcmec/harness/experiment.hpp"
#include "bcmec/harness/runner.hpp"
#include "bcmec/harness/sweeps.hpp"
#include "bcmec/mdp/mdp.hpp"
#include "bcmec/mec/environment.hpp"

namespace fs = std::filesystem;
using namespace bcmec;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfigError = 2, kInvariantViolation = 3, kDiverged = 4 };

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string schemes;
  std::optional<std::uint64_t> timeslots;
  std::optional<std::uint64_t> warmup;
  std::optional<unsigned> jobs;
  bool plot_script = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "Scenario file (INI sections [env] [mining] [gas] [experiment] ...)");
  cmd->add_option("--seed", o.seed, "Run a single seed instead of the configured list");
  cmd->add_option("--out", o.out_dir, "Output directory (default: experiment.output_dir)");
  cmd->add_option("--scheme", o.schemes,
                  "Comma-separated schemes: double_dqn, classic_dqn, tabular_q, ga, random, min_latency");
  cmd->add_option("--timeslots", o.timeslots, "Training timeslots per run");
  cmd->add_option("--warmup", o.warmup, "Random transitions stored before DQN training");
  cmd->add_option("--jobs", o.jobs, "Independent runs executed in parallel");
}

harness::ExperimentConfig load(const CommonOptions& o) {
  harness::ExperimentConfig config;
  if (!o.config_path.empty()) config = harness::load_experiment_config(o.config_path);
  if (o.seed) config.seeds = {*o.seed};
  if (!o.out_dir.empty()) config.output_dir = o.out_dir;
  if (!o.schemes.empty()) config.schemes = harness::schemes_from_list(o.schemes);
  if (o.timeslots) config.total_timeslots = *o.timeslots;
  if (o.warmup) config.warmup_transitions = *o.warmup;
  if (o.jobs) config.jobs = *o.jobs;
  config.validate();
  return config;
}

std::ofstream open_output(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_resolved_config(const harness::ExperimentConfig& config) {
  auto out = open_output(fs::path(config.output_dir) / "config.ini");
  harness::write_experiment_config(out, config);
}

void print_rows(const harness::SweepTable& table) {
  std::printf("%-40s %6s %12s %14s %12s %10s\n", "scheme", "seed", table.sweep_name.c_str(), "avg_utility",
              "ecl_s", "art_s");
  for (const auto& r : table.rows) {
    std::printf("%-40s %6llu %12g %14.6f %12.4f %10.3f\n", r.scheme.c_str(),
                static_cast<unsigned long long>(r.seed), r.sweep_value, r.average_utility, r.ecl_s, r.art_s);
  }
}

void emit_table(const harness::ExperimentConfig& config, const harness::SweepTable& table, const std::string& stem,
                bool plot) {
  const fs::path dir(config.output_dir);
  {
    auto out = open_output(dir / (stem + ".csv"));
    harness::write_sweep_csv(out, table);
  }
  if (plot) {
    auto out = open_output(dir / (stem + ".gp"));
    harness::write_plot_script(out, table, stem + ".csv");
  }
  write_resolved_config(config);
  print_rows(table);
  std::printf("wrote %s\n", (dir / (stem + ".csv")).string().c_str());
}

int run_train(const CommonOptions& o) {
  const auto config = load(o);
  const auto hash = harness::config_hash(config);
  harness::RunOptions options;
  options.record_trace = true;
  const auto runs = harness::run_training(config, options);

  const fs::path dir(config.output_dir);
  {
    auto out = open_output(dir / "train_utility.csv");
    harness::write_training_csv(out, runs, hash);
  }
  harness::SweepTable summary;
  summary.sweep_name = "total_timeslots";
  summary.config_hash = hash;
  for (const auto& run : runs) {
    const std::string stem = run.label + "_seed" + std::to_string(run.seed);
    {
      auto out = open_output(dir / ("outcomes_" + stem + ".csv"));
      out << "# config_hash=" << hash << '\n';
      mec::write_outcome_trace_header(out);
      for (const auto& outcome : run.outcomes) mec::write_outcome_trace(out, outcome);
    }
    {
      auto out = open_output(dir / ("actions_" + stem + ".csv"));
      mdp::write_action_trace_header(out);
      for (std::size_t t = 0; t < run.actions.size(); ++t) mdp::write_action_trace(out, t, run.actions[t]);
    }
    {
      auto out = open_output(dir / ("chain_" + stem + ".txt"));
      out << run.chain_export;
    }
    if (!run.checkpoint.empty()) {
      auto out = open_output(dir / ("agent_" + stem + ".txt"));
      out << run.checkpoint;
    }
    harness::MetricsRow row;
    row.scheme = run.label;
    row.seed = run.seed;
    row.sweep_value = static_cast<double>(config.total_timeslots);
    row.total_utility = run.eval.total_utility;
    row.average_utility = run.eval.average_utility;
    row.mining_reward = run.eval.mining_reward;
    row.revenue = run.eval.revenue;
    row.latency = run.eval.latency;
    row.ecl_s = run.eval.ecl_s;
    row.art_s = run.art_s;
    summary.rows.push_back(row);
  }
  emit_table(config, summary, "eval_summary", o.plot_script);
  return kOk;
}

int run_contract_cost(const std::string& config_path, std::size_t users, const std::string& out_dir) {
  harness::ExperimentConfig config;
  if (!config_path.empty()) config = harness::load_experiment_config(config_path);
  const auto report = harness::contract_cost_report(config.env.gas, users);
  std::ostringstream csv;
  harness::write_contract_cost_csv(csv, report);
  std::cout << csv.str();
  if (!out_dir.empty()) {
    auto out = open_output(fs::path(out_dir) / "contract_cost.csv");
    out << csv.str();
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blockchain-empowered MEC simulator: training, sweeps and cost reports"};
  app.require_subcommand(1);

  CommonOptions train_opts, ues_opts, demand_opts, block_opts, bench_opts;
  std::vector<double> ue_values, demand_values, block_values, bench_values;

  auto* train = app.add_subcommand("train", "Train and evaluate the configured schemes");
  add_common(train, train_opts);
  train->add_flag("--plot-script", train_opts.plot_script, "Also write a gnuplot script");

  auto* sweep_ues = app.add_subcommand("sweep-ues", "Average utility versus the number of UEs");
  add_common(sweep_ues, ues_opts);
  sweep_ues->add_option("--values", ue_values, "UE counts")->required()->delimiter(',');
  sweep_ues->add_flag("--plot-script", ues_opts.plot_script, "Also write a gnuplot script");

  auto* sweep_demand = app.add_subcommand("sweep-demand", "Average utility versus UE CPU demand");
  add_common(sweep_demand, demand_opts);
  sweep_demand->add_option("--values", demand_values, "Demands in Gcycles")->required()->delimiter(',');
  sweep_demand->add_flag("--plot-script", demand_opts.plot_script, "Also write a gnuplot script");

  auto* sweep_block = app.add_subcommand("sweep-blocksize", "Average utility versus block size, with ablations");
  add_common(sweep_block, block_opts);
  sweep_block->add_option("--values", block_values, "Block sizes in KB")->required()->delimiter(',');
  sweep_block->add_flag("--plot-script", block_opts.plot_script, "Also write a gnuplot script");

  auto* bench = app.add_subcommand("bench", "Edge computation latency (ECL) and algorithm running time (ART)");
  add_common(bench, bench_opts);
  bench->add_option("--values", bench_values, "UE counts (default: configured)")->delimiter(',');

  std::string cost_config, cost_out;
  std::size_t users = 5;
  auto* cost = app.add_subcommand("contract-cost", "Gas, ether and USD cost of the trading contract");
  cost->add_option("--config", cost_config, "Scenario file ([gas] section)");
  cost->add_option("--users", users, "Users sharing the total cost")->check(CLI::PositiveNumber);
  cost->add_option("--out", cost_out, "Also write contract_cost.csv here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) return run_train(train_opts);
    if (*sweep_ues) {
      const auto config = load(ues_opts);
      emit_table(config, harness::sweep_ue_counts(config, ue_values), "sweep_ues", ues_opts.plot_script);
    } else if (*sweep_demand) {
      const auto config = load(demand_opts);
      emit_table(config, harness::sweep_demand(config, demand_values), "sweep_demand", demand_opts.plot_script);
    } else if (*sweep_block) {
      const auto config = load(block_opts);
      emit_table(config, harness::sweep_block_size(config, block_values), "sweep_blocksize",
                 block_opts.plot_script);
    } else if (*bench) {
      const auto config = load(bench_opts);
      emit_table(config, harness::measure_ecl_art(config, bench_values), "bench_ecl_art", false);
    } else if (*cost) {
      return run_contract_cost(cost_config, users, cost_out);
    }
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const harness::InvariantViolation& e) {
    std::cerr << "invariant violated: " << e.what() << '\n';
    return kInvariantViolation;
  } catch (const TrainingDiverged& e) {
    std::cerr << "training diverged: " << e.what() << '\n';
    return kDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
