#include "bcmec/harness/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <ostream>
#include <thread>

#include "../kv_file.hpp"
#include "bcmec/errors.hpp"

namespace bcmec::harness {

using bcmec::detail::format_double;

namespace {

struct Cell {
  ExperimentConfig config;
  Scheme scheme;
  AblationFlags ablation;
  std::uint64_t seed;
  double sweep_value;
};

AblationFlags ablation_for(Scheme scheme, const AblationFlags& flags) {
  if (scheme == Scheme::ga || scheme == Scheme::min_latency) return {};
  return flags;
}

bool is_dqn(Scheme scheme) { return scheme == Scheme::double_dqn || scheme == Scheme::classic_dqn; }

// Runs every cell, up to `jobs` at a time. Results keep cell order; the first
// failing cell's exception is rethrown after all workers finish.
std::vector<RunResult> run_cells(const std::vector<Cell>& cells, unsigned jobs, const RunOptions& options) {
  std::vector<RunResult> results(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        const Cell& c = cells[i];
        results[i] = run_scheme(c.config, c.scheme, c.ablation, c.seed, options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cells.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

MetricsRow to_row(const RunResult& r, double sweep_value) {
  MetricsRow row;
  row.scheme = r.label;
  row.seed = r.seed;
  row.sweep_value = sweep_value;
  row.total_utility = r.eval.total_utility;
  row.average_utility = r.eval.average_utility;
  row.mining_reward = r.eval.mining_reward;
  row.revenue = r.eval.revenue;
  row.latency = r.eval.latency;
  row.ecl_s = r.eval.ecl_s;
  row.art_s = r.art_s;
  return row;
}

template <typename Mutate>
SweepTable sweep(const ExperimentConfig& config, const std::string& name, const std::vector<double>& values,
                 bool with_ablations, Mutate mutate) {
  config.validate();
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<Cell> cells;
  for (double v : values) {
    ExperimentConfig c = config;
    mutate(c, v);
    c.validate();
    for (Scheme s : c.schemes) {
      std::vector<AblationFlags> variants{ablation_for(s, c.ablation)};
      if (with_ablations && is_dqn(s)) {
        variants.push_back({true, false});
        variants.push_back({false, true});
      }
      for (const auto& a : variants) {
        for (auto seed : c.seeds) cells.push_back({c, s, a, seed, v});
      }
    }
  }
  SweepTable table;
  table.sweep_name = name;
  table.config_hash = config_hash(config);
  const auto results = run_cells(cells, config.jobs, {});
  for (std::size_t i = 0; i < cells.size(); ++i) table.rows.push_back(to_row(results[i], cells[i].sweep_value));
  return table;
}

std::size_t as_count(double value, const char* what) {
  if (!(value >= 1.0) || value != static_cast<double>(static_cast<std::size_t>(value))) {
    throw ConfigError(std::string(what) + " must be a positive integer");
  }
  return static_cast<std::size_t>(value);
}

}  // namespace

std::vector<RunResult> run_training(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  std::vector<Cell> cells;
  for (Scheme s : config.schemes) {
    for (auto seed : config.seeds) cells.push_back({config, s, ablation_for(s, config.ablation), seed, 0.0});
  }
  return run_cells(cells, config.jobs, options);
}

SweepTable sweep_ue_counts(const ExperimentConfig& config, const std::vector<double>& ue_counts) {
  return sweep(config, "num_ues", ue_counts, false, [](ExperimentConfig& c, double v) {
    const std::size_t u = as_count(v, "UE count");
    if (u < c.env.num_servers) {
      throw ConfigError("UE count " + std::to_string(u) + " is below the server count " +
                        std::to_string(c.env.num_servers));
    }
    c.env.num_ues = u;
  });
}

SweepTable sweep_demand(const ExperimentConfig& config, const std::vector<double>& demands) {
  return sweep(config, "demand_gcycles", demands, false, [](ExperimentConfig& c, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("demand values must be positive");
    c.env.demand_min_gcycles = v;
    c.env.demand_max_gcycles = v;
  });
}

SweepTable sweep_block_size(const ExperimentConfig& config, const std::vector<double>& block_sizes) {
  return sweep(config, "block_size_kb", block_sizes, true, [](ExperimentConfig& c, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("block sizes must be positive");
    c.env.mining.block_size_kb = v;
  });
}

SweepTable measure_ecl_art(const ExperimentConfig& config, const std::vector<double>& ue_counts) {
  if (config.eval_rollouts == 0) throw ConfigError("ECL needs at least one evaluation rollout");
  if (ue_counts.empty()) {
    return sweep(config, "num_ues", {static_cast<double>(config.env.num_ues)}, false,
                 [](ExperimentConfig&, double) {});
  }
  return sweep_ue_counts(config, ue_counts);
}

ContractCostReport contract_cost_report(const ledger::GasSchedule& schedule, std::size_t users) {
  schedule.validate();
  if (users < 1) throw ConfigError("contract cost report needs at least one user");
  ContractCostReport report;
  report.users = users;
  auto add = [&](const char* name, std::int64_t gas, int ether_decimals) {
    const auto cost = ledger::gas_to_cost(gas, schedule, ether_decimals, 4);
    report.rows.push_back({name, gas, cost.ether, cost.usd});
  };
  add("CreationTrade", schedule.creation_trade_gas, 4);
  add("Trading", schedule.trading_gas, 5);
  add("Total", schedule.creation_trade_gas + schedule.trading_gas, 4);
  report.per_user_usd = report.rows.back().usd / static_cast<double>(users);
  return report;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  out << "# config_hash=" << table.config_hash << '\n'
      << "scheme,seed," << table.sweep_name
      << ",total_utility,average_utility,mining_reward,revenue,latency,ecl_s,art_s\n";
  for (const auto& r : table.rows) {
    out << r.scheme << ',' << r.seed << ',' << format_double(r.sweep_value) << ',' << format_double(r.total_utility)
        << ',' << format_double(r.average_utility) << ',' << format_double(r.mining_reward) << ','
        << format_double(r.revenue) << ',' << format_double(r.latency) << ',' << format_double(r.ecl_s) << ','
        << format_double(r.art_s) << '\n';
  }
}

void write_training_csv(std::ostream& out, const std::vector<RunResult>& runs, const std::string& hash) {
  out << "# config_hash=" << hash << '\n' << "scheme,seed,timeslot,episode,utility,mining_reward,revenue,latency\n";
  for (const auto& run : runs) {
    for (const auto& s : run.training) {
      out << run.label << ',' << run.seed << ',' << s.timeslot << ',' << s.episode << ',' << format_double(s.utility)
          << ',' << format_double(s.mining_reward) << ',' << format_double(s.revenue) << ','
          << format_double(s.latency) << '\n';
    }
  }
}

void write_contract_cost_csv(std::ostream& out, const ContractCostReport& report) {
  out << "function,gas,ether,usd\n";
  for (const auto& r : report.rows) {
    out << r.function << ',' << r.gas << ',' << format_double(r.ether) << ',' << format_double(r.usd) << '\n';
  }
  out << "PerUser(n=" << report.users << "),,," << format_double(report.per_user_usd) << '\n';
}

void write_plot_script(std::ostream& out, const SweepTable& table, const std::string& csv_name) {
  std::vector<std::string> labels;
  for (const auto& r : table.rows) {
    if (std::find(labels.begin(), labels.end(), r.scheme) == labels.end()) labels.push_back(r.scheme);
  }
  std::string list;
  for (const auto& l : labels) list += (list.empty() ? "" : " ") + l;
  // `smooth unique` averages the seeds that share a sweep value.
  out << "set datafile separator ','\n"
      << "set terminal pngcairo size 800,600\n"
      << "set output '" << csv_name.substr(0, csv_name.rfind('.')) << ".png'\n"
      << "set xlabel '" << table.sweep_name << "'\n"
      << "set ylabel 'average utility per timeslot'\n"
      << "set key left top\n"
      << "schemes = \"" << list << "\"\n"
      << "plot for [s in schemes] '" << csv_name
      << "' every ::1 using 3:(strcol(1) eq s ? $5 : NaN) smooth unique with linespoints title s\n";
}

}  // namespace bcmec::harness
