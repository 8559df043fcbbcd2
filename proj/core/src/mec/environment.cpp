#include "bcmec/mec/environment.hpp"

#include <ostream>

#include "../kv_file.hpp"
#include "bcmec/errors.hpp"
#include "bcmec/ledger/mining.hpp"
#include "bcmec/mec/formulas.hpp"

namespace bcmec::mec {

namespace {

constexpr std::uint64_t kTaskStream = 0;
constexpr std::uint64_t kMiningStream = 1;
constexpr std::uint64_t kLedgerStream = 2;

}  // namespace

MecEnvironment::MecEnvironment(EnvConfig config)
    : config_((config.validate(), std::move(config))),
      space_(config_.action_space()),
      task_rng_(derive_seed(config_.rng_seed, kTaskStream)),
      mining_rng_(derive_seed(config_.rng_seed, kMiningStream)),
      ledger_(derive_seed(config_.rng_seed, kLedgerStream), config_.gas) {
  for (std::size_t m = 0; m < config_.num_servers; ++m) {
    MecServer server;
    server.server_id = m;
    server.compute_capacity_ghz = config_.capacity_of(m);
    server.wallet = ledger_.register_account(0.0).wallet_address;
    servers_.push_back(std::move(server));
    reputations_.emplace_back(config_.effective_reputation_window());
  }
  for (std::size_t u = 0; u < config_.num_ues; ++u) {
    ue_wallets_.push_back(ledger_.register_account(config_.initial_ue_balance).wallet_address);
  }
  tasks_ = sample_tasks(task_rng_, config_);
  refresh_state();
}

ServerOutcome MecEnvironment::server_physics(std::size_t server, const mdp::ServerDecision& decision) const {
  const TaskSpec& task = tasks_[decision.ue];
  const auto& mining = config_.mining;
  ServerOutcome out;
  out.served_ue = decision.ue;
  out.served = true;
  out.hash_power_mhs = space_.hash_levels[decision.hash_level];
  const double rel_power = ledger::relative_hash_power(out.hash_power_mhs, config_.total_network_hash);
  out.success_probability = ledger::mining_success_probability(rel_power, mining.eta, mining.propagation_time());
  out.expected_mining_reward_tokens = ledger::expected_reward(mining.block_reward(), out.success_probability);
  out.revenue_tokens = service_cost(task.cpu_demand_gcycles, config_.price_unit);
  out.latency_s = config_.latency_scale * execution_latency(true, task.data_size_mb, task.cpu_demand_gcycles,
                                                            servers_[server].compute_capacity_ghz);
  return out;
}

TimeslotOutcome MecEnvironment::preview(const mdp::JointAction& action) const {
  mdp::check_feasible(space_, action);
  TimeslotOutcome outcome;
  outcome.timeslot = timeslot_;
  for (std::size_t m = 0; m < action.decisions.size(); ++m) {
    outcome.servers.push_back(server_physics(m, action.decisions[m]));
  }
  outcome.total_reward = mdp::reward(outcome, config_.reward_weights);
  return outcome;
}

StepResult MecEnvironment::step(const mdp::JointAction& action) {
  mdp::check_feasible(space_, action);
  TimeslotOutcome outcome;
  outcome.timeslot = timeslot_;
  std::vector<double> success;
  success.reserve(action.decisions.size());

  for (std::size_t m = 0; m < action.decisions.size(); ++m) {
    const auto& decision = action.decisions[m];
    const TaskSpec& task = tasks_[decision.ue];
    ServerOutcome server = server_physics(m, decision);
    servers_[m].hash_power_mhs = server.hash_power_mhs;

    const auto contract = ledger_.creation_trade(ue_wallets_[decision.ue], task.cpu_demand_gcycles,
                                                 config_.price_unit);
    try {
      ledger_.trading(contract, servers_[m].wallet);
    } catch (const InsufficientBalance&) {
      // Unpaid tasks are not executed.
      server.served = false;
      server.revenue_tokens = 0.0;
      server.latency_s = 0.0;
    }
    if (server.served) reputations_[m].record(task.deadline_s, server.latency_s);

    success.push_back(server.success_probability);
    outcome.servers.push_back(server);
  }

  outcome.winner = ledger::sample_winner(success, mining_rng_);
  if (outcome.winner) ledger_.mint(servers_[*outcome.winner].wallet, config_.mining.block_reward());
  ledger_.seal_block(outcome.winner);

  outcome.total_reward = mdp::reward(outcome, config_.reward_weights);

  ++timeslot_;
  tasks_ = sample_tasks(task_rng_, config_);
  refresh_state();
  return {state_, std::move(outcome)};
}

void MecEnvironment::reset_episode() {
  for (auto& tracker : reputations_) tracker.clear();
  tasks_ = sample_tasks(task_rng_, config_);
  refresh_state();
}

void MecEnvironment::refresh_state() {
  state_.ue_demands.resize(tasks_.size());
  for (std::size_t u = 0; u < tasks_.size(); ++u) state_.ue_demands[u] = tasks_[u].cpu_demand_gcycles;
  state_.server_reputations.resize(reputations_.size());
  for (std::size_t m = 0; m < reputations_.size(); ++m) state_.server_reputations[m] = reputations_[m].score();
}

void write_outcome_trace_header(std::ostream& out) {
  out << "timeslot,server,served_ue,served,hash_power_mhs,revenue_tokens,latency_s,success_probability,"
         "expected_mining_reward,winner,total_reward\n";
}

void write_outcome_trace(std::ostream& out, const TimeslotOutcome& outcome) {
  using bcmec::detail::format_double;
  const std::string winner = outcome.winner ? std::to_string(*outcome.winner) : std::string("none");
  for (std::size_t m = 0; m < outcome.servers.size(); ++m) {
    const auto& s = outcome.servers[m];
    out << outcome.timeslot << ',' << m << ',' << s.served_ue << ',' << (s.served ? 1 : 0) << ','
        << format_double(s.hash_power_mhs) << ',' << format_double(s.revenue_tokens) << ','
        << format_double(s.latency_s) << ',' << format_double(s.success_probability) << ','
        << format_double(s.expected_mining_reward_tokens) << ',' << winner << ','
        << format_double(outcome.total_reward) << '\n';
  }
}

}  // namespace bcmec::mec
