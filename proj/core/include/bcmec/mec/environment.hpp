#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bcmec/ledger/ledger.hpp"
#include "bcmec/mdp/mdp.hpp"
#include "bcmec/mec/config.hpp"
#include "bcmec/mec/outcome.hpp"
#include "bcmec/mec/reputation.hpp"
#include "bcmec/mec/task.hpp"
#include "bcmec/rng.hpp"

namespace bcmec::mec {

struct MecServer {
  std::size_t server_id = 0;
  double compute_capacity_ghz = 5.0;
  double hash_power_mhs = 0.0;
  std::string wallet;
};

struct StepResult {
  mdp::SystemState next_state;
  TimeslotOutcome outcome;
};

// One simulated MEC system. Each step() runs a timeslot: trading through the
// ledger, edge execution, reputation update, mining, block sealing, and the
// draw of the next timeslot's tasks.
//
// Task draws and winner draws use separate streams, so the task sequence
// depends only on the seed and not on the actions taken.
class MecEnvironment {
 public:
  explicit MecEnvironment(EnvConfig config);

  const EnvConfig& config() const { return config_; }
  const mdp::ActionSpace& action_space() const { return space_; }
  const mdp::SystemState& state() const { return state_; }
  const std::vector<TaskSpec>& tasks() const { return tasks_; }
  const std::vector<MecServer>& servers() const { return servers_; }
  const ReputationTracker& reputation(std::size_t server) const { return reputations_.at(server); }
  const ledger::Ledger& ledger() const { return ledger_; }
  ledger::Ledger& mutable_ledger() { return ledger_; }
  const std::string& ue_wallet(std::size_t ue) const { return ue_wallets_.at(ue); }
  std::uint64_t timeslot() const { return timeslot_; }

  // Throws InfeasibleAction for an infeasible action.
  StepResult step(const mdp::JointAction& action);

  // Expected outcome of `action` in the current timeslot assuming every
  // payment clears. No state changes and no randomness.
  TimeslotOutcome preview(const mdp::JointAction& action) const;
  double evaluate_utility(const mdp::JointAction& action) const { return preview(action).total_reward; }

  // New episode: clears reputation history and draws fresh tasks. Ledger
  // and chain persist.
  void reset_episode();

 private:
  ServerOutcome server_physics(std::size_t server, const mdp::ServerDecision& decision) const;
  void refresh_state();

  EnvConfig config_;
  mdp::ActionSpace space_;
  Rng task_rng_;
  Rng mining_rng_;
  ledger::Ledger ledger_;
  std::vector<MecServer> servers_;
  std::vector<ReputationTracker> reputations_;
  std::vector<std::string> ue_wallets_;
  std::vector<TaskSpec> tasks_;
  mdp::SystemState state_;
  std::uint64_t timeslot_ = 0;
};

// Outcome trace, one CSV row per (timeslot, server).
void write_outcome_trace_header(std::ostream& out);
void write_outcome_trace(std::ostream& out, const TimeslotOutcome& outcome);

}  // namespace bcmec::mec
