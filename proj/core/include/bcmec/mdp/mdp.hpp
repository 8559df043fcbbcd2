#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bcmec/mec/outcome.hpp"

namespace bcmec::mdp {

// Observation at the start of a timeslot: every UE's CPU demand and every
// server's reputation score.
struct SystemState {
  std::vector<double> ue_demands;
  std::vector<double> server_reputations;

  friend bool operator==(const SystemState&, const SystemState&) = default;
};

struct ServerDecision {
  std::size_t ue = 0;
  std::size_t hash_level = 0;  // index into HashLevels

  friend bool operator==(const ServerDecision&, const ServerDecision&) = default;
};

// One decision per server, in server order.
struct JointAction {
  std::vector<ServerDecision> decisions;

  friend bool operator==(const JointAction&, const JointAction&) = default;
};

// Allowed hash powers in MHash/s, strictly increasing. Level 0 means the
// server abstains from mining.
struct HashLevels {
  std::vector<double> levels{0.0, 20.0, 40.0, 60.0, 80.0, 100.0};

  std::size_t size() const { return levels.size(); }
  double operator[](std::size_t i) const { return levels[i]; }
  void validate(double total_hash) const;
};

struct RewardWeights {
  double w_reward = 1.0;
  double w_revenue = 1.0;
  double w_latency = 1.0;

  void validate() const;
};

// Shape of the factored action space: each timeslot is M sequential
// sub-decisions, each picking (UE, hash level) out of U * L sub-actions.
struct ActionSpace {
  std::size_t num_ues = 0;
  std::size_t num_servers = 0;
  HashLevels hash_levels;
  double total_hash = 0.0;

  std::size_t subactions() const;
  std::size_t encode(const ServerDecision& d) const { return d.ue * hash_levels.size() + d.hash_level; }
  ServerDecision decode(std::size_t subaction) const {
    return {subaction / hash_levels.size(), subaction % hash_levels.size()};
  }
  // Hash power already committed by `partial`.
  double committed_hash(std::span<const ServerDecision> partial) const;
};

using ActionMask = std::vector<std::uint8_t>;

// Min-max ranges for the state features.
struct StateScaling {
  double demand_min = 0.6;
  double demand_max = 1.6;
  double reputation_min = 0.0;
  double reputation_max = 2.0;
};

// [demands..., reputations...], each min-max scaled. Throws ConfigError if
// the state does not have (num_ues, num_servers) entries.
std::vector<double> encode_state(const SystemState& state, std::size_t num_ues, std::size_t num_servers,
                                 const StateScaling& scaling);

std::size_t subaction_space(std::size_t num_ues, std::size_t num_levels);

// Sub-actions open to server partial.size(): UEs not yet taken by earlier
// servers, and hash levels that keep the committed total within budget.
// Throws InfeasibleAction if nothing remains.
ActionMask feasible_mask(const ActionSpace& space, std::span<const ServerDecision> partial);

// Empty when `action` satisfies every constraint, otherwise a description
// of the first violation.
std::optional<std::string> find_violation(const ActionSpace& space, const JointAction& action);

// Throws InfeasibleAction with the violation text.
void check_feasible(const ActionSpace& space, const JointAction& action);

double server_reward(const mec::ServerOutcome& server, const RewardWeights& weights);

// Sum over servers of weighted mining reward + revenue - latency.
double reward(const mec::TimeslotOutcome& outcome, const RewardWeights& weights);

// CSV action trace: timeslot,server,ue,hash_level
void write_action_trace_header(std::ostream& out);
void write_action_trace(std::ostream& out, std::uint64_t timeslot, const JointAction& action);
// Groups rows back into per-timeslot actions, in timeslot order.
std::vector<JointAction> read_action_trace(std::istream& in);

}  // namespace bcmec::mdp
