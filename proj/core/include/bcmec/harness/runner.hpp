#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcmec/harness/experiment.hpp"
#include "bcmec/mec/environment.hpp"

namespace bcmec::harness {

// Decision maker for whole timeslots. Learning controllers also consume the
// outcome of each step.
class Controller {
 public:
  virtual ~Controller() = default;

  virtual mdp::JointAction decide(const mec::MecEnvironment& env, bool explore) = 0;

  // Outcome of the action returned by the last decide(), the state that
  // followed, and whether the episode ended.
  virtual void learn(const mec::MecEnvironment& /*env*/, const mec::TimeslotOutcome& /*outcome*/,
                     const mdp::SystemState& /*next_state*/, bool /*terminal*/) {}

  // Fills any replay memory with random-policy transitions by stepping env.
  virtual void warm_up(mec::MecEnvironment& /*env*/, std::uint64_t /*transitions*/) {}

  // Text checkpoint; empty for controllers without learned parameters.
  virtual std::string checkpoint() const { return {}; }
};

std::unique_ptr<Controller> make_controller(const ExperimentConfig& config, Scheme scheme,
                                            const AblationFlags& ablation, std::uint64_t seed);

// Sub-action mask for server partial.size() after applying the ablation
// fallbacks: a fixed round-robin UE and/or the median hash level (or the
// highest feasible level below it).
mdp::ActionMask ablated_mask(const mdp::ActionSpace& space, std::span<const mdp::ServerDecision> partial,
                             const AblationFlags& ablation, std::uint64_t timeslot);

// Index of the hash level used when resource allocation is disabled: the
// median of the nonzero levels.
std::size_t median_hash_level(const mdp::HashLevels& levels);

struct EvalSummary {
  std::uint64_t slots = 0;
  double total_utility = 0.0;    // mean over rollouts of the summed utility
  double average_utility = 0.0;  // per timeslot
  double mining_reward = 0.0;    // per timeslot
  double revenue = 0.0;          // per timeslot
  double latency = 0.0;          // per timeslot
  double ecl_s = 0.0;            // mean over rollouts of summed latency
};

struct SlotRecord {
  std::uint64_t timeslot = 0;
  std::uint64_t episode = 0;
  double utility = 0.0;
  double mining_reward = 0.0;
  double revenue = 0.0;
  double latency = 0.0;
};

struct RunResult {
  Scheme scheme = Scheme::double_dqn;
  std::string label;  // scheme plus ablation suffix
  std::uint64_t seed = 0;
  std::vector<SlotRecord> training;  // one per training timeslot
  EvalSummary eval;
  double art_s = 0.0;  // decision + training compute during the training run
  double env_s = 0.0;  // environment stepping during the training run
  std::string checkpoint;
  std::vector<mec::TimeslotOutcome> outcomes;       // training run, when requested
  std::vector<mdp::JointAction> actions;            // training run, when requested
  std::string chain_export;                         // training run, when requested
};

struct RunOptions {
  bool record_trace = false;
  bool evaluate = true;
};

std::string scheme_label(Scheme scheme, const AblationFlags& ablation);

// Trains (for learning schemes) and then evaluates one scheme for one seed.
// Throws TrainingDiverged on non-finite losses and InvariantViolation if
// the training ledger fails verification or token conservation.
RunResult run_scheme(const ExperimentConfig& config, Scheme scheme, const AblationFlags& ablation,
                     std::uint64_t seed, const RunOptions& options = {});

// Greedy rollouts of `controller` on fresh environments derived from seed.
EvalSummary evaluate(const ExperimentConfig& config, Controller& controller, std::uint64_t seed);

class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Chain verification and token conservation for a finished environment.
void check_ledger_invariants(const mec::MecEnvironment& env);

}  // namespace bcmec::harness
