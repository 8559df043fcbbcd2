#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bcmec/agents/dqn.hpp"
#include "bcmec/agents/genetic.hpp"
#include "bcmec/agents/tabular_q.hpp"
#include "bcmec/mec/config.hpp"

namespace bcmec::harness {

enum class Scheme { double_dqn, classic_dqn, tabular_q, ga, random, min_latency };

const char* to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);
std::vector<Scheme> schemes_from_list(const std::string& list);

struct AblationFlags {
  bool disable_resource_allocation = false;  // hash power pinned to the median level
  bool disable_user_selection = false;       // UEs assigned round-robin

  bool any() const { return disable_resource_allocation || disable_user_selection; }
};

struct ExperimentConfig {
  mec::EnvConfig env;
  std::vector<Scheme> schemes{Scheme::double_dqn};
  std::uint64_t total_timeslots = 2000;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  AblationFlags ablation;
  std::string output_dir = "out";

  std::uint64_t warmup_transitions = 100000;
  std::uint64_t eval_timeslots = 200;
  std::uint64_t eval_rollouts = 1;
  std::uint64_t train_every = 1;  // sub-decisions per DQN training step

  agents::DqnConfig dqn;
  std::size_t replay_capacity = 100000;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  double epsilon_decay_fraction = 0.5;  // of all training sub-decisions
  // Logistic Q head with per-step rewards rescaled to [0, 1 - gamma].
  bool normalized_logistic_head = false;

  agents::TabularConfig tabular;
  agents::GaParams ga;

  unsigned jobs = 1;

  std::uint64_t episodes() const { return (total_timeslots + env.horizon - 1) / env.horizon; }
  void validate() const;
};

// Reads a scenario file: [env], [mining], [gas] plus [experiment], [agent],
// [tabular] and [ga]. Unknown keys are errors.
ExperimentConfig parse_experiment_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_experiment_config(const std::string& path);
void write_experiment_config(std::ostream& out, const ExperimentConfig& config);

// First 16 hex digits of the SHA-256 of the canonical config text.
std::string config_hash(const ExperimentConfig& config);

}  // namespace bcmec::harness
