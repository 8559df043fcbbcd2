#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bcmec/ledger/gas.hpp"
#include "bcmec/ledger/mining.hpp"
#include "bcmec/mdp/mdp.hpp"

namespace bcmec::mec {

struct EnvConfig {
  std::size_t num_ues = 6;
  std::size_t num_servers = 3;
  double price_unit = 0.15;            // tokens per Gcycle
  double total_network_hash = 500.0;   // MHash/s
  std::size_t horizon = 200;           // timeslots per episode
  mdp::RewardWeights reward_weights;
  std::uint64_t rng_seed = 1;

  double capacity_ghz = 5.0;
  std::vector<double> server_capacity_ghz;  // per-server override, empty = uniform

  double data_size_min_mb = 1.0;
  double data_size_max_mb = 5.0;
  double demand_min_gcycles = 0.6;
  double demand_max_gcycles = 1.6;
  double slack_factor = 1.2;
  double reference_capacity_ghz = 5.0;
  double latency_scale = 1.0;

  std::size_t reputation_window = 0;  // 0 = horizon
  double initial_ue_balance = 1.0e6;

  ledger::MiningModel mining;
  ledger::GasSchedule gas;
  mdp::HashLevels hash_levels;
  mdp::StateScaling scaling;

  void validate() const;
  double capacity_of(std::size_t server) const;
  std::size_t effective_reputation_window() const { return reputation_window ? reputation_window : horizon; }
  mdp::ActionSpace action_space() const;
};

// Reads the [env], [mining] and [gas] sections of a key-value scenario file
// on top of `base`. Unknown keys in those sections are errors.
EnvConfig parse_env_config(std::istream& in, EnvConfig base = {});

// Writes every field in the same format parse_env_config reads.
void write_env_config(std::ostream& out, const EnvConfig& config);

}  // namespace bcmec::mec
