#pragma once

#include <optional>
#include <span>

#include "bcmec/rng.hpp"

namespace bcmec::ledger {

// Proof-of-work mining economics for one block.
struct MiningModel {
  double eta = 1.0 / 600.0;       // mean block rate, 1/s
  double kappa_s_per_kb = 60.0;   // propagation seconds per KB of block
  double block_size_kb = 5.0;     // b_m, in [1, 10] for the default sweeps
  double first_miner_reward = 30.0;
  // Optional per-KB fee so the block reward grows with block size.
  // Zero keeps the reward constant.
  double reward_per_kb = 0.0;

  double block_reward() const { return first_miner_reward + reward_per_kb * block_size_kb; }
  double propagation_time() const;
  void validate() const;
};

// p / H. Throws DomainError unless 0 <= p <= H and H > 0.
double relative_hash_power(double hash_power_mhs, double total_hash_mhs);

// kappa * b. Linear propagation delay model.
double propagation_time(double block_size_kb, double kappa_s_per_kb);

// 1 - exp(-eta * phi).
double orphan_probability(double eta, double propagation_s);

// rel_power * exp(-eta * phi): mined first and not orphaned.
double mining_success_probability(double rel_power, double eta, double propagation_s);

// R * P.
double expected_reward(double reward_tokens, double success_probability);

// Draws the winning server for one block. Server m wins with probability
// probs[m]; the remaining mass 1 - sum(probs) means a miner outside the MEC
// pool found the block. If the probabilities sum past one they are
// renormalized.
std::optional<std::size_t> sample_winner(std::span<const double> probs, Rng& rng);

}  // namespace bcmec::ledger
