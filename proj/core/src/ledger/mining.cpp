#include "bcmec/ledger/mining.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "bcmec/errors.hpp"

namespace bcmec::ledger {

double MiningModel::propagation_time() const {
  return ledger::propagation_time(block_size_kb, kappa_s_per_kb);
}

void MiningModel::validate() const {
  if (!(eta > 0.0)) throw ConfigError("mining: eta must be positive");
  if (!(kappa_s_per_kb >= 0.0)) throw ConfigError("mining: kappa must be non-negative");
  if (!(block_size_kb >= 0.0)) throw ConfigError("mining: block size must be non-negative");
  if (!(first_miner_reward >= 0.0)) throw ConfigError("mining: reward must be non-negative");
  if (!(reward_per_kb >= 0.0)) throw ConfigError("mining: reward_per_kb must be non-negative");
}

double relative_hash_power(double hash_power_mhs, double total_hash_mhs) {
  if (!(total_hash_mhs > 0.0)) throw DomainError("relative_hash_power: total hash power must be positive");
  if (!(hash_power_mhs >= 0.0)) throw DomainError("relative_hash_power: hash power must be non-negative");
  if (hash_power_mhs > total_hash_mhs) {
    throw DomainError("relative_hash_power: hash power " + std::to_string(hash_power_mhs) +
                      " exceeds network total " + std::to_string(total_hash_mhs));
  }
  return hash_power_mhs / total_hash_mhs;
}

double propagation_time(double block_size_kb, double kappa_s_per_kb) {
  if (!(block_size_kb >= 0.0) || !(kappa_s_per_kb >= 0.0)) {
    throw DomainError("propagation_time: inputs must be non-negative");
  }
  return kappa_s_per_kb * block_size_kb;
}

double orphan_probability(double eta, double propagation_s) {
  if (!(eta >= 0.0) || !(propagation_s >= 0.0)) {
    throw DomainError("orphan_probability: inputs must be non-negative");
  }
  // 1 - e with e in (0, 1]; the sum (1 - e) + e rounds back to exactly 1.
  return 1.0 - std::exp(-eta * propagation_s);
}

double mining_success_probability(double rel_power, double eta, double propagation_s) {
  if (!(rel_power >= 0.0 && rel_power <= 1.0)) {
    throw DomainError("mining_success_probability: relative power outside [0, 1]");
  }
  if (!(eta >= 0.0) || !(propagation_s >= 0.0)) {
    throw DomainError("mining_success_probability: inputs must be non-negative");
  }
  return rel_power * std::exp(-eta * propagation_s);
}

double expected_reward(double reward_tokens, double success_probability) {
  if (!(success_probability >= 0.0 && success_probability <= 1.0)) {
    throw DomainError("expected_reward: probability outside [0, 1]");
  }
  return reward_tokens * success_probability;
}

std::optional<std::size_t> sample_winner(std::span<const double> probs, Rng& rng) {
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("sample_winner: probability outside [0, 1]");
    total += p;
  }
  const double scale = total > 1.0 ? 1.0 / total : 1.0;
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t m = 0; m < probs.size(); ++m) {
    cumulative += probs[m] * scale;
    if (u < cumulative) return m;
  }
  return std::nullopt;
}

}  // namespace bcmec::ledger
