#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace bcmec::mec {

// What one MEC server did during a timeslot.
struct ServerOutcome {
  std::size_t served_ue = 0;
  bool served = false;  // false when the UE's payment failed
  double hash_power_mhs = 0.0;
  double revenue_tokens = 0.0;
  double latency_s = 0.0;
  double success_probability = 0.0;
  double expected_mining_reward_tokens = 0.0;
};

struct TimeslotOutcome {
  std::uint64_t timeslot = 0;
  std::vector<ServerOutcome> servers;
  std::optional<std::size_t> winner;
  double total_reward = 0.0;

  double total_latency() const {
    double sum = 0.0;
    for (const auto& s : servers) sum += s.latency_s;
    return sum;
  }
  double total_revenue() const {
    double sum = 0.0;
    for (const auto& s : servers) sum += s.revenue_tokens;
    return sum;
  }
  double total_mining_reward() const {
    double sum = 0.0;
    for (const auto& s : servers) sum += s.expected_mining_reward_tokens;
    return sum;
  }
};

}  // namespace bcmec::mec
