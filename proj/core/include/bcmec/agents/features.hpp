#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bcmec/mdp/mdp.hpp"

namespace bcmec::agents {

// Q-network input for the sub-decision of one server:
// [scaled state (U + M), one-hot server index (M), remaining hash budget / H].
class FeatureEncoder {
 public:
  FeatureEncoder(mdp::ActionSpace space, mdp::StateScaling scaling);

  std::size_t input_size() const { return space_.num_ues + 2 * space_.num_servers + 1; }

  // `partial` holds the decisions of servers 0 .. server-1.
  std::vector<double> encode(const mdp::SystemState& state, std::size_t server,
                             std::span<const mdp::ServerDecision> partial) const;

 private:
  mdp::ActionSpace space_;
  mdp::StateScaling scaling_;
};

}  // namespace bcmec::agents
