#include "bcmec/agents/features.hpp"

#include <utility>

namespace bcmec::agents {

FeatureEncoder::FeatureEncoder(mdp::ActionSpace space, mdp::StateScaling scaling)
    : space_(std::move(space)), scaling_(scaling) {}

std::vector<double> FeatureEncoder::encode(const mdp::SystemState& state, std::size_t server,
                                           std::span<const mdp::ServerDecision> partial) const {
  std::vector<double> features = mdp::encode_state(state, space_.num_ues, space_.num_servers, scaling_);
  features.reserve(input_size());
  for (std::size_t m = 0; m < space_.num_servers; ++m) features.push_back(m == server ? 1.0 : 0.0);
  features.push_back((space_.total_hash - space_.committed_hash(partial)) / space_.total_hash);
  return features;
}

}  // namespace bcmec::agents
