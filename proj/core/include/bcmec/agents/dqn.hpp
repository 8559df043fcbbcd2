#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "bcmec/agents/replay_buffer.hpp"
#include "bcmec/mdp/mdp.hpp"
#include "bcmec/nn/adam.hpp"
#include "bcmec/nn/dense_net.hpp"
#include "bcmec/rng.hpp"

namespace bcmec::agents {

enum class TargetRule { double_dqn, classic };

struct DqnConfig {
  std::vector<std::size_t> hidden{64, 32, 32};
  nn::OutputActivation output = nn::OutputActivation::linear;
  double gamma = 0.85;
  nn::AdamConfig adam{};
  std::size_t batch_size = 128;
  std::uint64_t target_sync_period = 100;
  TargetRule rule = TargetRule::double_dqn;
};

// Reported once per double-DQN target computation: the next state, the
// action the online network picked, and the action whose target-network
// value was actually read.
struct TargetProbe {
  std::span<const double> next_state;
  const mdp::ActionMask* next_mask = nullptr;
  std::size_t online_argmax = 0;
  std::size_t evaluated_action = 0;
};
using TargetProbeHook = std::function<void(const TargetProbe&)>;

// Highest masked entry; ties go to the lowest index. Throws
// InfeasibleAction for an all-zero mask.
std::size_t masked_argmax(std::span<const double> values, const mdp::ActionMask& mask);

// Uniform over feasible entries with probability epsilon, greedy otherwise.
std::size_t select_action(const nn::DenseNet& online, std::span<const double> state, const mdp::ActionMask& mask,
                          double epsilon, Rng& rng);

// r + gamma * Q_target(s', argmax_a Q_online(s', a)); r when terminal.
double double_dqn_target(double reward, std::span<const double> next_state, bool terminal,
                         const nn::DenseNet& online, const nn::DenseNet& target, double gamma,
                         const mdp::ActionMask& next_mask, const TargetProbeHook* probe = nullptr);

// r + gamma * max_a Q_target(s', a); r when terminal.
double classic_dqn_target(double reward, std::span<const double> next_state, bool terminal,
                          const nn::DenseNet& target, double gamma, const mdp::ActionMask& next_mask);

// Online/target network pair trained from a replay buffer. The target
// network is a hard copy of the online network, refreshed every
// target_sync_period training steps.
class DqnAgent {
 public:
  DqnAgent(std::size_t input_size, std::size_t num_actions, DqnConfig config, std::uint64_t seed);

  std::size_t select_action(std::span<const double> state, const mdp::ActionMask& mask, double epsilon);
  std::size_t greedy_action(std::span<const double> state, const mdp::ActionMask& mask) const;

  // Regression target for one experience under the configured rule.
  double target_for(const Experience& experience) const;

  // One Adam step on a uniformly sampled minibatch. Returns the batch loss
  // measured before the update, or nullopt (and does nothing) while the
  // buffer holds fewer than batch_size experiences.
  std::optional<double> train_step(const ReplayBuffer& buffer);

  void sync_target() { target_ = online_; }

  const DqnConfig& config() const { return config_; }
  const nn::DenseNet& online() const { return online_; }
  const nn::DenseNet& target() const { return target_; }
  nn::DenseNet& mutable_online() { return online_; }
  const nn::AdamState& optimizer() const { return adam_; }
  std::uint64_t train_steps() const { return train_steps_; }

  void set_probe(TargetProbeHook probe) { probe_ = std::move(probe); }

  // Metadata header (rule, gamma, sync period, step counters) followed by
  // the online and target networks in DenseNet checkpoint format.
  void save(std::ostream& out, std::uint64_t epsilon_step) const;
  // Restores networks and counters into an agent built with the same shape.
  // Returns the stored epsilon step.
  std::uint64_t load(std::istream& in);

 private:
  DqnConfig config_;
  nn::DenseNet online_;
  nn::DenseNet target_;
  nn::AdamState adam_;
  Rng rng_;
  std::uint64_t train_steps_ = 0;
  TargetProbeHook probe_;
};

}  // namespace bcmec::agents
