#include "bcmec/agents/dqn.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "../kv_file.hpp"
#include "bcmec/errors.hpp"
#include "bcmec/nn/loss.hpp"

namespace bcmec::agents {

namespace {

std::vector<std::size_t> layer_sizes(std::size_t input, const std::vector<std::size_t>& hidden, std::size_t output) {
  std::vector<std::size_t> sizes{input};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(output);
  return sizes;
}

std::size_t pick_uniform_feasible(const mdp::ActionMask& mask, Rng& rng) {
  std::size_t feasible = 0;
  for (auto bit : mask) feasible += bit ? 1 : 0;
  if (feasible == 0) throw InfeasibleAction("select_action: empty mask");
  std::size_t k = rng.index(feasible);
  for (std::size_t a = 0; a < mask.size(); ++a) {
    if (mask[a] && k-- == 0) return a;
  }
  return mask.size();  // unreachable
}

}  // namespace

std::size_t masked_argmax(std::span<const double> values, const mdp::ActionMask& mask) {
  if (values.size() != mask.size()) throw ConfigError("masked_argmax: mask size mismatch");
  std::size_t best = mask.size();
  for (std::size_t a = 0; a < mask.size(); ++a) {
    if (!mask[a]) continue;
    if (best == mask.size() || values[a] > values[best]) best = a;
  }
  if (best == mask.size()) throw InfeasibleAction("masked_argmax: empty mask");
  return best;
}

std::size_t select_action(const nn::DenseNet& online, std::span<const double> state, const mdp::ActionMask& mask,
                          double epsilon, Rng& rng) {
  // The exploration coin is always drawn so the stream does not depend on
  // the network.
  const bool explore = rng.bernoulli(epsilon);
  if (explore) return pick_uniform_feasible(mask, rng);
  const auto q = online.forward(state);
  return masked_argmax(q, mask);
}

double double_dqn_target(double reward, std::span<const double> next_state, bool terminal,
                         const nn::DenseNet& online, const nn::DenseNet& target, double gamma,
                         const mdp::ActionMask& next_mask, const TargetProbeHook* probe) {
  if (terminal) return reward;
  const auto q_online = online.forward(next_state);
  const std::size_t chosen = masked_argmax(q_online, next_mask);
  const auto q_target = target.forward(next_state);
  auto read_target = [&](std::size_t action) {
    if (probe && *probe) (*probe)(TargetProbe{next_state, &next_mask, chosen, action});
    return q_target[action];
  };
  return reward + gamma * read_target(chosen);
}

double classic_dqn_target(double reward, std::span<const double> next_state, bool terminal,
                          const nn::DenseNet& target, double gamma, const mdp::ActionMask& next_mask) {
  if (terminal) return reward;
  const auto q_target = target.forward(next_state);
  return reward + gamma * q_target[masked_argmax(q_target, next_mask)];
}

DqnAgent::DqnAgent(std::size_t input_size, std::size_t num_actions, DqnConfig config, std::uint64_t seed)
    : config_(std::move(config)),
      online_(layer_sizes(input_size, config_.hidden, num_actions), config_.output, derive_seed(seed, 0)),
      target_(online_),
      adam_(nn::make_adam_state(online_, config_.adam)),
      rng_(derive_seed(seed, 1)) {
  if (!(config_.gamma > 0.0 && config_.gamma < 1.0)) throw ConfigError("dqn: gamma must lie in (0, 1)");
  if (config_.batch_size == 0) throw ConfigError("dqn: batch size must be positive");
  if (config_.target_sync_period == 0) throw ConfigError("dqn: target sync period must be positive");
}

std::size_t DqnAgent::select_action(std::span<const double> state, const mdp::ActionMask& mask, double epsilon) {
  return agents::select_action(online_, state, mask, epsilon, rng_);
}

std::size_t DqnAgent::greedy_action(std::span<const double> state, const mdp::ActionMask& mask) const {
  return masked_argmax(online_.forward(state), mask);
}

double DqnAgent::target_for(const Experience& e) const {
  if (config_.rule == TargetRule::double_dqn) {
    return double_dqn_target(e.reward, e.next_state, e.terminal, online_, target_, config_.gamma, e.next_mask,
                             &probe_);
  }
  return classic_dqn_target(e.reward, e.next_state, e.terminal, target_, config_.gamma, e.next_mask);
}

std::optional<double> DqnAgent::train_step(const ReplayBuffer& buffer) {
  if (buffer.size() < config_.batch_size) return std::nullopt;
  const auto indices = buffer.sample_indices(config_.batch_size, rng_);

  std::vector<double> predicted;
  std::vector<double> targets;
  std::vector<nn::ForwardCache> caches(indices.size());
  predicted.reserve(indices.size());
  targets.reserve(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const Experience& e = buffer[indices[i]];
    targets.push_back(target_for(e));
    const auto q = online_.forward(e.state, caches[i]);
    predicted.push_back(q.at(e.action));
  }
  const nn::LossResult loss = nn::mse_loss(predicted, targets);
  if (!std::isfinite(loss.loss)) throw TrainingDiverged("dqn: non-finite loss at step " + std::to_string(train_steps_));

  nn::Gradients grads = online_.zero_gradients();
  std::vector<double> output_grad(online_.output_size(), 0.0);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const std::size_t action = buffer[indices[i]].action;
    output_grad[action] = loss.gradient[i];
    online_.backward(caches[i], output_grad, grads);
    output_grad[action] = 0.0;
  }
  nn::adam_step(online_, grads, adam_);
  if (!online_.all_finite()) throw TrainingDiverged("dqn: non-finite parameters at step " + std::to_string(train_steps_));

  ++train_steps_;
  if (train_steps_ % config_.target_sync_period == 0) sync_target();
  return loss.loss;
}

void DqnAgent::save(std::ostream& out, std::uint64_t epsilon_step) const {
  out << "bcmec-agent 1\n"
      << "rule " << (config_.rule == TargetRule::double_dqn ? "double_dqn" : "classic") << '\n'
      << "gamma " << bcmec::detail::format_double(config_.gamma) << '\n'
      << "target_sync_period " << config_.target_sync_period << '\n'
      << "train_steps " << train_steps_ << '\n'
      << "adam_steps " << adam_.step << '\n'
      << "epsilon_step " << epsilon_step << '\n';
  online_.save(out);
  target_.save(out);
}

std::uint64_t DqnAgent::load(std::istream& in) {
  auto field = [&](const char* name) {
    std::string key, value;
    if (!(in >> key >> value) || key != name) throw ConfigError(std::string("agent checkpoint: expected ") + name);
    return value;
  };
  if (field("bcmec-agent") != "1") throw ConfigError("agent checkpoint: unsupported version");
  const std::string rule = field("rule");
  if (rule != (config_.rule == TargetRule::double_dqn ? "double_dqn" : "classic")) {
    throw ConfigError("agent checkpoint: target rule mismatch");
  }
  config_.gamma = bcmec::detail::to_double("gamma", field("gamma"));
  config_.target_sync_period = bcmec::detail::to_uint("target_sync_period", field("target_sync_period"));
  const auto steps = bcmec::detail::to_uint("train_steps", field("train_steps"));
  field("adam_steps");
  const auto epsilon_step = bcmec::detail::to_uint("epsilon_step", field("epsilon_step"));
  auto online = nn::DenseNet::load(in);
  auto target = nn::DenseNet::load(in);
  if (online.input_size() != online_.input_size() || online.output_size() != online_.output_size()) {
    throw ConfigError("agent checkpoint: network shape mismatch");
  }
  online_ = std::move(online);
  target_ = std::move(target);
  // Moment estimates are not checkpointed; the optimizer restarts.
  adam_ = nn::make_adam_state(online_, config_.adam);
  train_steps_ = steps;
  return epsilon_step;
}

}  // namespace bcmec::agents
