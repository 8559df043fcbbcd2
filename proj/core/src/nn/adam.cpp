#include "bcmec/nn/adam.hpp"

#include <cmath>

#include "bcmec/errors.hpp"

namespace bcmec::nn {

AdamState make_adam_state(const DenseNet& net, AdamConfig config) {
  AdamState state;
  state.config = config;
  state.first_moment = net.zero_gradients();
  state.second_moment = net.zero_gradients();
  return state;
}

namespace {

void update(std::vector<double>& params, const std::vector<double>& grad, std::vector<double>& m,
            std::vector<double>& v, const AdamConfig& c, double correction1, double correction2) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * grad[i];
    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * grad[i] * grad[i];
    const double m_hat = m[i] / correction1;
    const double v_hat = v[i] / correction2;
    params[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
  }
}

}  // namespace

void adam_step(DenseNet& net, const Gradients& grads, AdamState& state) {
  if (!grads.all_finite()) throw TrainingDiverged("adam_step: non-finite gradient");
  auto& layers = net.mutable_layers();
  if (grads.weights.size() != layers.size() || state.first_moment.weights.size() != layers.size()) {
    throw ConfigError("adam_step: gradient shape does not match network");
  }
  state.step += 1;
  const auto& c = state.config;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t k = 0; k < layers.size(); ++k) {
    update(layers[k].weights, grads.weights[k], state.first_moment.weights[k], state.second_moment.weights[k], c,
           correction1, correction2);
    update(layers[k].biases, grads.biases[k], state.first_moment.biases[k], state.second_moment.biases[k], c,
           correction1, correction2);
  }
}

}  // namespace bcmec::nn
