#pragma once

#include <cstdint>

#include "bcmec/nn/dense_net.hpp"

namespace bcmec::nn {

struct AdamConfig {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamConfig config;
  std::uint64_t step = 0;
  Gradients first_moment;
  Gradients second_moment;
};

AdamState make_adam_state(const DenseNet& net, AdamConfig config = {});

// Bias-corrected Adam update. Throws TrainingDiverged on a non-finite
// gradient, leaving net and state untouched.
void adam_step(DenseNet& net, const Gradients& grads, AdamState& state);

}  // namespace bcmec::nn
