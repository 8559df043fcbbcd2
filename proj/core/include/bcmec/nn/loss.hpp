#pragma once

#include <span>
#include <vector>

namespace bcmec::nn {

struct LossResult {
  double loss = 0.0;
  std::vector<double> gradient;  // d(loss)/d(predicted)
};

// Mean squared error over a batch. Throws std::invalid_argument on empty or
// mismatched inputs.
LossResult mse_loss(std::span<const double> predicted, std::span<const double> targets);

}  // namespace bcmec::nn
