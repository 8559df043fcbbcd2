#include "bcmec/nn/loss.hpp"

#include <stdexcept>

namespace bcmec::nn {

LossResult mse_loss(std::span<const double> predicted, std::span<const double> targets) {
  if (predicted.empty()) throw std::invalid_argument("mse_loss: empty batch");
  if (predicted.size() != targets.size()) throw std::invalid_argument("mse_loss: length mismatch");
  const double n = static_cast<double>(predicted.size());
  LossResult result;
  result.gradient.resize(predicted.size());
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double residual = predicted[i] - targets[i];
    result.loss += residual * residual;
    result.gradient[i] = 2.0 * residual / n;
  }
  result.loss /= n;
  return result;
}

}  // namespace bcmec::nn
