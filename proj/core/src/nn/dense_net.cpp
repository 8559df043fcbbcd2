#include "bcmec/nn/dense_net.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "../kv_file.hpp"
#include "bcmec/errors.hpp"
#include "bcmec/rng.hpp"

namespace bcmec::nn {

namespace {

constexpr const char* kMagic = "bcmec-densenet";
constexpr int kFormatVersion = 1;

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

bool finite_all(const std::vector<double>& values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

const char* to_string(OutputActivation activation) {
  return activation == OutputActivation::linear ? "linear" : "logistic";
}

OutputActivation output_activation_from_string(const std::string& name) {
  if (name == "linear") return OutputActivation::linear;
  if (name == "logistic" || name == "sigmoid") return OutputActivation::logistic;
  throw ConfigError("unknown output activation '" + name + "'");
}

void Gradients::zero() {
  for (auto& w : weights) std::fill(w.begin(), w.end(), 0.0);
  for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
}

void Gradients::add(const Gradients& other) {
  for (std::size_t k = 0; k < weights.size(); ++k) {
    for (std::size_t i = 0; i < weights[k].size(); ++i) weights[k][i] += other.weights[k][i];
    for (std::size_t i = 0; i < biases[k].size(); ++i) biases[k][i] += other.biases[k][i];
  }
}

bool Gradients::all_finite() const {
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!finite_all(weights[k]) || !finite_all(biases[k])) return false;
  }
  return true;
}

DenseNet::DenseNet(const std::vector<std::size_t>& layer_sizes, OutputActivation output, std::uint64_t seed)
    : output_(output) {
  if (layer_sizes.size() < 2) throw ConfigError("DenseNet: need at least input and output sizes");
  Rng rng(seed);
  for (std::size_t k = 0; k + 1 < layer_sizes.size(); ++k) {
    DenseLayer layer;
    layer.inputs = layer_sizes[k];
    layer.outputs = layer_sizes[k + 1];
    if (layer.inputs == 0 || layer.outputs == 0) throw ConfigError("DenseNet: layer sizes must be positive");
    const double stddev = std::sqrt(2.0 / static_cast<double>(layer.inputs));
    layer.weights.resize(layer.inputs * layer.outputs);
    for (auto& w : layer.weights) w = rng.normal(0.0, stddev);
    layer.biases.assign(layer.outputs, 0.0);
    layers_.push_back(std::move(layer));
  }
}

DenseNet::DenseNet(std::vector<DenseLayer> layers, OutputActivation output)
    : layers_(std::move(layers)), output_(output) {
  check_shapes();
}

void DenseNet::check_shapes() const {
  if (layers_.empty()) throw ConfigError("DenseNet: no layers");
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const auto& layer = layers_[k];
    if (layer.inputs == 0 || layer.outputs == 0 || layer.weights.size() != layer.inputs * layer.outputs ||
        layer.biases.size() != layer.outputs) {
      throw ConfigError("DenseNet: layer " + std::to_string(k) + " has inconsistent shape");
    }
    if (k > 0 && layer.inputs != layers_[k - 1].outputs) {
      throw ConfigError("DenseNet: layer " + std::to_string(k) + " input does not match previous output");
    }
  }
}

std::vector<double> DenseNet::forward(std::span<const double> input) const {
  ForwardCache cache;
  return forward(input, cache);
}

std::vector<double> DenseNet::forward(std::span<const double> input, ForwardCache& cache) const {
  if (input.size() != input_size()) {
    throw ConfigError("DenseNet::forward: expected input of size " + std::to_string(input_size()) + ", got " +
                      std::to_string(input.size()));
  }
  cache.activations.resize(layers_.size() + 1);
  cache.pre_activations.resize(layers_.size());
  cache.activations[0].assign(input.begin(), input.end());
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const auto& layer = layers_[k];
    const auto& x = cache.activations[k];
    auto& z = cache.pre_activations[k];
    auto& a = cache.activations[k + 1];
    z.assign(layer.biases.begin(), layer.biases.end());
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      const double* row = layer.weights.data() + o * layer.inputs;
      double sum = 0.0;
      for (std::size_t i = 0; i < layer.inputs; ++i) sum += row[i] * x[i];
      z[o] += sum;
    }
    a.resize(layer.outputs);
    const bool last = k + 1 == layers_.size();
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      if (!last) {
        a[o] = z[o] > 0.0 ? z[o] : 0.0;
      } else {
        a[o] = output_ == OutputActivation::linear ? z[o] : logistic(z[o]);
      }
    }
  }
  return cache.activations.back();
}

void DenseNet::backward(const ForwardCache& cache, std::span<const double> output_grad, Gradients& grads) const {
  if (output_grad.size() != output_size()) throw ConfigError("DenseNet::backward: output gradient size mismatch");
  // delta = d(loss)/d(pre-activation) of the current layer
  std::vector<double> delta(output_grad.begin(), output_grad.end());
  if (output_ == OutputActivation::logistic) {
    const auto& y = cache.activations.back();
    for (std::size_t o = 0; o < delta.size(); ++o) delta[o] *= y[o] * (1.0 - y[o]);
  }
  for (std::size_t k = layers_.size(); k-- > 0;) {
    const auto& layer = layers_[k];
    const auto& x = cache.activations[k];
    auto& gw = grads.weights[k];
    auto& gb = grads.biases[k];
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      const double d = delta[o];
      gb[o] += d;
      if (d == 0.0) continue;
      double* row = gw.data() + o * layer.inputs;
      for (std::size_t i = 0; i < layer.inputs; ++i) row[i] += d * x[i];
    }
    if (k == 0) break;
    std::vector<double> prev(layer.inputs, 0.0);
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      const double* row = layer.weights.data() + o * layer.inputs;
      for (std::size_t i = 0; i < layer.inputs; ++i) prev[i] += d * row[i];
    }
    const auto& z = cache.pre_activations[k - 1];
    for (std::size_t i = 0; i < prev.size(); ++i) {
      if (!(z[i] > 0.0)) prev[i] = 0.0;
    }
    delta = std::move(prev);
  }
}

Gradients DenseNet::backward(const ForwardCache& cache, std::span<const double> output_grad) const {
  Gradients grads = zero_gradients();
  backward(cache, output_grad, grads);
  return grads;
}

Gradients DenseNet::zero_gradients() const {
  Gradients grads;
  for (const auto& layer : layers_) {
    grads.weights.emplace_back(layer.weights.size(), 0.0);
    grads.biases.emplace_back(layer.biases.size(), 0.0);
  }
  return grads;
}

std::size_t DenseNet::parameter_count() const {
  std::size_t count = 0;
  for (const auto& layer : layers_) count += layer.weights.size() + layer.biases.size();
  return count;
}

bool DenseNet::all_finite() const {
  for (const auto& layer : layers_) {
    if (!finite_all(layer.weights) || !finite_all(layer.biases)) return false;
  }
  return true;
}

void DenseNet::save(std::ostream& out) const {
  using bcmec::detail::format_double;
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "output " << to_string(output_) << '\n';
  out << "layers " << layers_.size() << '\n';
  for (const auto& layer : layers_) {
    out << "layer " << layer.inputs << ' ' << layer.outputs << '\n';
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      for (std::size_t i = 0; i < layer.inputs; ++i) {
        if (i) out << ' ';
        out << format_double(layer.weights[o * layer.inputs + i]);
      }
      out << '\n';
    }
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      if (o) out << ' ';
      out << format_double(layer.biases[o]);
    }
    out << '\n';
  }
}

DenseNet DenseNet::load(std::istream& in) {
  auto expect = [&](const std::string& word) {
    std::string token;
    if (!(in >> token) || token != word) throw ConfigError("DenseNet::load: expected '" + word + "'");
  };
  auto number = [&]() {
    std::string token;
    if (!(in >> token)) throw ConfigError("DenseNet::load: truncated checkpoint");
    return bcmec::detail::to_double("checkpoint", token);
  };
  expect(kMagic);
  int version = 0;
  if (!(in >> version) || version != kFormatVersion) throw ConfigError("DenseNet::load: unsupported version");
  expect("output");
  std::string activation;
  in >> activation;
  const OutputActivation output = output_activation_from_string(activation);
  expect("layers");
  std::size_t count = 0;
  if (!(in >> count) || count == 0) throw ConfigError("DenseNet::load: bad layer count");
  std::vector<DenseLayer> layers(count);
  for (auto& layer : layers) {
    expect("layer");
    if (!(in >> layer.inputs >> layer.outputs)) throw ConfigError("DenseNet::load: bad layer shape");
    layer.weights.resize(layer.inputs * layer.outputs);
    for (auto& w : layer.weights) w = number();
    layer.biases.resize(layer.outputs);
    for (auto& b : layer.biases) b = number();
  }
  return DenseNet(std::move(layers), output);
}

}  // namespace bcmec::nn
