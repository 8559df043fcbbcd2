#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace bcmec::nn {

enum class OutputActivation { linear, logistic };

const char* to_string(OutputActivation activation);
OutputActivation output_activation_from_string(const std::string& name);

struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;  // row-major, outputs x inputs
  std::vector<double> biases;

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

// Per-layer gradient (or optimizer moment) buffers shaped like a DenseNet.
struct Gradients {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;

  void zero();
  void add(const Gradients& other);
  bool all_finite() const;
};

// Intermediate values of one forward pass, needed by backward().
struct ForwardCache {
  std::vector<std::vector<double>> activations;      // [0] is the input
  std::vector<std::vector<double>> pre_activations;  // one per layer
};

// Fully connected network, rectifier hidden layers, linear or logistic head.
class DenseNet {
 public:
  // He-initialized weights, zero biases. layer_sizes = {in, h1, ..., out}.
  DenseNet(const std::vector<std::size_t>& layer_sizes, OutputActivation output, std::uint64_t seed);
  DenseNet(std::vector<DenseLayer> layers, OutputActivation output);

  std::vector<double> forward(std::span<const double> input) const;
  std::vector<double> forward(std::span<const double> input, ForwardCache& cache) const;

  // Adds d(loss)/d(parameters) into `grads`, given d(loss)/d(output) for the
  // pass recorded in `cache`.
  void backward(const ForwardCache& cache, std::span<const double> output_grad, Gradients& grads) const;
  Gradients backward(const ForwardCache& cache, std::span<const double> output_grad) const;

  Gradients zero_gradients() const;

  std::size_t input_size() const { return layers_.front().inputs; }
  std::size_t output_size() const { return layers_.back().outputs; }
  std::size_t parameter_count() const;
  OutputActivation output_activation() const { return output_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& mutable_layers() { return layers_; }

  bool all_finite() const;

  // Text checkpoint: header, then per layer its shape, weight rows and bias
  // row, all in shortest round-trip decimal.
  void save(std::ostream& out) const;
  static DenseNet load(std::istream& in);

  friend bool operator==(const DenseNet&, const DenseNet&) = default;

 private:
  void check_shapes() const;

  std::vector<DenseLayer> layers_;
  OutputActivation output_ = OutputActivation::linear;
};

}  // namespace bcmec::nn
