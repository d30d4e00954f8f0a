#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace q2sfc {

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Fully connected Q-value approximator: rectifier on hidden layers, identity
// on the output layer. All weights and biases live in one flat array, layer
// by layer, each layer storing its (out x in) row-major weight matrix before
// its bias vector.
class QNetwork {
 public:
  QNetwork() = default;
  // Zero-initialized parameters.
  explicit QNetwork(std::vector<std::size_t> layer_sizes);
  // Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] for weights and biases.
  static QNetwork random(std::vector<std::size_t> layer_sizes, std::mt19937_64& rng);

  const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
  std::size_t input_width() const { return sizes_.front(); }
  std::size_t output_width() const { return sizes_.back(); }
  std::size_t layer_count() const { return sizes_.size() - 1; }

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }

  double& weight(std::size_t layer, std::size_t out, std::size_t in);
  double weight(std::size_t layer, std::size_t out, std::size_t in) const;
  double& bias(std::size_t layer, std::size_t out);
  double bias(std::size_t layer, std::size_t out) const;

  std::vector<double> forward(std::span<const double> input) const;

  bool same_shape(const QNetwork& other) const { return sizes_ == other.sizes_; }

  // Activations of every layer for one input, input included. Hidden
  // entries are post-rectifier.
  std::vector<std::vector<double>> forward_trace(std::span<const double> input) const;

 private:
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const {
    return offsets_[layer] + sizes_[layer] * sizes_[layer + 1];
  }

  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

// theta_minus <- theta. Throws ShapeError on mismatch.
void sync_target(const QNetwork& net, QNetwork& target);

// One regression sample of the TD loss: push Q(state)[action] towards target.
struct TdSample {
  std::span<const double> state;
  std::size_t action = 0;
  double target = 0.0;
};

// Mean squared TD error over the batch and its gradient with respect to
// every parameter (same flat layout as QNetwork::parameters()). Only the
// chosen action's output unit carries error.
double td_loss_and_gradient(const QNetwork& net, std::span<const TdSample> batch,
                            std::vector<double>& gradient);
double td_loss(const QNetwork& net, std::span<const TdSample> batch);

// Versioned binary checkpoint with an FNV-1a checksum trailer.
void save_checkpoint(std::ostream& out, const QNetwork& net);
QNetwork load_checkpoint(std::istream& in);
void save_checkpoint(const std::string& path, const QNetwork& net);
QNetwork load_checkpoint(const std::string& path);

}  // namespace q2sfc
