#include "q2sfc/q_network.hpp"

#include <algorithm>
#include <cmath>

namespace q2sfc {

QNetwork::QNetwork(std::vector<std::size_t> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw ShapeError("QNetwork needs an input and an output layer");
  if (std::any_of(sizes_.begin(), sizes_.end(), [](std::size_t n) { return n == 0; })) {
    throw ShapeError("QNetwork layer sizes must be positive");
  }
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(total);
    total += sizes_[l] * sizes_[l + 1] + sizes_[l + 1];
  }
  params_.assign(total, 0.0);
}

QNetwork QNetwork::random(std::vector<std::size_t> layer_sizes, std::mt19937_64& rng) {
  QNetwork net(std::move(layer_sizes));
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(net.sizes_[l]));
    std::uniform_real_distribution<double> dist(-bound, bound);
    const std::size_t begin = net.offsets_[l];
    const std::size_t end = begin + net.sizes_[l] * net.sizes_[l + 1] + net.sizes_[l + 1];
    for (std::size_t i = begin; i < end; ++i) net.params_[i] = dist(rng);
  }
  return net;
}

double& QNetwork::weight(std::size_t layer, std::size_t out, std::size_t in) {
  return params_[weight_offset(layer) + out * sizes_[layer] + in];
}

double QNetwork::weight(std::size_t layer, std::size_t out, std::size_t in) const {
  return params_[weight_offset(layer) + out * sizes_[layer] + in];
}

double& QNetwork::bias(std::size_t layer, std::size_t out) { return params_[bias_offset(layer) + out]; }

double QNetwork::bias(std::size_t layer, std::size_t out) const {
  return params_[bias_offset(layer) + out];
}

std::vector<std::vector<double>> QNetwork::forward_trace(std::span<const double> input) const {
  if (sizes_.empty()) throw ShapeError("forward on an empty network");
  if (input.size() != sizes_.front()) {
    throw ShapeError("input width " + std::to_string(input.size()) + " does not match " +
                     std::to_string(sizes_.front()));
  }
  std::vector<std::vector<double>> acts;
  acts.reserve(sizes_.size());
  acts.emplace_back(input.begin(), input.end());
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const std::size_t n_in = sizes_[l];
    const std::size_t n_out = sizes_[l + 1];
    const double* w = params_.data() + weight_offset(l);
    const double* b = params_.data() + bias_offset(l);
    const std::vector<double>& x = acts.back();
    std::vector<double> y(n_out);
    const bool hidden = l + 1 < layer_count();
    for (std::size_t o = 0; o < n_out; ++o) {
      double sum = b[o];
      const double* row = w + o * n_in;
      for (std::size_t i = 0; i < n_in; ++i) sum += row[i] * x[i];
      y[o] = hidden ? std::max(sum, 0.0) : sum;
    }
    acts.push_back(std::move(y));
  }
  return acts;
}

std::vector<double> QNetwork::forward(std::span<const double> input) const {
  return std::move(forward_trace(input).back());
}

void sync_target(const QNetwork& net, QNetwork& target) {
  if (!net.same_shape(target)) throw ShapeError("target network shape differs from Q-network");
  std::copy(net.parameters().begin(), net.parameters().end(), target.parameters().begin());
}

double td_loss(const QNetwork& net, std::span<const TdSample> batch) {
  if (batch.empty()) throw std::invalid_argument("td_loss: empty batch");
  double loss = 0.0;
  for (const auto& s : batch) {
    const double err = s.target - net.forward(s.state).at(s.action);
    loss += err * err;
  }
  return loss / static_cast<double>(batch.size());
}

double td_loss_and_gradient(const QNetwork& net, std::span<const TdSample> batch,
                            std::vector<double>& gradient) {
  if (batch.empty()) throw std::invalid_argument("td_loss_and_gradient: empty batch");
  const auto& sizes = net.layer_sizes();
  const std::size_t layers = net.layer_count();
  gradient.assign(net.parameters().size(), 0.0);
  const double inv_batch = 1.0 / static_cast<double>(batch.size());

  // Offsets mirror QNetwork's flat layout.
  std::vector<std::size_t> w_off(layers), b_off(layers);
  for (std::size_t l = 0, off = 0; l < layers; ++l) {
    w_off[l] = off;
    b_off[l] = off + sizes[l] * sizes[l + 1];
    off = b_off[l] + sizes[l + 1];
  }

  const auto params = net.parameters();
  double loss = 0.0;
  std::vector<double> delta, prev_delta;
  for (const auto& sample : batch) {
    if (sample.action >= net.output_width()) throw ShapeError("action index out of range");
    const auto acts = net.forward_trace(sample.state);
    const double err = sample.target - acts.back()[sample.action];
    loss += err * err;

    delta.assign(sizes[layers], 0.0);
    delta[sample.action] = -2.0 * err * inv_batch;
    for (std::size_t l = layers; l-- > 0;) {
      const std::size_t n_in = sizes[l];
      const std::size_t n_out = sizes[l + 1];
      const std::vector<double>& x = acts[l];
      for (std::size_t o = 0; o < n_out; ++o) {
        const double d = delta[o];
        if (d == 0.0) continue;
        double* gw = gradient.data() + w_off[l] + o * n_in;
        for (std::size_t i = 0; i < n_in; ++i) gw[i] += d * x[i];
        gradient[b_off[l] + o] += d;
      }
      if (l == 0) break;
      prev_delta.assign(n_in, 0.0);
      for (std::size_t o = 0; o < n_out; ++o) {
        const double d = delta[o];
        if (d == 0.0) continue;
        const double* row = params.data() + w_off[l] + o * n_in;
        for (std::size_t i = 0; i < n_in; ++i) prev_delta[i] += row[i] * d;
      }
      // Rectifier derivative: the stored activation is positive iff the unit fired.
      for (std::size_t i = 0; i < n_in; ++i) {
        if (x[i] <= 0.0) prev_delta[i] = 0.0;
      }
      delta.swap(prev_delta);
    }
  }
  return loss * inv_batch;
}

}  // namespace q2sfc
