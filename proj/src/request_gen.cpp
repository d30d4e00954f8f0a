#include "q2sfc/request_gen.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "q2sfc/baselines.hpp"

namespace q2sfc {

RequestGenerator::RequestGenerator(const OverlayGraph& g, QoeParams qoe, RequestGenConfig config,
                                   std::uint64_t seed)
    : g_(g), qoe_(std::move(qoe)), config_(config), rng_(seed) {
  const std::size_t types = g_.types().size();
  if (config_.max_length == 0 || config_.max_length > types) config_.max_length = types;
  if (config_.min_length == 0 || config_.min_length > config_.max_length) {
    throw std::invalid_argument("request generator: need 1 <= min_length <= max_length <= types");
  }
  if (config_.slack_min < 0.0 || config_.slack_max < config_.slack_min || config_.slack_max >= 1.0) {
    throw std::invalid_argument("request generator: need 0 <= slack_min <= slack_max < 1");
  }
}

SfcRequest RequestGenerator::next() {
  std::uniform_int_distribution<std::size_t> length_dist(config_.min_length, config_.max_length);
  std::uniform_real_distribution<double> slack_dist(config_.slack_min, config_.slack_max);
  std::vector<std::size_t> all(g_.types().size());
  std::iota(all.begin(), all.end(), 0);

  for (std::size_t attempt = 0; attempt < config_.max_attempts; ++attempt) {
    SfcRequest req;
    const std::size_t n = length_dist(rng_);
    std::sample(all.begin(), all.end(), std::back_inserter(req.functions), n, rng_);

    const SearchReport reference = random_chain(req, g_, rng_, qoe_);
    if (!reference.complete) continue;
    const QosVector& ref = reference.chain->qos;
    for (std::size_t t = 0; t < kMetricCount; ++t) {
      const double u = slack_dist(rng_);
      req.qcon[t] = t < kPositiveMetricCount ? ref[t] * (1.0 - u) : ref[t] * (1.0 + u);
    }
    if (enumeration_size(req, g_) <= config_.verify_cap) {
      if (!violent_search(req, g_, qoe_, config_.verify_cap).feasible) continue;
    }
    return req;
  }
  throw std::runtime_error("request generator: no feasible request after " +
                           std::to_string(config_.max_attempts) + " attempts");
}

std::vector<SfcRequest> RequestGenerator::batch(std::size_t count) {
  std::vector<SfcRequest> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(next());
  return out;
}

}  // namespace q2sfc
