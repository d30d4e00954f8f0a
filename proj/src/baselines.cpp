#include "q2sfc/baselines.hpp"

#include <chrono>
#include <limits>

namespace q2sfc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::size_t> spare_snapshot(const OverlayGraph& g) {
  std::vector<std::size_t> spare;
  spare.reserve(g.servers().size());
  for (const auto& s : g.servers()) spare.push_back(s.spare_slots);
  return spare;
}

class ExhaustiveSearch {
 public:
  ExhaustiveSearch(const SfcRequest& request, const OverlayGraph& g, const QoeParams& qoe)
      : request_(request), g_(g), qoe_(qoe), spare_(spare_snapshot(g)) {}

  void run() {
    path_.reserve(request_.length());
    descend(QosMetrics{});
  }

  SearchReport report() && {
    SearchReport out;
    out.chains_examined = examined_;
    if (best_) {
      out.chain = std::move(best_);
      out.qoe = out.chain->qoe;
      out.complete = true;
      out.feasible = true;
    } else {
      out.complete = examined_ > 0;
    }
    return out;
  }

 private:
  void descend(const QosMetrics& prefix) {
    const std::size_t pos = path_.size();
    if (pos == request_.length()) {
      leaf(prefix);
      return;
    }
    const std::optional<std::size_t> current =
        path_.empty() ? std::nullopt : std::optional<std::size_t>(path_.back().instance);
    const std::size_t type = request_.functions[pos];
    for (std::size_t k : successors(g_, current, type, spare_)) {
      const auto& inst = g_.instances()[k];
      QosMetrics next = prefix;
      if (current) next = compose(next, g_.hop_qos(*current, k));
      next = compose(next, inst.node_qos);
      const bool potential = inst.status == InstanceStatus::kPotential;
      if (potential) spare_[inst.server] -= 1;
      path_.push_back(Selection{k, type, potential});
      descend(next);
      path_.pop_back();
      if (potential) spare_[inst.server] += 1;
    }
  }

  void leaf(const QosMetrics& qos) {
    ++examined_;
    const QosVector v = qos.to_vector();
    if (violates_constraints(v, request_.qcon, kPositiveMetricCount)) return;
    const double q = chain_qoe(v, qoe_);
    // Strict comparison keeps the first, i.e. lexicographically smallest, chain on ties.
    if (best_ && !(q > best_->qoe)) return;
    Chain c;
    c.selections = path_;
    c.qos = v;
    c.qoe = q;
    best_ = std::move(c);
  }

  const SfcRequest& request_;
  const OverlayGraph& g_;
  const QoeParams& qoe_;
  std::vector<std::size_t> spare_;
  std::vector<Selection> path_;
  std::optional<Chain> best_;
  std::uint64_t examined_ = 0;
};

}  // namespace

SearchReport random_chain(const SfcRequest& request, const OverlayGraph& g, std::mt19937_64& rng,
                          const QoeParams& qoe) {
  const auto start = Clock::now();
  SearchReport out;
  std::vector<std::size_t> spare = spare_snapshot(g);
  Chain chain;
  QosMetrics acc;
  std::optional<std::size_t> current;
  for (std::size_t type : request.functions) {
    const auto options = successors(g, current, type, spare);
    if (options.empty()) {
      out.wall_time_s = seconds_since(start);
      return out;
    }
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    const std::size_t k = options[pick(rng)];
    const auto& inst = g.instances()[k];
    if (current) acc = compose(acc, g.hop_qos(*current, k));
    acc = compose(acc, inst.node_qos);
    const bool potential = inst.status == InstanceStatus::kPotential;
    if (potential) spare[inst.server] -= 1;
    chain.selections.push_back(Selection{k, type, potential});
    current = k;
  }
  chain.qos = acc.to_vector();
  chain.qoe = chain_qoe(chain.qos, qoe);
  out.qoe = chain.qoe;
  out.complete = true;
  out.feasible = !violates_constraints(chain.qos, request.qcon, kPositiveMetricCount);
  out.chains_examined = 1;
  out.chain = std::move(chain);
  out.wall_time_s = seconds_since(start);
  return out;
}

std::uint64_t enumeration_size(const SfcRequest& request, const OverlayGraph& g) {
  std::uint64_t total = 1;
  for (std::size_t type : request.functions) {
    const std::uint64_t m = g.types().at(type).instance_count;
    if (m == 0) return 0;
    if (total > std::numeric_limits<std::uint64_t>::max() / m) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= m;
  }
  return total;
}

SearchReport violent_search(const SfcRequest& request, const OverlayGraph& g, const QoeParams& qoe,
                            std::uint64_t cap) {
  const std::uint64_t size = enumeration_size(request, g);
  if (size > cap) {
    throw EnumerationCapExceeded("exhaustive search would examine up to " + std::to_string(size) +
                                 " chains, cap is " + std::to_string(cap));
  }
  const auto start = Clock::now();
  ExhaustiveSearch search(request, g, qoe);
  search.run();
  SearchReport out = std::move(search).report();
  out.wall_time_s = seconds_since(start);
  return out;
}

}  // namespace q2sfc
