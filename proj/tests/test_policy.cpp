#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "q2sfc/policy.hpp"

using namespace q2sfc;

namespace {

// Within three standard deviations of a binomial count.
bool within_3sigma(std::size_t hits, std::size_t n, double p) {
  const double mean = n * p;
  const double sigma = std::sqrt(n * p * (1 - p));
  return std::fabs(static_cast<double>(hits) - mean) <= 3 * sigma + 1e-9;
}

}  // namespace

TEST_CASE("greedy picks the best valid action, lowest index on ties") {
  const std::vector<double> q = {1, 5, 5, 9};
  CHECK(greedy_action(q, std::vector<std::uint8_t>{1, 1, 1, 1}) == 3);
  CHECK(greedy_action(q, std::vector<std::uint8_t>{1, 1, 1, 0}) == 1);
  CHECK(greedy_action(q, std::vector<std::uint8_t>{1, 0, 0, 0}) == 0);
  CHECK_THROWS(greedy_action(q, std::vector<std::uint8_t>{0, 0, 0, 0}));
}

TEST_CASE("epsilon-greedy frequencies") {
  const std::vector<double> q = {0, 3, 1, 2};
  const std::vector<std::uint8_t> valid = {1, 1, 1, 0};
  const std::size_t n = 100'000;
  for (double eps : {0.0, 0.3, 1.0}) {
    std::mt19937_64 rng(11);
    std::vector<std::size_t> hits(4, 0);
    for (std::size_t i = 0; i < n; ++i) ++hits[epsilon_greedy_action(q, valid, eps, rng)];
    CHECK(hits[3] == 0);
    CHECK(within_3sigma(hits[1], n, 1 - eps + eps / 3));
    CHECK(within_3sigma(hits[0], n, eps / 3));
    CHECK(within_3sigma(hits[2], n, eps / 3));
  }
}

TEST_CASE("softmax frequencies follow the Boltzmann distribution") {
  const std::vector<double> q = {0.0, 0.2, 0.5, 9.0};
  const std::vector<std::uint8_t> valid = {1, 1, 1, 0};
  const std::size_t n = 100'000;
  for (double tau : {0.1, 1.0}) {
    std::vector<double> expect(3);
    double z = 0;
    for (int a = 0; a < 3; ++a) z += expect[a] = std::exp(q[a] / tau);
    for (double& e : expect) e /= z;
    const auto probs = softmax_probabilities(q, valid, tau);
    CHECK(probs[3] == 0.0);
    std::mt19937_64 rng(12);
    std::vector<std::size_t> hits(4, 0);
    for (std::size_t i = 0; i < n; ++i) ++hits[softmax_action(q, valid, tau, rng)];
    CHECK(hits[3] == 0);
    for (int a = 0; a < 3; ++a) {
      CHECK(probs[a] == doctest::Approx(expect[a]).epsilon(1e-12));
      CHECK(within_3sigma(hits[a], n, expect[a]));
    }
  }
}

TEST_CASE("softmax at vanishing temperature is the argmax") {
  const std::vector<double> q = {1.0, 1.5, 1.2};
  const std::vector<std::uint8_t> valid = {1, 1, 1};
  std::mt19937_64 rng(13);
  for (int i = 0; i < 1000; ++i) CHECK(softmax_action(q, valid, 1e-6, rng) == 1);
  const auto p = softmax_probabilities(std::vector<double>{1e6, 0}, std::span<const std::uint8_t>(valid).subspan(0, 2), 1.0);
  CHECK(p[0] == 1.0);
  CHECK(std::isfinite(p[1]));
}

TEST_CASE("ucb prefers the rarely tried instance") {
  const std::vector<double> q = {1.0, 1.0};
  const std::vector<std::uint8_t> valid = {1, 1};
  const std::vector<std::uint64_t> counts = {10, 2};
  CHECK(ucb_action(q, valid, UcbCounts{counts, 12}) == 1);
  // Unvisited actions are tried first.
  const std::vector<std::uint64_t> fresh = {4, 0};
  CHECK(ucb_action(std::vector<double>{100.0, 0.0}, valid, UcbCounts{fresh, 4}) == 1);
  // A large enough value gap overrides the bonus.
  CHECK(ucb_action(std::vector<double>{10.0, 1.0}, valid, UcbCounts{counts, 12}) == 0);
}

TEST_CASE("ucb balances equal-valued instances") {
  const std::size_t m = 4;
  const std::vector<double> q(m, 0.5);
  const std::vector<std::uint8_t> valid(m, 1);
  VisitCounter counter(1, m);
  for (int r = 0; r < 10'000; ++r) {
    const std::size_t a = ucb_action(q, valid, counter.view(0));
    counter.record(0, a);
    counter.finish_request();
  }
  std::uint64_t lo = counter.count(0, 0), hi = lo;
  for (std::size_t a = 0; a < m; ++a) {
    lo = std::min(lo, counter.count(0, a));
    hi = std::max(hi, counter.count(0, a));
  }
  CHECK(lo > 0);
  CHECK(static_cast<double>(hi) <= 1.5 * static_cast<double>(lo));
}

TEST_CASE("epsilon schedule and dispatch") {
  PolicyParams p;
  p.epsilon = 1.0;
  p.epsilon_final = 0.1;
  p.epsilon_decay_episodes = 10;
  CHECK(p.epsilon_at(0) == 1.0);
  CHECK(p.epsilon_at(5) == doctest::Approx(0.55));
  CHECK(p.epsilon_at(10) == doctest::Approx(0.1));
  CHECK(p.epsilon_at(1000) == doctest::Approx(0.1));
  p.epsilon_decay_episodes = 0;
  CHECK(p.epsilon_at(7) == 1.0);

  PolicyParams bad;
  bad.epsilon = 1.5;
  CHECK_THROWS(bad.validate());
  bad = PolicyParams{};
  bad.temperature = 0.0;
  bad.kind = PolicyKind::kSoftmax;
  CHECK_THROWS(bad.validate());

  CHECK(policy_kind_from_string("ucb") == PolicyKind::kUcb);
  CHECK(policy_kind_from_string(to_string(PolicyKind::kSoftmax)) == PolicyKind::kSoftmax);
  CHECK(policy_kind_from_string(to_string(PolicyKind::kEpsilonGreedy)) == PolicyKind::kEpsilonGreedy);
  CHECK_THROWS(policy_kind_from_string("boltzmann-ish"));

  std::mt19937_64 rng(1);
  PolicyParams ucb;
  ucb.kind = PolicyKind::kUcb;
  const std::vector<double> q = {0, 1};
  const std::vector<std::uint8_t> valid = {1, 1};
  CHECK_THROWS(select_action(q, valid, ucb, 0, rng, nullptr));
  const std::vector<std::uint64_t> counts = {0, 3};
  const UcbCounts view{counts, 3};
  CHECK(select_action(q, valid, ucb, 0, rng, &view) == 0);
  PolicyParams greedy;
  greedy.epsilon = 0.0;
  greedy.epsilon_final = 0.0;
  CHECK(select_action(q, valid, greedy, 0, rng) == 1);
}
