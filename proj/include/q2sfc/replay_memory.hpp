#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "q2sfc/sfc_env.hpp"

namespace q2sfc {

// Fixed-capacity ring buffer of transitions; once full, each push evicts
// the oldest entry.
class ReplayMemory {
 public:
  explicit ReplayMemory(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("replay memory capacity must be positive");
    items_.reserve(capacity);
  }

  void push(Transition t) {
    if (items_.size() < capacity_) {
      items_.push_back(std::move(t));
    } else {
      items_[head_] = std::move(t);
    }
    head_ = (head_ + 1) % capacity_;
    ++pushed_;
  }

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return items_.empty(); }
  std::uint64_t total_pushed() const { return pushed_; }

  // i = 0 is the oldest stored transition.
  const Transition& at(std::size_t i) const {
    if (i >= items_.size()) throw std::out_of_range("replay memory index");
    return items_.size() < capacity_ ? items_[i] : items_[(head_ + i) % capacity_];
  }

  // Uniform draw with replacement.
  std::vector<const Transition*> sample(std::size_t n, std::mt19937_64& rng) const {
    if (items_.empty()) throw std::logic_error("sampling from an empty replay memory");
    std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
    std::vector<const Transition*> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(&items_[pick(rng)]);
    return out;
  }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::uint64_t pushed_ = 0;
  std::vector<Transition> items_;
};

}  // namespace q2sfc
