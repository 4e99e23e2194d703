#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include "eierl/rng.hpp"

namespace eierl {

struct Transition {
  std::vector<double> s;
  int a = 0;
  double r = 0.0;
  std::vector<double> s_next;
  bool done = false;
};

/// Bounded FIFO experience store, oldest-first eviction.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 5000);

  void push(Transition t);

  /// Stores each transition independently with probability 1/M (the
  /// population subsampling rule). Returns the number stored.
  /// Throws std::invalid_argument if M < 1.
  std::size_t push_subsampled(std::span<const Transition> transitions, int M,
                              Rng& rng);

  /// Uniform sample without replacement within one minibatch.
  /// Throws std::invalid_argument if the buffer holds fewer than batch_size.
  std::vector<Transition> sample_minibatch(std::size_t batch_size, Rng& rng) const;

  std::size_t size() const { return storage_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return storage_.empty(); }
  const Transition& operator[](std::size_t i) const { return storage_[i]; }

 private:
  std::size_t capacity_;
  std::deque<Transition> storage_;
};

}  // namespace eierl
