#include "eierl/replay.hpp"

#include <numeric>
#include <stdexcept>

namespace eierl {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0)
    throw std::invalid_argument("ReplayBuffer: capacity must be positive");
}

void ReplayBuffer::push(Transition t) {
  if (storage_.size() == capacity_) storage_.pop_front();
  storage_.push_back(std::move(t));
}

std::size_t ReplayBuffer::push_subsampled(std::span<const Transition> transitions,
                                          int M, Rng& rng) {
  if (M < 1) throw std::invalid_argument("push_subsampled: M must be >= 1");
  const double accept = 1.0 / static_cast<double>(M);
  std::size_t stored = 0;
  for (const Transition& t : transitions) {
    if (uniform01(rng) < accept) {
      push(t);
      ++stored;
    }
  }
  return stored;
}

std::vector<Transition> ReplayBuffer::sample_minibatch(std::size_t batch_size,
                                                       Rng& rng) const {
  if (storage_.size() < batch_size)
    throw std::invalid_argument("sample_minibatch: buffer underfull");
  std::vector<std::size_t> idx(storage_.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<Transition> batch;
  batch.reserve(batch_size);
  // Partial Fisher-Yates: the first batch_size slots become a uniform draw
  // without replacement.
  for (std::size_t i = 0; i < batch_size; ++i) {
    const std::size_t j = i + uniform_index(rng, idx.size() - i);
    std::swap(idx[i], idx[j]);
    batch.push_back(storage_[idx[i]]);
  }
  return batch;
}

}  // namespace eierl
