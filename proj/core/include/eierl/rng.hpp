#pragma once

#include <cstdint>
#include <random>

namespace eierl {

using Rng = std::mt19937_64;

/// Derives an independent generator from (seed, stream tags). Runs that must
/// not perturb each other (training vs. test rollouts, per-seed jobs) each get
/// their own stream.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0,
                    std::uint64_t substream = 0) {
  std::seed_seq seq{seed, stream, substream, std::uint64_t{0x9e3779b97f4a7c15}};
  return Rng(seq);
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

/// Uniform integer in [0, n). n must be positive.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double normal(Rng& rng, double mean, double stddev) {
  return std::normal_distribution<double>(mean, stddev)(rng);
}

}  // namespace eierl
