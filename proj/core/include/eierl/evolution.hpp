#pragma once

#include <cstdint>
#include <vector>

#include "eierl/network.hpp"

namespace eierl {

struct EvoConfig {
  int pop_size = 3;             // m
  double elite_fraction = 0.2;  // psi; elites e = max(1, floor(psi * m))
  int tournament_size = 3;      // k
  double mut_prob = 0.9;        // chance an offspring is mutated at all
  double mut_frac = 0.05;       // mutation events per matrix: floor(mut_frac * |M|)
  double supermut_prob = 0.03;
  double reset_prob = 0.02;
  double mut_strength = 0.1;    // sigma
};

void validate_evo_config(const EvoConfig& cfg);

struct RankResult {
  std::vector<int> elite_indices;  // best e, ties to the lower index
  std::vector<int> ranked;         // all indices, best first
};

/// e = max(1, floor(elite_fraction * m)). Ties broken by lower index.
/// Throws std::invalid_argument on an empty population.
RankResult rank_and_elites(const std::vector<double>& fitnesses,
                           double elite_fraction);

/// k uniform draws with replacement; the max-fitness draw wins, lower index
/// on ties.
int tournament_select(const std::vector<double>& fitnesses, int k, Rng& rng);

/// Per hidden-unit row crossover: each weight-matrix row and its matching
/// bias entry comes from parent_a or parent_b with probability 1/2.
PolicyGenome crossover(const PolicyGenome& parent_a, const PolicyGenome& parent_b,
                       Rng& rng);

/// Branch and moment instrumentation for the mutation operator.
struct MutationStats {
  std::int64_t events = 0;
  std::int64_t super_branch = 0;
  std::int64_t reset_branch = 0;
  std::int64_t normal_branch = 0;
  double normal_noise_sum = 0.0;    // raw N(0, sigma) draws of the normal branch
  double normal_noise_sumsq = 0.0;
};

/// Three-branch point mutation over the weight matrices (biases untouched).
/// Gated by one uniform draw against mut_prob; when the gate stays closed the
/// genome is returned unchanged. Each event picks a uniform cell (with
/// replacement) and one branch:
///   u < supermut_prob               -> w += w * N(0, 100 * sigma)
///   u < supermut_prob + reset_prob  -> w  = N(0, 1)
///   otherwise                       -> w += w * N(0, sigma)
PolicyGenome mutate(const PolicyGenome& genome, const EvoConfig& cfg, Rng& rng,
                    MutationStats* stats = nullptr);

/// One generation: elites copied bit-exactly, remaining m - e slots filled by
/// crossover of a random elite with a tournament-selected parent, then
/// mutation. Throws if the population is smaller than 2 or sizes disagree.
std::vector<PolicyGenome> evolve(const std::vector<PolicyGenome>& pop,
                                 const std::vector<double>& fitnesses,
                                 const EvoConfig& cfg, Rng& rng);

/// Same generation step over a parent pool that may be larger than the
/// produced population (the EA population is bred from EA and DRL
/// individuals together). Emits cfg.pop_size genomes; elite count is
/// max(1, floor(elite_fraction * cfg.pop_size)), ranked over the whole pool.
std::vector<PolicyGenome> evolve_pool(const std::vector<PolicyGenome>& pool,
                                      const std::vector<double>& fitnesses,
                                      const EvoConfig& cfg, Rng& rng);

}  // namespace eierl
