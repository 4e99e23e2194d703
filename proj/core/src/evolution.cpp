#include "eierl/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace eierl {

void validate_evo_config(const EvoConfig& cfg) {
  if (cfg.pop_size < 2)
    throw std::invalid_argument("evo config: pop_size must be >= 2");
  if (cfg.elite_fraction <= 0.0 || cfg.elite_fraction >= 1.0)
    throw std::invalid_argument("evo config: elite_fraction must be in (0, 1)");
  if (cfg.tournament_size < 1)
    throw std::invalid_argument("evo config: tournament_size must be >= 1");
  for (double p : {cfg.mut_prob, cfg.mut_frac, cfg.supermut_prob, cfg.reset_prob}) {
    if (p < 0.0 || p > 1.0)
      throw std::invalid_argument("evo config: probabilities must be in [0, 1]");
  }
  if (cfg.supermut_prob + cfg.reset_prob > 1.0)
    throw std::invalid_argument(
        "evo config: supermut_prob + reset_prob must not exceed 1");
  if (cfg.mut_strength <= 0.0)
    throw std::invalid_argument("evo config: mut_strength must be positive");
}

RankResult rank_and_elites(const std::vector<double>& fitnesses,
                           double elite_fraction) {
  const int m = static_cast<int>(fitnesses.size());
  if (m == 0) throw std::invalid_argument("rank_and_elites: empty population");
  RankResult out;
  out.ranked.resize(fitnesses.size());
  std::iota(out.ranked.begin(), out.ranked.end(), 0);
  std::stable_sort(out.ranked.begin(), out.ranked.end(), [&](int a, int b) {
    return fitnesses[static_cast<std::size_t>(a)] >
           fitnesses[static_cast<std::size_t>(b)];
  });
  const int e = std::max(
      1, static_cast<int>(std::floor(elite_fraction * static_cast<double>(m))));
  out.elite_indices.assign(out.ranked.begin(),
                           out.ranked.begin() + std::min(e, m));
  return out;
}

int tournament_select(const std::vector<double>& fitnesses, int k, Rng& rng) {
  if (fitnesses.empty())
    throw std::invalid_argument("tournament_select: empty population");
  if (k < 1) throw std::invalid_argument("tournament_select: k must be >= 1");
  int best = static_cast<int>(uniform_index(rng, fitnesses.size()));
  for (int i = 1; i < k; ++i) {
    const int cand = static_cast<int>(uniform_index(rng, fitnesses.size()));
    const double fc = fitnesses[static_cast<std::size_t>(cand)];
    const double fb = fitnesses[static_cast<std::size_t>(best)];
    if (fc > fb || (fc == fb && cand < best)) best = cand;
  }
  return best;
}

PolicyGenome crossover(const PolicyGenome& parent_a, const PolicyGenome& parent_b,
                       Rng& rng) {
  if (parent_a.shape != parent_b.shape)
    throw std::invalid_argument("crossover: parent shapes differ");
  PolicyGenome child = parent_a;
  const NetworkShape& s = child.shape;
  for (int l = 0; l < s.num_layers(); ++l) {
    const int rows = s.fan_out(l);
    const int cols = s.fan_in(l);
    for (int r = 0; r < rows; ++r) {
      if (uniform01(rng) < 0.5) continue;  // keep parent_a's row
      const std::size_t w0 = s.weight_index(l, r, 0);
      std::copy(parent_b.params.begin() + static_cast<std::ptrdiff_t>(w0),
                parent_b.params.begin() + static_cast<std::ptrdiff_t>(w0 + cols),
                child.params.begin() + static_cast<std::ptrdiff_t>(w0));
      const std::size_t bi = s.bias_index(l, r);
      child.params[bi] = parent_b.params[bi];
    }
  }
  return child;
}

PolicyGenome mutate(const PolicyGenome& genome, const EvoConfig& cfg, Rng& rng,
                    MutationStats* stats) {
  validate_evo_config(cfg);
  PolicyGenome out = genome;
  if (uniform01(rng) >= cfg.mut_prob) return out;

  const NetworkShape& s = out.shape;
  for (int l = 0; l < s.num_layers(); ++l) {
    const std::size_t cells =
        static_cast<std::size_t>(s.fan_in(l)) * s.fan_out(l);
    const std::size_t events = static_cast<std::size_t>(
        std::floor(cfg.mut_frac * static_cast<double>(cells)));
    const std::size_t w0 = s.weight_offset(l);
    for (std::size_t e = 0; e < events; ++e) {
      const std::size_t cell = uniform_index(rng, cells);
      double& w = out.params[w0 + cell];
      const double u = uniform01(rng);
      if (stats) ++stats->events;
      if (u < cfg.supermut_prob) {
        w += w * normal(rng, 0.0, 100.0 * cfg.mut_strength);
        if (stats) ++stats->super_branch;
      } else if (u < cfg.supermut_prob + cfg.reset_prob) {
        w = normal(rng, 0.0, 1.0);
        if (stats) ++stats->reset_branch;
      } else {
        const double noise = normal(rng, 0.0, cfg.mut_strength);
        w += w * noise;
        if (stats) {
          ++stats->normal_branch;
          stats->normal_noise_sum += noise;
          stats->normal_noise_sumsq += noise * noise;
        }
      }
    }
  }
  return out;
}

std::vector<PolicyGenome> evolve_pool(const std::vector<PolicyGenome>& pool,
                                      const std::vector<double>& fitnesses,
                                      const EvoConfig& cfg, Rng& rng) {
  validate_evo_config(cfg);
  const std::size_t m = static_cast<std::size_t>(cfg.pop_size);
  if (pool.size() < 2)
    throw std::invalid_argument("evolve: population must have >= 2");
  if (fitnesses.size() != pool.size())
    throw std::invalid_argument("evolve: fitness count does not match population");
  if (pool.size() < m)
    throw std::invalid_argument("evolve: parent pool smaller than the population");

  RankResult rank = rank_and_elites(fitnesses, cfg.elite_fraction);
  // Elite count is a fraction of the produced population, ranked pool-wide.
  const std::size_t e = std::min(
      m - 1, std::max<std::size_t>(
                 1, static_cast<std::size_t>(std::floor(
                        cfg.elite_fraction * static_cast<double>(m)))));
  rank.elite_indices.assign(rank.ranked.begin(),
                            rank.ranked.begin() + static_cast<std::ptrdiff_t>(e));

  std::vector<PolicyGenome> next;
  next.reserve(m);
  for (int idx : rank.elite_indices)
    next.push_back(pool[static_cast<std::size_t>(idx)]);

  // Parent pool S: m - e tournament winners drawn from the whole pool.
  std::vector<int> selection;
  selection.reserve(m - e);
  for (std::size_t i = 0; i < m - e; ++i)
    selection.push_back(tournament_select(fitnesses, cfg.tournament_size, rng));

  for (std::size_t i = 0; i < m - e; ++i) {
    const int elite_idx =
        rank.elite_indices[uniform_index(rng, rank.elite_indices.size())];
    const PolicyGenome child =
        crossover(pool[static_cast<std::size_t>(elite_idx)],
                  pool[static_cast<std::size_t>(selection[i])], rng);
    next.push_back(mutate(child, cfg, rng));
  }
  return next;
}

std::vector<PolicyGenome> evolve(const std::vector<PolicyGenome>& pop,
                                 const std::vector<double>& fitnesses,
                                 const EvoConfig& cfg, Rng& rng) {
  if (static_cast<int>(pop.size()) != cfg.pop_size)
    throw std::invalid_argument("evolve: population size does not match config");
  return evolve_pool(pop, fitnesses, cfg, rng);
}

}  // namespace eierl
