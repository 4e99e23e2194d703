#include "eierl/orchestrator.hpp"

#include <stdexcept>

namespace eierl {

EvalOutcome evaluate(const PolicyGenome& genome, DialogueEnv& env,
                     const EvalConfig& cfg, ReplayBuffer& buffer, int M,
                     Rng& rng) {
  if (cfg.episodes < 1)
    throw std::invalid_argument("evaluate: xi must be >= 1");
  EvalOutcome out;
  const ActionSelector greedy = [&genome](const Observation& obs) {
    return argmax_action(genome, obs);
  };
  for (int i = 0; i < cfg.episodes; ++i) {
    const EpisodeResult ep = run_episode(env, greedy, cfg.epsilon, rng);
    out.fitness += ep.total_return;
    out.successes += ep.success ? 1 : 0;
    out.total_turns += ep.turns;
    out.transitions_offered += static_cast<int>(ep.transitions.size());
    buffer.push_subsampled(ep.transitions, M, rng);
  }
  return out;
}

void load_policy_population(Populations& pops, const PolicyGenome& theta) {
  for (PolicyGenome& g : pops.pop_policy) {
    if (g.shape != theta.shape)
      throw std::invalid_argument("load_policy_population: shape mismatch");
    g = theta;
  }
}

std::vector<double> evolution_fitness_slice(
    const std::vector<double>& all_fitness, const Populations& pops) {
  const std::size_t m = pops.pop_evo.size();
  const std::size_t n = pops.pop_policy.size();
  if (all_fitness.size() != m + n)
    throw std::invalid_argument("evolution_fitness_slice: length mismatch");
  return std::vector<double>(all_fitness.begin(),
                             all_fitness.begin() + static_cast<std::ptrdiff_t>(m));
}

void validate_orchestrator_config(const OrchestratorConfig& cfg) {
  validate_evo_config(cfg.evo);
  if (cfg.pop_policy_size < 1)
    throw std::invalid_argument("orchestrator config: pop_policy_size must be >= 1");
  if (cfg.xi < 1)
    throw std::invalid_argument("orchestrator config: xi must be >= 1");
  for (double eps : {cfg.eps_eval_policy, cfg.eps_eval_evo}) {
    if (eps < 0.0 || eps > 1.0)
      throw std::invalid_argument("orchestrator config: epsilon outside [0, 1]");
  }
}

EierlState init_eierl(const NetworkShape& shape, const OrchestratorConfig& cfg,
                      Rng& rng, double gamma, double lr) {
  validate_orchestrator_config(cfg);
  EierlState state;
  state.dqn = make_dqn(shape, rng, gamma, lr);
  state.pops.pop_evo.reserve(static_cast<std::size_t>(cfg.evo.pop_size));
  for (int i = 0; i < cfg.evo.pop_size; ++i)
    state.pops.pop_evo.push_back(init_genome(shape, rng));
  state.pops.pop_policy.assign(static_cast<std::size_t>(cfg.pop_policy_size),
                               state.dqn.online);
  return state;
}

EpochOutcome run_epoch(EierlState& state, DialogueEnv& env, ReplayBuffer& buffer,
                       const OrchestratorConfig& cfg, Rng& rng) {
  validate_orchestrator_config(cfg);
  const int M = cfg.evo.pop_size + cfg.pop_policy_size;

  load_policy_population(state.pops, state.dqn.online);

  EpochOutcome out;
  double f_prime_max = -std::numeric_limits<double>::infinity();
  const PolicyGenome* pi_max = nullptr;
  int successes = 0, turns = 0, episodes = 0;
  double reward_sum = 0.0;

  const auto eval_one = [&](const PolicyGenome& g, double eps) {
    const EvalOutcome r =
        evaluate(g, env, EvalConfig{cfg.xi, eps}, buffer, M, rng);
    out.all_fitness.push_back(r.fitness);
    successes += r.successes;
    turns += r.total_turns;
    episodes += cfg.xi;
    reward_sum += r.fitness;
    if (r.fitness > f_prime_max) {
      f_prime_max = r.fitness;
      pi_max = &g;
    }
  };
  for (const PolicyGenome& g : state.pops.pop_evo) eval_one(g, cfg.eps_eval_evo);
  for (const PolicyGenome& g : state.pops.pop_policy)
    eval_one(g, cfg.eps_eval_policy);

  out.f_prime_max = f_prime_max;
  state.disc.last_f_prime_max = f_prime_max;
  state.disc.last_pi_max = *pi_max;
  state.disc.has_pi_max = true;

  if (cfg.enable_injection && f_prime_max > state.disc.f_max) {
    for (PolicyGenome& g : state.pops.pop_evo) g = state.disc.last_pi_max;
    state.disc.f_max = f_prime_max;
    out.injected = true;
  } else {
    // The next EA generation is bred from both populations: the DRL copies
    // compete for elite and parent slots on equal terms, so gradient-trained
    // weights keep flowing into the explorers between injections.
    std::vector<PolicyGenome> pool = state.pops.pop_evo;
    pool.insert(pool.end(), state.pops.pop_policy.begin(),
                state.pops.pop_policy.end());
    state.pops.pop_evo = evolve_pool(pool, out.all_fitness, cfg.evo, rng);
    out.evolved = true;
  }

  out.mean_loss = train_epoch(state.dqn, buffer, rng);

  out.success_rate = static_cast<double>(successes) / episodes;
  out.avg_reward = reward_sum / episodes;
  out.avg_turns = static_cast<double>(turns) / episodes;
  return out;
}

}  // namespace eierl
