#pragma once

#include <limits>
#include <vector>

#include "eierl/dqn.hpp"
#include "eierl/env.hpp"
#include "eierl/evolution.hpp"
#include "eierl/network.hpp"
#include "eierl/replay.hpp"

namespace eierl {

/// EA explorers (pop_evo, m genomes) and DRL exploiters (pop_policy, n copies
/// of the online Q-network).
struct Populations {
  std::vector<PolicyGenome> pop_evo;
  std::vector<PolicyGenome> pop_policy;
};

/// Adaptive injection threshold: injection fires when an epoch's best fitness
/// exceeds f_max, which then ratchets up to that value.
struct EliteDiscriminator {
  double f_max = -std::numeric_limits<double>::infinity();
  double last_f_prime_max = -std::numeric_limits<double>::infinity();
  PolicyGenome last_pi_max;
  bool has_pi_max = false;
};

struct EvalConfig {
  int episodes = 1;      // xi: rollouts per fitness evaluation
  double epsilon = 0.0;  // exploration used inside the rollouts
};

struct EvalOutcome {
  double fitness = 0.0;  // sum of all rewards over the xi episodes
  int successes = 0;
  int total_turns = 0;
  int transitions_offered = 0;
};

/// Runs xi eps-greedy episodes, offering every transition to the buffer via
/// push_subsampled(1/M). Fitness is the summed return.
EvalOutcome evaluate(const PolicyGenome& genome, DialogueEnv& env,
                     const EvalConfig& cfg, ReplayBuffer& buffer, int M,
                     Rng& rng);

/// Copies theta into every pop_policy slot, bit-exact. pop_evo is untouched.
void load_policy_population(Populations& pops, const PolicyGenome& theta);

/// Fitnesses are recorded pop_evo first, then pop_policy; the evolution step
/// consumes the first m entries.
std::vector<double> evolution_fitness_slice(
    const std::vector<double>& all_fitness, const Populations& pops);

struct OrchestratorConfig {
  EvoConfig evo;                 // includes m = evo.pop_size
  int pop_policy_size = 1;       // n
  int xi = 1;                    // episodes per fitness evaluation
  double eps_eval_policy = 0.05; // exploration for the DRL population rollouts
  double eps_eval_evo = 0.05;    // slight action noise on top of parameter-space exploration
  bool enable_injection = true;  // false: plain ERL, evolution every epoch
};

void validate_orchestrator_config(const OrchestratorConfig& cfg);

struct EierlState {
  Populations pops;
  DqnState dqn;
  EliteDiscriminator disc;
};

/// Random pop_evo, pop_policy preloaded from the fresh DQN online genome.
EierlState init_eierl(const NetworkShape& shape, const OrchestratorConfig& cfg,
                      Rng& rng, double gamma = 0.99, double lr = 0.001);

struct EpochOutcome {
  std::vector<double> all_fitness;  // pop_evo order, then pop_policy order
  double f_prime_max = 0.0;
  bool injected = false;   // set by the injection branch
  bool evolved = false;    // set by the evolution branch
  double mean_loss = 0.0;
  // Training-phase aggregates over the n + m evaluation rollouts.
  double success_rate = 0.0;
  double avg_reward = 0.0;
  double avg_turns = 0.0;
};

/// One epoch of the main loop: reload the DRL population from the online
/// network, evaluate everyone, inject the elite XOR evolve, then run the
/// gradient pass (with its end-of-epoch target sync).
EpochOutcome run_epoch(EierlState& state, DialogueEnv& env, ReplayBuffer& buffer,
                       const OrchestratorConfig& cfg, Rng& rng);

}  // namespace eierl
