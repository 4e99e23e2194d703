#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eierl/env.hpp"
#include "eierl/orchestrator.hpp"
#include "eierl/report.hpp"
#include "eierl/schema.hpp"

namespace eierl {

enum class AgentVariant { kEierl, kErl, kEaOnly, kDqn };

std::string variant_name(AgentVariant v);               // eierl|erl|ea|dqn
AgentVariant parse_variant(const std::string& name);    // throws on unknown

struct ExperimentConfig {
  DomainSchema schema = builtin_schema("movie");
  AgentVariant variant = AgentVariant::kEierl;
  int epochs = 500;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  int warm_start_episodes = 120;
  int test_episodes = 50;
  std::uint64_t kb_seed = 7;

  // DQN hyperparameters.
  double gamma = 0.99;
  double lr = 0.001;
  int batch_size = 16;
  double grad_clip = 10.0;
  int buffer_capacity = 5000;
  double dqn_epsilon = 0.05;  // exploration of the plain DQN variant
  // TD-target bound during training. Negative: auto (2L, the return range of
  // the environment); 0: disabled; positive: explicit bound.
  double target_clamp = -1.0;

  OrchestratorConfig orch;  // populations, xi, eval epsilons, injection

  std::string out_dir = "out";
  int jobs = 1;  // parallel per-seed runs
};

void validate_experiment_config(const ExperimentConfig& cfg);

/// Resolves `ref` as a schema file path if one exists, else a builtin name.
DomainSchema resolve_schema(const std::string& ref);

/// Flat `key = value` config file; '#' starts a comment. Unknown keys are
/// rejected. Returns the defaults overlaid with the file's settings.
ExperimentConfig load_config_file(const std::string& path);
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);
std::vector<std::uint64_t> parse_seed_list(const std::string& csv);

/// Rule-policy episodes that pre-fill the buffer; every transition stored,
/// no subsampling. Returns the number of transitions stored.
int warm_start(ReplayBuffer& buffer, DialogueEnv& env, int episodes, Rng& rng);

/// Greedy rollouts measuring the deployable policy; nothing is stored and no
/// training state is touched. `epoch` tags the returned row.
EpochMetrics test_phase(const PolicyGenome& genome, DialogueEnv& env,
                        int episodes, Rng& rng, int epoch = 0);

struct SeedRunResult {
  std::vector<EpochMetrics> curve;  // one row per training epoch
  std::vector<std::uint8_t> injected;  // per-epoch flags (population variants)
  std::vector<std::uint8_t> evolved;
  std::vector<double> f_max_trace;
  int injection_epochs = 0;
  int evolution_epochs = 0;
  int warm_start_transitions = 0;
};

/// Everything one (config, seed) run produces, deterministically.
SeedRunResult run_single_seed(const ExperimentConfig& cfg, std::uint64_t seed);

struct ExperimentResult {
  std::vector<SeedRunResult> per_seed;  // in config seed order
  std::vector<EpochMetrics> mean;
  std::vector<std::string> files_written;
};

/// Runs every seed (optionally in parallel), then writes
/// <out>/<agent>/<seed>.csv, <out>/<agent>/mean.csv and <out>/<agent>/curve.svg.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Seed runs only, no file output. Used by in-process comparisons.
std::vector<SeedRunResult> run_all_seeds(const ExperimentConfig& cfg);

}  // namespace eierl
