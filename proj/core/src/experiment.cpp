#include "eierl/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace eierl {

std::string variant_name(AgentVariant v) {
  switch (v) {
    case AgentVariant::kEierl: return "eierl";
    case AgentVariant::kErl: return "erl";
    case AgentVariant::kEaOnly: return "ea";
    case AgentVariant::kDqn: return "dqn";
  }
  throw std::logic_error("variant_name: unreachable");
}

AgentVariant parse_variant(const std::string& name) {
  if (name == "eierl") return AgentVariant::kEierl;
  if (name == "erl") return AgentVariant::kErl;
  if (name == "ea") return AgentVariant::kEaOnly;
  if (name == "dqn") return AgentVariant::kDqn;
  throw std::invalid_argument("unknown agent variant: " + name +
                              " (expected eierl|erl|ea|dqn)");
}

void validate_experiment_config(const ExperimentConfig& cfg) {
  validate_schema(cfg.schema);
  if (cfg.epochs < 1)
    throw std::invalid_argument("config: epochs must be >= 1");
  if (cfg.seeds.empty())
    throw std::invalid_argument("config: seeds must be non-empty");
  if (cfg.warm_start_episodes < 0)
    throw std::invalid_argument("config: warm_start_epochs must be >= 0");
  if (cfg.test_episodes < 1)
    throw std::invalid_argument("config: test_episodes must be >= 1");
  if (cfg.gamma < 0.0 || cfg.gamma > 1.0)
    throw std::invalid_argument("config: gamma outside [0, 1]");
  if (cfg.lr <= 0.0) throw std::invalid_argument("config: lr must be positive");
  if (cfg.batch_size < 1)
    throw std::invalid_argument("config: batch_size must be >= 1");
  if (cfg.buffer_capacity < 1)
    throw std::invalid_argument("config: buffer_capacity must be >= 1");
  if (cfg.dqn_epsilon < 0.0 || cfg.dqn_epsilon > 1.0)
    throw std::invalid_argument("config: epsilon outside [0, 1]");
  if (cfg.jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
  if (cfg.variant != AgentVariant::kDqn) validate_orchestrator_config(cfg.orch);
}

DomainSchema resolve_schema(const std::string& ref) {
  if (std::filesystem::exists(ref)) return load_schema(ref);
  return builtin_schema(ref);
}

std::vector<std::uint64_t> parse_seed_list(const std::string& csv) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto a = item.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    const auto b = item.find_last_not_of(" \t");
    seeds.push_back(std::stoull(item.substr(a, b - a + 1)));
  }
  if (seeds.empty())
    throw std::invalid_argument("seed list is empty: '" + csv + "'");
  return seeds;
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "schema") cfg.schema = resolve_schema(value);
  else if (key == "agent") cfg.variant = parse_variant(value);
  else if (key == "epochs") cfg.epochs = std::stoi(value);
  else if (key == "seeds") cfg.seeds = parse_seed_list(value);
  else if (key == "warm_start_epochs") cfg.warm_start_episodes = std::stoi(value);
  else if (key == "test_episodes") cfg.test_episodes = std::stoi(value);
  else if (key == "kb_seed") cfg.kb_seed = std::stoull(value);
  else if (key == "gamma") cfg.gamma = std::stod(value);
  else if (key == "lr") cfg.lr = std::stod(value);
  else if (key == "batch_size") cfg.batch_size = std::stoi(value);
  else if (key == "grad_clip") cfg.grad_clip = std::stod(value);
  else if (key == "buffer_capacity") cfg.buffer_capacity = std::stoi(value);
  else if (key == "target_clamp") cfg.target_clamp = std::stod(value);
  else if (key == "epsilon") cfg.dqn_epsilon = std::stod(value);
  else if (key == "pop_evo") cfg.orch.evo.pop_size = std::stoi(value);
  else if (key == "pop_drl") cfg.orch.pop_policy_size = std::stoi(value);
  else if (key == "elite_fraction") cfg.orch.evo.elite_fraction = std::stod(value);
  else if (key == "tournament_k") cfg.orch.evo.tournament_size = std::stoi(value);
  else if (key == "mut_prob") cfg.orch.evo.mut_prob = std::stod(value);
  else if (key == "mut_frac") cfg.orch.evo.mut_frac = std::stod(value);
  else if (key == "supermut_prob") cfg.orch.evo.supermut_prob = std::stod(value);
  else if (key == "reset_prob") cfg.orch.evo.reset_prob = std::stod(value);
  else if (key == "mut_strength") cfg.orch.evo.mut_strength = std::stod(value);
  else if (key == "xi") cfg.orch.xi = std::stoi(value);
  else if (key == "eps_eval_policy") cfg.orch.eps_eval_policy = std::stod(value);
  else if (key == "eps_eval_evo") cfg.orch.eps_eval_evo = std::stod(value);
  else if (key == "out_dir") cfg.out_dir = value;
  else if (key == "jobs") cfg.jobs = std::stoi(value);
  else throw std::invalid_argument("unknown config key: " + key);
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto a = line.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) continue;
    const auto b = line.find_last_not_of(" \t\r\n");
    line = line.substr(a, b - a + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
    const auto trim = [](std::string s) {
      const auto x = s.find_first_not_of(" \t");
      if (x == std::string::npos) return std::string();
      const auto y = s.find_last_not_of(" \t");
      return s.substr(x, y - x + 1);
    };
    apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

int warm_start(ReplayBuffer& buffer, DialogueEnv& env, int episodes, Rng& rng) {
  if (episodes < 0)
    throw std::invalid_argument("warm_start: episodes must be >= 0");
  int stored = 0;
  for (int i = 0; i < episodes; ++i) {
    const ActionSelector rule = [&env](const Observation&) {
      return warm_start_action(env);
    };
    const EpisodeResult ep = run_episode(env, rule, 0.0, rng);
    for (const Transition& t : ep.transitions) {
      buffer.push(t);
      ++stored;
    }
  }
  return stored;
}

EpochMetrics test_phase(const PolicyGenome& genome, DialogueEnv& env,
                        int episodes, Rng& rng, int epoch) {
  if (episodes < 1)
    throw std::invalid_argument("test_phase: episodes must be >= 1");
  const ActionSelector greedy = [&genome](const Observation& obs) {
    return argmax_action(genome, obs);
  };
  int successes = 0, turns = 0;
  double reward = 0.0;
  for (int i = 0; i < episodes; ++i) {
    const EpisodeResult ep = run_episode(env, greedy, 0.0, rng);
    successes += ep.success ? 1 : 0;
    turns += ep.turns;
    reward += ep.total_return;
  }
  EpochMetrics row;
  row.epoch = epoch;
  row.success_rate = static_cast<double>(successes) / episodes;
  row.avg_reward = reward / episodes;
  row.avg_turns = static_cast<double>(turns) / episodes;
  return row;
}

namespace {

// Per-seed stream tags; test draws must never perturb the training stream.
constexpr std::uint64_t kTrainStream = 1;
constexpr std::uint64_t kTestStream = 2;

double resolved_target_clamp(const ExperimentConfig& cfg) {
  if (cfg.target_clamp < 0.0) return 2.0 * cfg.schema.max_turns;  // auto
  if (cfg.target_clamp == 0.0) return std::numeric_limits<double>::infinity();
  return cfg.target_clamp;
}

SeedRunResult run_population_variant(const ExperimentConfig& cfg,
                                     std::uint64_t seed, bool injection) {
  const DomainSchema& schema = cfg.schema;
  const KnowledgeBase kb = build_kb(schema, cfg.kb_seed);
  const NetworkShape shape{observation_dim(schema), {80, 80},
                           ActionSpace::count(schema)};

  OrchestratorConfig orch = cfg.orch;
  orch.enable_injection = injection;

  Rng train_rng = make_rng(seed, kTrainStream);
  EierlState state = init_eierl(shape, orch, train_rng, cfg.gamma, cfg.lr);
  state.dqn.batch_size = cfg.batch_size;
  state.dqn.grad_clip = cfg.grad_clip;
  state.dqn.target_clamp = resolved_target_clamp(cfg);
  ReplayBuffer buffer(static_cast<std::size_t>(cfg.buffer_capacity));
  DialogueEnv env(schema, kb);
  DialogueEnv test_env(schema, kb);

  SeedRunResult result;
  result.warm_start_transitions =
      warm_start(buffer, env, cfg.warm_start_episodes, train_rng);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const EpochOutcome out = run_epoch(state, env, buffer, orch, train_rng);
    result.injected.push_back(out.injected ? 1 : 0);
    result.evolved.push_back(out.evolved ? 1 : 0);
    result.injection_epochs += out.injected ? 1 : 0;
    result.evolution_epochs += out.evolved ? 1 : 0;
    result.f_max_trace.push_back(state.disc.f_max);

    Rng test_rng = make_rng(seed, kTestStream, static_cast<std::uint64_t>(epoch));
    result.curve.push_back(test_phase(state.dqn.online, test_env,
                                      cfg.test_episodes, test_rng, epoch));
  }
  return result;
}

SeedRunResult run_dqn_variant(const ExperimentConfig& cfg, std::uint64_t seed) {
  const DomainSchema& schema = cfg.schema;
  const KnowledgeBase kb = build_kb(schema, cfg.kb_seed);
  const NetworkShape shape{observation_dim(schema), {80, 80},
                           ActionSpace::count(schema)};

  Rng train_rng = make_rng(seed, kTrainStream);
  DqnState dqn = make_dqn(shape, train_rng, cfg.gamma, cfg.lr);
  dqn.batch_size = cfg.batch_size;
  dqn.grad_clip = cfg.grad_clip;
  dqn.epsilon = cfg.dqn_epsilon;
  dqn.target_clamp = resolved_target_clamp(cfg);
  ReplayBuffer buffer(static_cast<std::size_t>(cfg.buffer_capacity));
  DialogueEnv env(schema, kb);
  DialogueEnv test_env(schema, kb);

  SeedRunResult result;
  result.warm_start_transitions =
      warm_start(buffer, env, cfg.warm_start_episodes, train_rng);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const ActionSelector greedy = [&dqn](const Observation& obs) {
      return argmax_action(dqn.online, obs);
    };
    const EpisodeResult ep = run_episode(env, greedy, dqn.epsilon, train_rng);
    for (const Transition& t : ep.transitions) buffer.push(t);  // single agent: keep all
    train_epoch(dqn, buffer, train_rng);

    Rng test_rng = make_rng(seed, kTestStream, static_cast<std::uint64_t>(epoch));
    result.curve.push_back(test_phase(dqn.online, test_env, cfg.test_episodes,
                                      test_rng, epoch));
  }
  return result;
}

SeedRunResult run_ea_variant(const ExperimentConfig& cfg, std::uint64_t seed) {
  const DomainSchema& schema = cfg.schema;
  const KnowledgeBase kb = build_kb(schema, cfg.kb_seed);
  const NetworkShape shape{observation_dim(schema), {80, 80},
                           ActionSpace::count(schema)};
  const int m = cfg.orch.evo.pop_size;

  Rng train_rng = make_rng(seed, kTrainStream);
  std::vector<PolicyGenome> pop;
  pop.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) pop.push_back(init_genome(shape, train_rng));

  ReplayBuffer buffer(static_cast<std::size_t>(cfg.buffer_capacity));
  DialogueEnv env(schema, kb);
  DialogueEnv test_env(schema, kb);

  SeedRunResult result;
  result.warm_start_transitions =
      warm_start(buffer, env, cfg.warm_start_episodes, train_rng);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::vector<double> fitnesses;
    fitnesses.reserve(pop.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      const EvalOutcome r =
          evaluate(pop[i], env, EvalConfig{cfg.orch.xi, cfg.orch.eps_eval_evo},
                   buffer, m, train_rng);
      fitnesses.push_back(r.fitness);
      if (r.fitness > fitnesses[best]) best = i;
    }
    // The deployable artifact is the best individual of this generation.
    Rng test_rng = make_rng(seed, kTestStream, static_cast<std::uint64_t>(epoch));
    result.curve.push_back(test_phase(pop[best], test_env, cfg.test_episodes,
                                      test_rng, epoch));

    pop = evolve(pop, fitnesses, cfg.orch.evo, train_rng);
    result.evolved.push_back(1);
    result.injected.push_back(0);
    ++result.evolution_epochs;
  }
  return result;
}

}  // namespace

SeedRunResult run_single_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  validate_experiment_config(cfg);
  switch (cfg.variant) {
    case AgentVariant::kEierl:
      return run_population_variant(cfg, seed, /*injection=*/true);
    case AgentVariant::kErl:
      return run_population_variant(cfg, seed, /*injection=*/false);
    case AgentVariant::kEaOnly:
      return run_ea_variant(cfg, seed);
    case AgentVariant::kDqn:
      return run_dqn_variant(cfg, seed);
  }
  throw std::logic_error("run_single_seed: unreachable");
}

std::vector<SeedRunResult> run_all_seeds(const ExperimentConfig& cfg) {
  validate_experiment_config(cfg);
  std::vector<SeedRunResult> results(cfg.seeds.size());
  if (cfg.jobs <= 1 || cfg.seeds.size() == 1) {
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
      results[i] = run_single_seed(cfg, cfg.seeds[i]);
    return results;
  }
  // Seed runs are isolated; any schedule produces identical results.
  std::vector<std::future<SeedRunResult>> futures;
  futures.reserve(cfg.seeds.size());
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    futures.push_back(std::async(std::launch::async, [&cfg, i] {
      return run_single_seed(cfg, cfg.seeds[i]);
    }));
    if (futures.size() == static_cast<std::size_t>(cfg.jobs) ||
        i + 1 == cfg.seeds.size()) {
      for (std::size_t j = 0; j < futures.size(); ++j)
        results[i + 1 - futures.size() + j] = futures[j].get();
      futures.clear();
    }
  }
  return results;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate_experiment_config(cfg);

  namespace fs = std::filesystem;
  const fs::path dir = fs::path(cfg.out_dir) / variant_name(cfg.variant);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory: " + dir.string());

  ExperimentResult result;
  result.per_seed = run_all_seeds(cfg);

  std::vector<std::vector<EpochMetrics>> curves;
  curves.reserve(result.per_seed.size());
  for (const SeedRunResult& r : result.per_seed) curves.push_back(r.curve);
  result.mean = mean_curve(curves);

  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    const std::string path =
        (dir / (std::to_string(cfg.seeds[i]) + ".csv")).string();
    write_metrics_csv(path, result.per_seed[i].curve);
    result.files_written.push_back(path);
  }
  const std::string mean_path = (dir / "mean.csv").string();
  write_metrics_csv(mean_path, result.mean);
  result.files_written.push_back(mean_path);

  const std::string svg_path = (dir / "curve.svg").string();
  write_learning_curve_svg(svg_path,
                           {CurveSeries{variant_name(cfg.variant), result.mean}});
  result.files_written.push_back(svg_path);
  return result;
}

}  // namespace eierl
