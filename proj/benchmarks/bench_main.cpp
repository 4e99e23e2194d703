#include <benchmark/benchmark.h>

#include "eierl/dqn.hpp"
#include "eierl/env.hpp"
#include "eierl/evolution.hpp"
#include "eierl/network.hpp"
#include "eierl/orchestrator.hpp"

namespace {

using namespace eierl;

NetworkShape movie_shape() {
  const DomainSchema schema = builtin_schema("movie");
  return NetworkShape{observation_dim(schema), {80, 80},
                      ActionSpace::count(schema)};
}

void BM_Forward(benchmark::State& state) {
  Rng rng = make_rng(1);
  const NetworkShape shape = movie_shape();
  const PolicyGenome g = init_genome(shape, rng);
  std::vector<double> obs(static_cast<std::size_t>(shape.input_dim));
  for (double& v : obs) v = uniform01(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward(g, obs));
  }
}
BENCHMARK(BM_Forward);

void BM_LossAndGradient(benchmark::State& state) {
  Rng rng = make_rng(2);
  const NetworkShape shape = movie_shape();
  const PolicyGenome g = init_genome(shape, rng);
  std::vector<TrainingSample> batch(16);
  for (TrainingSample& s : batch) {
    s.obs.resize(static_cast<std::size_t>(shape.input_dim));
    for (double& v : s.obs) v = uniform01(rng);
    s.action = static_cast<int>(
        uniform_index(rng, static_cast<std::size_t>(shape.output_dim)));
    s.target = normal(rng, 0.0, 1.0);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(loss_and_gradient(g, batch));
  }
}
BENCHMARK(BM_LossAndGradient);

void BM_Episode(benchmark::State& state) {
  Rng rng = make_rng(3);
  const DomainSchema schema = builtin_schema("movie");
  const KnowledgeBase kb = build_kb(schema, 7);
  const NetworkShape shape{observation_dim(schema), {80, 80},
                           ActionSpace::count(schema)};
  const PolicyGenome g = init_genome(shape, rng);
  DialogueEnv env(schema, kb);
  const ActionSelector greedy = [&g](const Observation& obs) {
    return argmax_action(g, obs);
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_episode(env, greedy, 0.05, rng));
  }
}
BENCHMARK(BM_Episode);

void BM_Evolve(benchmark::State& state) {
  Rng rng = make_rng(4);
  const NetworkShape shape = movie_shape();
  EvoConfig cfg;
  std::vector<PolicyGenome> pop;
  std::vector<double> fitness;
  for (int i = 0; i < cfg.pop_size; ++i) {
    pop.push_back(init_genome(shape, rng));
    fitness.push_back(normal(rng, 0.0, 10.0));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve(pop, fitness, cfg, rng));
  }
}
BENCHMARK(BM_Evolve);

void BM_TrainEpoch(benchmark::State& state) {
  Rng rng = make_rng(5);
  const DomainSchema schema = builtin_schema("movie");
  const KnowledgeBase kb = build_kb(schema, 7);
  const NetworkShape shape{observation_dim(schema), {80, 80},
                           ActionSpace::count(schema)};
  DqnState dqn = make_dqn(shape, rng);
  ReplayBuffer buffer(5000);
  DialogueEnv env(schema, kb);
  const ActionSelector greedy = [&dqn](const Observation& obs) {
    return argmax_action(dqn.online, obs);
  };
  while (buffer.size() < 2000) {
    const EpisodeResult ep = run_episode(env, greedy, 0.3, rng);
    for (const Transition& t : ep.transitions) buffer.push(t);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_epoch(dqn, buffer, rng));
  }
}
BENCHMARK(BM_TrainEpoch);

}  // namespace

BENCHMARK_MAIN();
