#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "eierl/orchestrator.hpp"

using namespace eierl;

namespace {

struct Fixture {
  DomainSchema schema = builtin_schema("movie");
  KnowledgeBase kb = build_kb(schema, 7);
  NetworkShape shape{observation_dim(schema), {16, 16},
                     ActionSpace::count(schema)};
  DialogueEnv env{schema, kb};
  ReplayBuffer buffer{5000};
};

}  // namespace

TEST_CASE("evaluate: xi=1 fitness equals that episode's return") {
  Fixture fx;
  Rng rng = make_rng(1);
  const PolicyGenome g = init_genome(fx.shape, rng);

  // Same genome, same rng stream: replay the single episode independently.
  Rng rng_a = make_rng(2);
  Rng rng_b = make_rng(2);
  ReplayBuffer scratch(5000);
  const EvalOutcome out =
      evaluate(g, fx.env, EvalConfig{1, 0.0}, scratch, 1, rng_a);

  DialogueEnv env_b(fx.schema, fx.kb);
  const ActionSelector greedy = [&g](const Observation& obs) {
    return argmax_action(g, obs);
  };
  const EpisodeResult ep = run_episode(env_b, greedy, 0.0, rng_b);
  CHECK(out.fitness == doctest::Approx(ep.total_return));
  CHECK(out.total_turns == ep.turns);
}

TEST_CASE("evaluate: xi=2 accumulates both returns") {
  Fixture fx;
  Rng rng = make_rng(3);
  const PolicyGenome g = init_genome(fx.shape, rng);

  Rng rng_a = make_rng(4);
  Rng rng_b = make_rng(4);
  ReplayBuffer scratch(5000);
  const EvalOutcome out =
      evaluate(g, fx.env, EvalConfig{2, 0.0}, scratch, 1, rng_a);

  DialogueEnv env_b(fx.schema, fx.kb);
  const ActionSelector greedy = [&g](const Observation& obs) {
    return argmax_action(g, obs);
  };
  ReplayBuffer scratch_b(5000);
  double want = 0.0;
  for (int i = 0; i < 2; ++i) {
    const EpisodeResult ep = run_episode(env_b, greedy, 0.0, rng_b);
    want += ep.total_return;
    scratch_b.push_subsampled(ep.transitions, 1, rng_b);
  }
  CHECK(out.fitness == doctest::Approx(want));
}

TEST_CASE("evaluate offers every transition to the buffer") {
  Fixture fx;
  Rng rng = make_rng(5);
  const PolicyGenome g = init_genome(fx.shape, rng);
  ReplayBuffer buf(5000);
  const EvalOutcome out = evaluate(g, fx.env, EvalConfig{3, 0.1}, buf, 1, rng);
  // M = 1 stores everything, so stored count equals summed turns.
  CHECK(buf.size() == static_cast<std::size_t>(out.total_turns));
  CHECK(out.transitions_offered == out.total_turns);
}

TEST_CASE("load_policy_population copies theta into every slot") {
  Fixture fx;
  Rng rng = make_rng(6);
  Populations pops;
  for (int i = 0; i < 3; ++i) pops.pop_evo.push_back(init_genome(fx.shape, rng));
  for (int i = 0; i < 2; ++i)
    pops.pop_policy.push_back(init_genome(fx.shape, rng));
  const std::vector<PolicyGenome> evo_before = pops.pop_evo;

  const PolicyGenome theta = init_genome(fx.shape, rng);
  load_policy_population(pops, theta);
  for (const PolicyGenome& g : pops.pop_policy)
    CHECK(g.params == theta.params);
  for (std::size_t i = 0; i < pops.pop_evo.size(); ++i)
    CHECK(pops.pop_evo[i].params == evo_before[i].params);  // untouched

  Populations bad;
  bad.pop_policy.push_back(init_genome(NetworkShape{3, {4}, 2}, rng));
  CHECK_THROWS_AS(load_policy_population(bad, theta), std::invalid_argument);
}

TEST_CASE("evolution_fitness_slice returns the first m entries") {
  Populations pops;
  const NetworkShape shape{2, {3}, 2};
  Rng rng = make_rng(7);
  for (int i = 0; i < 3; ++i) pops.pop_evo.push_back(init_genome(shape, rng));
  pops.pop_policy.push_back(init_genome(shape, rng));

  const std::vector<double> all{10.0, 20.0, 30.0, 99.0};
  CHECK(evolution_fitness_slice(all, pops) ==
        std::vector<double>{10.0, 20.0, 30.0});
  CHECK_THROWS_AS(evolution_fitness_slice({1.0, 2.0}, pops),
                  std::invalid_argument);
}

TEST_CASE("first epoch always injects (f_max starts at -infinity)") {
  Fixture fx;
  Rng rng = make_rng(8);
  OrchestratorConfig cfg;
  EierlState state = init_eierl(fx.shape, cfg, rng);
  const EpochOutcome out = run_epoch(state, fx.env, fx.buffer, cfg, rng);
  CHECK(out.injected);
  CHECK_FALSE(out.evolved);
  CHECK(std::isfinite(state.disc.f_max));
  CHECK(state.disc.f_max == out.f_prime_max);
}

TEST_CASE("injection copies pi_max into every EA slot, bit-exact") {
  Fixture fx;
  Rng rng = make_rng(9);
  OrchestratorConfig cfg;
  EierlState state = init_eierl(fx.shape, cfg, rng);
  const EpochOutcome out = run_epoch(state, fx.env, fx.buffer, cfg, rng);
  REQUIRE(out.injected);
  for (const PolicyGenome& g : state.pops.pop_evo)
    CHECK(g.params == state.disc.last_pi_max.params);
  // Injected fitness is the epoch max.
  CHECK(out.f_prime_max ==
        *std::max_element(out.all_fitness.begin(), out.all_fitness.end()));
}

TEST_CASE("epochs alternate injection XOR evolution; f_max is monotone") {
  Fixture fx;
  Rng rng = make_rng(10);
  OrchestratorConfig cfg;
  EierlState state = init_eierl(fx.shape, cfg, rng);

  double prev_f_max = -std::numeric_limits<double>::infinity();
  int injections = 0, evolutions = 0;
  for (int epoch = 0; epoch < 30; ++epoch) {
    const double f_before = state.disc.f_max;
    const EpochOutcome out = run_epoch(state, fx.env, fx.buffer, cfg, rng);
    CHECK(out.injected != out.evolved);  // exactly one branch per epoch
    injections += out.injected ? 1 : 0;
    evolutions += out.evolved ? 1 : 0;
    if (out.evolved) CHECK(state.disc.f_max == f_before);  // unchanged
    CHECK(state.disc.f_max >= prev_f_max);
    prev_f_max = state.disc.f_max;
  }
  CHECK(injections + evolutions == 30);
  CHECK(injections >= 1);  // the first epoch at least
  CHECK(evolutions >= 1);  // thresholds ratchet; evolutions must occur
}

TEST_CASE("injection disabled: always evolve, f_max stays -infinity") {
  Fixture fx;
  Rng rng = make_rng(11);
  OrchestratorConfig cfg;
  cfg.enable_injection = false;
  EierlState state = init_eierl(fx.shape, cfg, rng);
  for (int epoch = 0; epoch < 10; ++epoch) {
    const EpochOutcome out = run_epoch(state, fx.env, fx.buffer, cfg, rng);
    CHECK_FALSE(out.injected);
    CHECK(out.evolved);
  }
  CHECK(std::isinf(state.disc.f_max));
  CHECK(state.disc.f_max < 0);
}

TEST_CASE("injection is source-agnostic: a policy-population elite injects too") {
  Fixture fx;
  Rng rng = make_rng(12);
  OrchestratorConfig cfg;
  EierlState state = init_eierl(fx.shape, cfg, rng);

  // Make every EA genome hopeless (always greet -> guaranteed timeout) while
  // the DQN genome stays random; the epoch best must then come from
  // pop_policy and injection must copy it into the EA slots.
  for (PolicyGenome& g : state.pops.pop_evo) {
    g = zero_genome(fx.shape);
    g.params[fx.shape.bias_index(2, ActionSpace::greet())] = 5.0;
  }
  const EpochOutcome out = run_epoch(state, fx.env, fx.buffer, cfg, rng);
  REQUIRE(out.injected);
  const std::size_t m = cfg.evo.pop_size;
  const double evo_best = *std::max_element(
      out.all_fitness.begin(),
      out.all_fitness.begin() + static_cast<std::ptrdiff_t>(m));
  CHECK(out.f_prime_max > evo_best);  // winner was a pop_policy member
  for (const PolicyGenome& g : state.pops.pop_evo)
    CHECK(g.params == state.pops.pop_policy[0].params);
}

TEST_CASE("target network syncs inside the epoch's gradient pass") {
  Fixture fx;
  Rng rng = make_rng(13);
  OrchestratorConfig cfg;
  EierlState state = init_eierl(fx.shape, cfg, rng);
  // Enough data for at least one minibatch.
  while (fx.buffer.size() < 64) {
    const ActionSelector rule = [&fx](const Observation&) {
      return warm_start_action(fx.env);
    };
    const EpisodeResult ep = run_episode(fx.env, rule, 0.0, rng);
    for (const Transition& t : ep.transitions) fx.buffer.push(t);
  }
  run_epoch(state, fx.env, fx.buffer, cfg, rng);
  CHECK(state.dqn.target.params == state.dqn.online.params);
}
