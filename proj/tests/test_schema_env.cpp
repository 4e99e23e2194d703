#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "eierl/env.hpp"
#include "eierl/schema.hpp"

using namespace eierl;

namespace {

// Three informable / two requestable slots, KB small enough to trace by hand.
DomainSchema tiny_schema() {
  DomainSchema s;
  s.name = "tiny";
  s.informable = {{"a", {"a0", "a1"}}, {"b", {"b0", "b1"}}, {"c", {"c0", "c1"}}};
  s.requestable = {{"x", {"x0", "x1", "x2", "x3", "x4", "x5", "x6", "x7"}},
                   {"y", {"y0", "y1", "y2", "y3", "y4", "y5", "y6", "y7",
                          "y8", "y9"}}};
  s.kb_size = 4;
  s.max_turns = 30;
  s.goal_constraints_min = 1;
  s.goal_constraints_max = 3;
  s.goal_requests_min = 1;
  s.goal_requests_max = 2;
  validate_schema(s);
  return s;
}

KnowledgeBase tiny_kb() {
  KnowledgeBase kb;
  kb.entries = {
      {0, 0, 0, 3, 5},
      {1, 0, 1, 2, 1},
      {0, 1, 0, 7, 2},
      {1, 1, 1, 4, 9},
  };
  return kb;
}

bool goal_achievable(const KnowledgeBase& kb, const UserGoal& goal) {
  for (const auto& entry : kb.entries) {
    bool ok = true;
    for (const auto& [slot, value] : goal.constraints) {
      if (entry[static_cast<std::size_t>(slot)] != value) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("builtin schemas have the advertised slot counts") {
  const DomainSchema movie = builtin_schema("movie");
  CHECK(movie.informable.size() == 5);
  CHECK(movie.requestable.size() == 3);
  const DomainSchema rest = builtin_schema("restaurant");
  CHECK(rest.informable.size() == 7);
  CHECK(rest.requestable.size() == 4);
  const DomainSchema taxi = builtin_schema("taxi");
  CHECK(taxi.informable.size() == 8);
  CHECK(taxi.requestable.size() == 5);
  CHECK(movie.max_turns == 30);
  CHECK_THROWS_AS(builtin_schema("hotel"), std::invalid_argument);
}

TEST_CASE("schema text format round trips") {
  for (const char* name : {"movie", "restaurant", "taxi"}) {
    const DomainSchema original = builtin_schema(name);
    const DomainSchema reparsed = parse_schema(format_schema(original));
    CHECK(reparsed == original);
  }
}

TEST_CASE("shipped schema files parse to the builtins") {
  for (const char* name : {"movie", "restaurant", "taxi"}) {
    const std::string path =
        std::string(EIERL_SCHEMA_DIR) + "/" + name + ".schema";
    CHECK(load_schema(path) == builtin_schema(name));
  }
}

TEST_CASE("schema invariants are enforced") {
  DomainSchema s = tiny_schema();
  s.informable[0].vocab.clear();
  CHECK_THROWS_AS(validate_schema(s), std::invalid_argument);

  s = tiny_schema();
  s.requestable[0].name = "a";  // collides with an informable slot
  CHECK_THROWS_AS(validate_schema(s), std::invalid_argument);

  s = tiny_schema();
  s.kb_size = 0;
  CHECK_THROWS_AS(validate_schema(s), std::invalid_argument);

  s = tiny_schema();
  s.max_turns = 0;
  CHECK_THROWS_AS(validate_schema(s), std::invalid_argument);

  s = tiny_schema();
  s.goal_constraints_max = 9;  // more than the informable slots
  CHECK_THROWS_AS(validate_schema(s), std::invalid_argument);

  CHECK_THROWS_AS(parse_schema("nonsense line\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_schema("unknown_key = 3\n"), std::invalid_argument);
}

TEST_CASE("build_kb is deterministic, sized, and vocabulary-consistent") {
  const DomainSchema schema = builtin_schema("movie");
  const KnowledgeBase kb1 = build_kb(schema, 123);
  const KnowledgeBase kb2 = build_kb(schema, 123);
  CHECK(kb1.entries == kb2.entries);
  CHECK(kb1.entries.size() == static_cast<std::size_t>(schema.kb_size));

  const KnowledgeBase other = build_kb(schema, 124);
  CHECK(other.entries != kb1.entries);

  // Exhaustive scan: every value index lies inside its slot's vocabulary.
  const std::size_t ni = schema.informable.size();
  for (const auto& entry : kb1.entries) {
    REQUIRE(entry.size() == ni + schema.requestable.size());
    for (std::size_t i = 0; i < ni; ++i) {
      CHECK(entry[i] >= 0);
      CHECK(entry[i] < static_cast<int>(schema.informable[i].vocab.size()));
    }
    for (std::size_t j = 0; j < schema.requestable.size(); ++j) {
      CHECK(entry[ni + j] >= 0);
      CHECK(entry[ni + j] <
            static_cast<int>(schema.requestable[j].vocab.size()));
    }
  }
}

TEST_CASE("sampled goals are achievable and respect the ranges") {
  const DomainSchema schema = builtin_schema("movie");
  const KnowledgeBase kb = build_kb(schema, 9);
  Rng rng = make_rng(55);
  for (int i = 0; i < 200; ++i) {
    const UserGoal goal = sample_goal(schema, kb, rng);
    CHECK(goal_achievable(kb, goal));
    CHECK(!goal.requests.empty());
    CHECK(goal.constraints.size() >=
          static_cast<std::size_t>(schema.goal_constraints_min));
    CHECK(goal.constraints.size() <=
          static_cast<std::size_t>(schema.goal_constraints_max));
    CHECK(goal.requests.size() >=
          static_cast<std::size_t>(schema.goal_requests_min));
    CHECK(goal.requests.size() <=
          static_cast<std::size_t>(schema.goal_requests_max));
  }
}

TEST_CASE("goal_request_range (1,1) yields exactly one request") {
  DomainSchema schema = tiny_schema();
  schema.goal_requests_min = 1;
  schema.goal_requests_max = 1;
  const KnowledgeBase kb = tiny_kb();
  Rng rng = make_rng(2);
  for (int i = 0; i < 50; ++i)
    CHECK(sample_goal(schema, kb, rng).requests.size() == 1);
}

TEST_CASE("seeded goal sampling reproduces") {
  const DomainSchema schema = builtin_schema("restaurant");
  const KnowledgeBase kb = build_kb(schema, 1);
  Rng a = make_rng(77), b = make_rng(77);
  for (int i = 0; i < 20; ++i) {
    const UserGoal ga = sample_goal(schema, kb, a);
    const UserGoal gb = sample_goal(schema, kb, b);
    CHECK(ga.constraints == gb.constraints);
    CHECK(ga.requests == gb.requests);
  }
}

TEST_CASE("action space enumeration") {
  const DomainSchema schema = tiny_schema();
  CHECK(ActionSpace::count(schema) == 2 + 3 + 2 + 1);
  CHECK(ActionSpace::greet() == 0);
  CHECK(ActionSpace::request(schema, 2) == 3);
  CHECK(ActionSpace::inform(schema, 0) == 4);
  CHECK(ActionSpace::offer_match(schema) == 6);
  CHECK(ActionSpace::close(schema) == 7);
  CHECK(ActionSpace::label(schema, 3) == "request(c)");
  CHECK(ActionSpace::label(schema, 5) == "inform(y)");
}

TEST_CASE("reset: turn feature zero, opened slot only, deterministic") {
  const DomainSchema schema = builtin_schema("movie");
  const KnowledgeBase kb = build_kb(schema, 3);
  DialogueEnv env(schema, kb);

  Rng rng = make_rng(10);
  const Observation obs = env.reset_random(rng);
  CHECK(obs.size() == static_cast<std::size_t>(observation_dim(schema)));
  CHECK(obs.back() == 0.0);  // t / L
  CHECK(env.user_informed().size() == 1);
  CHECK(env.last_user_act() == UserActType::kInform);

  // The user-informed bag holds exactly the opened slot.
  const std::size_t bag_off = kUserActTypes;
  int bag_bits = 0;
  for (std::size_t i = 0; i < schema.informable.size(); ++i)
    bag_bits += obs[bag_off + i] == 1.0 ? 1 : 0;
  CHECK(bag_bits == 1);

  Rng rng2 = make_rng(10);
  DialogueEnv env2(schema, kb);
  CHECK(env2.reset_random(rng2) == obs);
}

TEST_CASE("hand-traced rule policy run on the tiny schema") {
  const DomainSchema schema = tiny_schema();
  const KnowledgeBase kb = tiny_kb();
  DialogueEnv env(schema, kb);

  UserGoal goal;
  goal.constraints = {{0, 1}, {2, 1}};  // a = a1, c = c1
  goal.requests = {0};                  // x
  env.reset(goal);

  // Opened with the lexicographically first constraint: slot a.
  CHECK(env.user_informed().count(0) == 1);

  // Turn 1: the rule policy requests the unrevealed constraint c.
  int a = warm_start_action(env);
  CHECK(a == ActionSpace::request(schema, 2));
  auto out = env.step(a);
  CHECK(out.reward == -1.0);
  CHECK(env.user_informed().count(2) == 1);

  // Turn 2: inform(x); value must come from entry 1, the first KB entry
  // consistent with {a=a1, c=c1}.
  a = warm_start_action(env);
  CHECK(a == ActionSpace::inform(schema, 0));
  out = env.step(a);
  CHECK(out.reward == -1.0);
  REQUIRE(env.system_informed().count(0) == 1);
  CHECK(env.system_informed().at(0) == 2);  // x2 from entry 1
  CHECK(env.last_user_act() == UserActType::kAck);

  // Turn 3: all requests answered, so offer_match.
  a = warm_start_action(env);
  CHECK(a == ActionSpace::offer_match(schema));
  out = env.step(a);
  CHECK(out.reward == -1.0);

  // Turn 4: close; success bonus 2L on top of the turn cost.
  a = warm_start_action(env);
  CHECK(a == ActionSpace::close(schema));
  out = env.step(a);
  CHECK(out.done);
  CHECK(env.success());
  CHECK(out.reward == -1.0 + 2.0 * schema.max_turns);
  CHECK(env.turns() == 4);

  CHECK_THROWS_AS(env.step(ActionSpace::greet()), std::logic_error);
}

TEST_CASE("close before requests are answered fails the dialogue") {
  const DomainSchema schema = tiny_schema();
  const KnowledgeBase kb = tiny_kb();
  DialogueEnv env(schema, kb);
  UserGoal goal;
  goal.constraints = {{0, 1}};
  goal.requests = {0, 1};
  env.reset(goal);
  const auto out = env.step(ActionSpace::close(schema));
  CHECK(out.done);
  CHECK_FALSE(env.success());
  CHECK(out.reward == -1.0 - schema.max_turns);
}

TEST_CASE("success requires offer_match before close") {
  const DomainSchema schema = tiny_schema();
  const KnowledgeBase kb = tiny_kb();
  DialogueEnv env(schema, kb);
  UserGoal goal;
  goal.constraints = {{0, 1}, {2, 1}};
  goal.requests = {0};
  env.reset(goal);
  env.step(ActionSpace::request(schema, 2));
  env.step(ActionSpace::inform(schema, 0));
  const auto out = env.step(ActionSpace::close(schema));  // no offer_match
  CHECK(out.done);
  CHECK_FALSE(env.success());
}

TEST_CASE("informing against an emptied candidate set fails the dialogue") {
  const DomainSchema schema = tiny_schema();
  const KnowledgeBase kb = tiny_kb();
  DialogueEnv env(schema, kb);
  // Constraints land on entry 3 (a1, b1); both requests wanted.
  UserGoal goal;
  goal.constraints = {{0, 1}, {1, 1}};
  goal.requests = {0, 1};
  env.reset(goal);  // reveals a = a1 only

  // Premature inform(x): candidates under {a=a1} start at entry 1, so x2 is
  // pinned although the goal's entry has x4.
  env.step(ActionSpace::inform(schema, 0));
  CHECK(env.system_informed().at(0) == 2);

  // Revealing b = b1 leaves no entry with a1, b1, x2.
  env.step(ActionSpace::request(schema, 1));
  CHECK(env.match_count() == 0);

  // The next inform has no consistent source: immediate failure.
  const auto out = env.step(ActionSpace::inform(schema, 1));
  CHECK(out.done);
  CHECK_FALSE(env.success());
}

TEST_CASE("timeout at L turns fails with the -L bonus") {
  const DomainSchema schema = tiny_schema();
  const KnowledgeBase kb = tiny_kb();
  DialogueEnv env(schema, kb);
  Rng rng = make_rng(4);
  env.reset_random(rng);
  double total = 0.0;
  int steps = 0;
  while (!env.done()) {
    const auto out = env.step(ActionSpace::greet());  // never closes
    total += out.reward;
    ++steps;
  }
  CHECK(steps == schema.max_turns);
  CHECK(env.turns() == schema.max_turns);
  CHECK_FALSE(env.success());
  CHECK(total == -2.0 * schema.max_turns);  // -L - L
}

TEST_CASE("run_episode: rule policy succeeds and satisfies the identities") {
  const DomainSchema schema = builtin_schema("movie");
  const KnowledgeBase kb = build_kb(schema, 5);
  DialogueEnv env(schema, kb);
  Rng rng = make_rng(31);
  int successes = 0;
  for (int i = 0; i < 200; ++i) {
    const ActionSelector rule = [&env](const Observation&) {
      return warm_start_action(env);
    };
    const EpisodeResult ep = run_episode(env, rule, 0.0, rng);
    successes += ep.success ? 1 : 0;
    CHECK(ep.transitions.size() == static_cast<std::size_t>(ep.turns));
    CHECK(ep.turns <= schema.max_turns);
    const double want = ep.success ? 2.0 * schema.max_turns - ep.turns
                                   : -1.0 * schema.max_turns - ep.turns;
    CHECK(ep.total_return == doctest::Approx(want));
  }
  CHECK(successes > 180);  // near-oracle rule policy
}

TEST_CASE("uniform random policy rarely succeeds") {
  const DomainSchema schema = builtin_schema("movie");
  const KnowledgeBase kb = build_kb(schema, 5);
  DialogueEnv env(schema, kb);
  Rng rng = make_rng(32);
  const ActionSelector never = [](const Observation&) { return 0; };
  int successes = 0;
  for (int i = 0; i < 200; ++i) {
    const EpisodeResult ep = run_episode(env, never, 1.0, rng);  // eps = 1
    successes += ep.success ? 1 : 0;
    CHECK(ep.turns <= schema.max_turns);
  }
  CHECK(successes < 40);  // < 0.2 success rate
}

TEST_CASE("return accounting identity holds for random episodes") {
  const DomainSchema schema = builtin_schema("restaurant");
  const KnowledgeBase kb = build_kb(schema, 6);
  DialogueEnv env(schema, kb);
  Rng rng = make_rng(33);
  const int L = schema.max_turns;
  for (int i = 0; i < 300; ++i) {
    const ActionSelector mixed = [&env, i](const Observation&) {
      return i % 3 == 0 ? ActionSpace::greet() : warm_start_action(env);
    };
    const EpisodeResult ep = run_episode(env, mixed, 0.3, rng);
    const double want = ep.success ? 2.0 * L - ep.turns : -1.0 * L - ep.turns;
    CHECK(ep.total_return == doctest::Approx(want));
  }
}

TEST_CASE("featurizer totality: fixed length, entries in [0,1]") {
  const DomainSchema schema = builtin_schema("taxi");
  const KnowledgeBase kb = build_kb(schema, 8);
  DialogueEnv env(schema, kb);
  Rng rng = make_rng(34);
  const std::size_t want_len =
      static_cast<std::size_t>(observation_dim(schema));
  for (int i = 0; i < 50; ++i) {
    env.reset_random(rng);
    CHECK(env.observe().size() == want_len);
    while (!env.done()) {
      const int a = static_cast<int>(uniform_index(
          rng, static_cast<std::size_t>(ActionSpace::count(schema))));
      const auto out = env.step(a);
      CHECK(out.obs.size() == want_len);
      for (double v : out.obs) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    }
  }
}

TEST_CASE("warm-start rule: single-slot unit behaviors") {
  const DomainSchema schema = tiny_schema();
  const KnowledgeBase kb = tiny_kb();
  DialogueEnv env(schema, kb);
  UserGoal goal;
  goal.constraints = {{1, 0}};  // b = b0, revealed at reset
  goal.requests = {1};          // y
  env.reset(goal);

  // Constraint already on the table; the unanswered request y comes next.
  CHECK(warm_start_action(env) == ActionSpace::inform(schema, 1));
  env.step(ActionSpace::inform(schema, 1));

  // All requests answered: offer_match, then close.
  CHECK(warm_start_action(env) == ActionSpace::offer_match(schema));
  env.step(ActionSpace::offer_match(schema));
  CHECK(warm_start_action(env) == ActionSpace::close(schema));
  env.step(ActionSpace::close(schema));
  CHECK(env.success());
}
