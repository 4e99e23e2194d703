#include "eierl/env.hpp"

#include <algorithm>
#include <stdexcept>

namespace eierl {

KnowledgeBase build_kb(const DomainSchema& schema, std::uint64_t kb_seed) {
  validate_schema(schema);
  Rng rng = make_rng(kb_seed, 0x6b62);  // dedicated stream, decoupled from runs
  KnowledgeBase kb;
  kb.entries.reserve(static_cast<std::size_t>(schema.kb_size));
  const std::size_t slots = schema.informable.size() + schema.requestable.size();
  for (int e = 0; e < schema.kb_size; ++e) {
    std::vector<int> entry(slots);
    std::size_t k = 0;
    for (const SlotDef& slot : schema.informable)
      entry[k++] = static_cast<int>(uniform_index(rng, slot.vocab.size()));
    for (const SlotDef& slot : schema.requestable)
      entry[k++] = static_cast<int>(uniform_index(rng, slot.vocab.size()));
    kb.entries.push_back(std::move(entry));
  }
  return kb;
}

UserGoal sample_goal(const DomainSchema& schema, const KnowledgeBase& kb,
                     Rng& rng) {
  if (kb.entries.empty())
    throw std::invalid_argument("sample_goal: empty knowledge base");
  const std::vector<int>& entry =
      kb.entries[uniform_index(rng, kb.entries.size())];

  const int ni = static_cast<int>(schema.informable.size());
  const int nr = static_cast<int>(schema.requestable.size());
  const int n_constraints =
      schema.goal_constraints_min +
      static_cast<int>(uniform_index(
          rng, static_cast<std::size_t>(schema.goal_constraints_max -
                                        schema.goal_constraints_min + 1)));
  const int n_requests =
      schema.goal_requests_min +
      static_cast<int>(uniform_index(
          rng, static_cast<std::size_t>(schema.goal_requests_max -
                                        schema.goal_requests_min + 1)));

  // Uniform subset via partial Fisher-Yates over slot indices.
  const auto pick = [&rng](int total, int want) {
    std::vector<int> idx(static_cast<std::size_t>(total));
    for (int i = 0; i < total; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < want; ++i) {
      const std::size_t j = static_cast<std::size_t>(i) +
                            uniform_index(rng, static_cast<std::size_t>(total - i));
      std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
    }
    idx.resize(static_cast<std::size_t>(want));
    return idx;
  };

  UserGoal goal;
  for (int slot : pick(ni, n_constraints))
    goal.constraints[slot] = entry[static_cast<std::size_t>(slot)];
  for (int slot : pick(nr, n_requests)) goal.requests.insert(slot);
  return goal;
}

int ActionSpace::count(const DomainSchema& schema) {
  return 2 + static_cast<int>(schema.informable.size()) +
         static_cast<int>(schema.requestable.size()) + 1;
}

int ActionSpace::request(const DomainSchema& schema, int informable_idx) {
  (void)schema;
  return 1 + informable_idx;
}

int ActionSpace::inform(const DomainSchema& schema, int requestable_idx) {
  return 1 + static_cast<int>(schema.informable.size()) + requestable_idx;
}

int ActionSpace::offer_match(const DomainSchema& schema) {
  return 1 + static_cast<int>(schema.informable.size()) +
         static_cast<int>(schema.requestable.size());
}

int ActionSpace::close(const DomainSchema& schema) {
  return offer_match(schema) + 1;
}

std::string ActionSpace::label(const DomainSchema& schema, int action) {
  const int ni = static_cast<int>(schema.informable.size());
  const int nr = static_cast<int>(schema.requestable.size());
  if (action == 0) return "greet";
  if (action >= 1 && action < 1 + ni)
    return "request(" + schema.informable[static_cast<std::size_t>(action - 1)].name + ")";
  if (action >= 1 + ni && action < 1 + ni + nr)
    return "inform(" +
           schema.requestable[static_cast<std::size_t>(action - 1 - ni)].name + ")";
  if (action == offer_match(schema)) return "offer_match";
  if (action == close(schema)) return "close";
  return "invalid(" + std::to_string(action) + ")";
}

int observation_dim(const DomainSchema& schema) {
  const int ni = static_cast<int>(schema.informable.size());
  const int nr = static_cast<int>(schema.requestable.size());
  return kUserActTypes + ni + nr + ActionSpace::count(schema) + nr + 4 + 1;
}

DialogueEnv::DialogueEnv(const DomainSchema& schema, const KnowledgeBase& kb)
    : schema_(&schema), kb_(&kb) {
  validate_schema(schema);
  if (static_cast<int>(kb.entries.size()) != schema.kb_size)
    throw std::invalid_argument("DialogueEnv: KB size does not match schema");
}

Observation DialogueEnv::reset(const UserGoal& goal) {
  if (goal.constraints.empty() || goal.requests.empty())
    throw std::invalid_argument("reset: goal needs constraints and requests");
  goal_ = goal;
  turns_ = 0;
  done_ = false;
  success_ = false;
  offered_ = false;
  last_system_action_ = -1;
  user_informed_.clear();
  user_requested_.clear();
  answered_requests_.clear();
  system_informed_.clear();

  // The user opens by informing the agenda top: the lexicographically first
  // constraint slot.
  const auto top = next_unrevealed_constraint();
  user_informed_[*top] = goal_.constraints.at(*top);
  last_user_act_ = UserActType::kInform;
  return observe();
}

Observation DialogueEnv::reset_random(Rng& rng) {
  return reset(sample_goal(*schema_, *kb_, rng));
}

std::optional<int> DialogueEnv::next_unrevealed_constraint() const {
  const SlotDef* best = nullptr;
  int best_idx = -1;
  for (const auto& [slot, value] : goal_.constraints) {
    if (user_informed_.count(slot)) continue;
    const SlotDef& def = schema_->informable[static_cast<std::size_t>(slot)];
    if (!best || def.name < best->name) {
      best = &def;
      best_idx = slot;
    }
  }
  if (best_idx < 0) return std::nullopt;
  return best_idx;
}

std::optional<int> DialogueEnv::next_pending_request() const {
  const SlotDef* best = nullptr;
  int best_idx = -1;
  for (int slot : goal_.requests) {
    if (answered_requests_.count(slot)) continue;
    const SlotDef& def = schema_->requestable[static_cast<std::size_t>(slot)];
    if (!best || def.name < best->name) {
      best = &def;
      best_idx = slot;
    }
  }
  if (best_idx < 0) return std::nullopt;
  return best_idx;
}

bool DialogueEnv::entry_matches(const std::vector<int>& entry,
                                bool against_goal) const {
  const std::size_t ni = schema_->informable.size();
  if (against_goal) {
    for (const auto& [slot, value] : goal_.constraints) {
      if (entry[static_cast<std::size_t>(slot)] != value) return false;
    }
  } else {
    for (const auto& [slot, value] : user_informed_) {
      if (value && entry[static_cast<std::size_t>(slot)] != *value) return false;
    }
  }
  for (const auto& [slot, value] : system_informed_) {
    if (entry[ni + static_cast<std::size_t>(slot)] != value) return false;
  }
  return true;
}

int DialogueEnv::match_count() const {
  int n = 0;
  for (const auto& entry : kb_->entries) {
    if (entry_matches(entry, /*against_goal=*/false)) ++n;
  }
  return n;
}

int DialogueEnv::first_candidate() const {
  for (std::size_t i = 0; i < kb_->entries.size(); ++i) {
    if (entry_matches(kb_->entries[i], /*against_goal=*/false))
      return static_cast<int>(i);
  }
  return -1;
}

void DialogueEnv::user_respond_progress() {
  if (const auto slot = next_unrevealed_constraint()) {
    user_informed_[*slot] = goal_.constraints.at(*slot);
    last_user_act_ = UserActType::kInform;
  } else if (const auto req = next_pending_request()) {
    user_requested_.insert(*req);
    last_user_act_ = UserActType::kRequest;
  } else {
    last_user_act_ = UserActType::kAck;
  }
}

DialogueEnv::StepOutcome DialogueEnv::step(int action) {
  if (done_) throw std::logic_error("step: episode is already done");
  if (action < 0 || action >= ActionSpace::count(*schema_))
    throw std::invalid_argument("step: action index out of range");

  const int ni = static_cast<int>(schema_->informable.size());
  const int nr = static_cast<int>(schema_->requestable.size());
  const int L = schema_->max_turns;
  ++turns_;
  last_system_action_ = action;

  if (action == ActionSpace::greet()) {
    user_respond_progress();
  } else if (action >= 1 && action < 1 + ni) {
    const int slot = action - 1;
    const auto it = goal_.constraints.find(slot);
    if (it != goal_.constraints.end()) {
      user_informed_[slot] = it->second;  // the goal value
    } else {
      user_informed_[slot] = std::nullopt;  // "don't care"
    }
    last_user_act_ = UserActType::kInform;
  } else if (action >= 1 + ni && action < 1 + ni + nr) {
    const int slot = action - 1 - ni;
    const int candidate = first_candidate();
    if (candidate < 0) {
      // Every entry consistent with the dialogue so far is gone; the system
      // would have to contradict its own earlier informs.
      done_ = true;
      success_ = false;
      last_user_act_ = UserActType::kBye;
    } else {
      system_informed_[slot] =
          kb_->entries[static_cast<std::size_t>(candidate)]
                      [static_cast<std::size_t>(ni + slot)];
      if (goal_.requests.count(slot)) answered_requests_.insert(slot);
      if (const auto req = next_pending_request()) {
        user_requested_.insert(*req);
        last_user_act_ = UserActType::kRequest;
      } else if (const auto cslot = next_unrevealed_constraint()) {
        user_informed_[*cslot] = goal_.constraints.at(*cslot);
        last_user_act_ = UserActType::kInform;
      } else {
        last_user_act_ = UserActType::kAck;
      }
    }
  } else if (action == ActionSpace::offer_match(*schema_)) {
    offered_ = true;
    user_respond_progress();
  } else if (action == ActionSpace::close(*schema_)) {
    done_ = true;
    last_user_act_ = UserActType::kBye;
    const bool all_answered =
        static_cast<int>(answered_requests_.size()) ==
        static_cast<int>(goal_.requests.size());
    bool consistent = false;
    if (offered_ && all_answered) {
      for (const auto& entry : kb_->entries) {
        if (entry_matches(entry, /*against_goal=*/true)) {
          consistent = true;
          break;
        }
      }
    }
    success_ = offered_ && all_answered && consistent;
  }

  if (!done_ && turns_ >= L) {
    done_ = true;
    success_ = false;
    last_user_act_ = UserActType::kBye;
  }

  double reward = -1.0;
  if (done_) reward += success_ ? 2.0 * L : -1.0 * L;
  return StepOutcome{observe(), reward, done_};
}

Observation DialogueEnv::observe() const {
  const int ni = static_cast<int>(schema_->informable.size());
  const int nr = static_cast<int>(schema_->requestable.size());
  const int actions = ActionSpace::count(*schema_);
  Observation obs(static_cast<std::size_t>(observation_dim(*schema_)), 0.0);
  std::size_t k = 0;

  obs[k + static_cast<std::size_t>(last_user_act_)] = 1.0;
  k += kUserActTypes;

  for (const auto& [slot, value] : user_informed_)
    obs[k + static_cast<std::size_t>(slot)] = 1.0;
  k += static_cast<std::size_t>(ni);

  for (int slot : user_requested_) obs[k + static_cast<std::size_t>(slot)] = 1.0;
  k += static_cast<std::size_t>(nr);

  if (last_system_action_ >= 0)
    obs[k + static_cast<std::size_t>(last_system_action_)] = 1.0;
  k += static_cast<std::size_t>(actions);

  for (const auto& [slot, value] : system_informed_)
    obs[k + static_cast<std::size_t>(slot)] = 1.0;
  k += static_cast<std::size_t>(nr);

  const int matches = match_count();
  const int bucket = matches == 0 ? 0 : matches == 1 ? 1 : matches <= 5 ? 2 : 3;
  obs[k + static_cast<std::size_t>(bucket)] = 1.0;
  k += 4;

  obs[k] = static_cast<double>(turns_) / schema_->max_turns;
  return obs;
}

int warm_start_action(const DialogueEnv& env) {
  const DomainSchema& schema = env.schema();

  // Request goal constraints the user has not stated yet, in slot-name order.
  const std::map<int, int>& constraints = env.goal().constraints;
  int best = -1;
  for (const auto& [slot, value] : constraints) {
    if (env.user_informed().count(slot)) continue;
    if (best < 0 ||
        schema.informable[static_cast<std::size_t>(slot)].name <
            schema.informable[static_cast<std::size_t>(best)].name)
      best = slot;
  }
  if (best >= 0) return ActionSpace::request(schema, best);

  // Then answer goal requests, in slot-name order.
  best = -1;
  for (int slot : env.goal().requests) {
    if (env.system_informed().count(slot)) continue;
    if (best < 0 ||
        schema.requestable[static_cast<std::size_t>(slot)].name <
            schema.requestable[static_cast<std::size_t>(best)].name)
      best = slot;
  }
  if (best >= 0) return ActionSpace::inform(schema, best);

  if (!env.offered()) return ActionSpace::offer_match(schema);
  return ActionSpace::close(schema);
}

EpisodeResult run_episode(DialogueEnv& env, const ActionSelector& select,
                          double epsilon, Rng& rng) {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("run_episode: epsilon outside [0, 1]");
  const int actions = ActionSpace::count(env.schema());

  EpisodeResult result;
  Observation s = env.reset_random(rng);
  while (!env.done()) {
    int a;
    if (uniform01(rng) < epsilon) {
      a = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(actions)));
    } else {
      a = select(s);
    }
    DialogueEnv::StepOutcome out = env.step(a);
    result.total_return += out.reward;
    result.transitions.push_back(
        Transition{std::move(s), a, out.reward, out.obs, out.done});
    s = std::move(out.obs);
  }
  result.success = env.success();
  result.turns = env.turns();
  return result;
}

}  // namespace eierl
