#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eierl/replay.hpp"
#include "eierl/rng.hpp"
#include "eierl/schema.hpp"

namespace eierl {

/// Entries store vocabulary indices per slot: informable slots first (schema
/// order), then requestable slots.
struct KnowledgeBase {
  std::vector<std::vector<int>> entries;
};

/// Deterministic for (schema, kb_seed); values drawn uniformly from each
/// slot's vocabulary.
KnowledgeBase build_kb(const DomainSchema& schema, std::uint64_t kb_seed);

struct UserGoal {
  std::map<int, int> constraints;  // informable slot index -> vocab index
  std::set<int> requests;          // requestable slot indices
};

/// Constraints copied from a uniformly sampled KB entry, so at least that
/// entry satisfies them. Request count drawn from the schema's range.
UserGoal sample_goal(const DomainSchema& schema, const KnowledgeBase& kb,
                     Rng& rng);

/// System action space, indexed as: greet, request(informable i...),
/// inform(requestable j...), offer_match, close.
struct ActionSpace {
  static int count(const DomainSchema& schema);
  static int greet() { return 0; }
  static int request(const DomainSchema& schema, int informable_idx);
  static int inform(const DomainSchema& schema, int requestable_idx);
  static int offer_match(const DomainSchema& schema);
  static int close(const DomainSchema& schema);
  /// Human-readable label, for traces and the CLI.
  static std::string label(const DomainSchema& schema, int action);
};

enum class UserActType { kInform = 0, kRequest = 1, kAck = 2, kBye = 3 };
inline constexpr int kUserActTypes = 4;

using Observation = std::vector<double>;

/// Length of the feature vector for this schema.
int observation_dim(const DomainSchema& schema);

struct EpisodeResult {
  std::vector<Transition> transitions;
  double total_return = 0.0;
  bool success = false;
  int turns = 0;
};

/// One dialogue between the agenda-based simulated user and the system. The
/// environment owns the per-episode state; schema and KB are shared inputs.
///
/// Turn accounting: every system action costs -1; the terminal action
/// additionally earns +2L on success or -L on failure, so a whole episode
/// returns 2L - turns or -L - turns.
class DialogueEnv {
 public:
  DialogueEnv(const DomainSchema& schema, const KnowledgeBase& kb);

  /// Starts an episode: turn counter 0, user opens by informing the
  /// lexicographically first goal constraint.
  Observation reset(const UserGoal& goal);

  /// Samples a goal and starts an episode.
  Observation reset_random(Rng& rng);

  struct StepOutcome {
    Observation obs;
    double reward = 0.0;
    bool done = false;
  };

  /// Applies a system action. Throws std::logic_error if the episode is done.
  StepOutcome step(int action);

  bool done() const { return done_; }
  bool success() const { return success_; }
  int turns() const { return turns_; }
  const DomainSchema& schema() const { return *schema_; }
  const KnowledgeBase& kb() const { return *kb_; }
  const UserGoal& goal() const { return goal_; }
  Observation observe() const;

  /// KB entries consistent with every revealed constraint and every value the
  /// system has informed so far.
  int match_count() const;

  // Dialogue state, exposed for the rule policy and for tests.
  const std::map<int, std::optional<int>>& user_informed() const {
    return user_informed_;
  }
  const std::set<int>& user_requested() const { return user_requested_; }
  const std::map<int, int>& system_informed() const { return system_informed_; }
  bool offered() const { return offered_; }
  UserActType last_user_act() const { return last_user_act_; }

 private:
  void user_respond_progress();
  std::optional<int> next_unrevealed_constraint() const;
  std::optional<int> next_pending_request() const;
  bool entry_matches(const std::vector<int>& entry, bool against_goal) const;
  int first_candidate() const;

  const DomainSchema* schema_;
  const KnowledgeBase* kb_;
  UserGoal goal_;

  int turns_ = 0;
  bool done_ = true;
  bool success_ = false;
  bool offered_ = false;
  int last_system_action_ = -1;
  UserActType last_user_act_ = UserActType::kAck;
  // informable slot -> vocab index, or nullopt for "any" (user has no
  // constraint on a slot the system asked about).
  std::map<int, std::optional<int>> user_informed_;
  std::set<int> user_requested_;       // requests the user has voiced
  std::set<int> answered_requests_;    // goal requests satisfied by informs
  std::map<int, int> system_informed_; // requestable slot -> vocab index
};

/// Deterministic rule policy used for the warm start: request each unfilled
/// goal constraint, inform each goal request, offer_match, close. It reads
/// the goal directly, so it is near-oracle by construction.
int warm_start_action(const DialogueEnv& env);

using ActionSelector = std::function<int(const Observation&)>;

/// Runs one episode under eps-greedy selection around `select`. With
/// probability eps a uniformly random action replaces the selector's choice.
EpisodeResult run_episode(DialogueEnv& env, const ActionSelector& select,
                          double epsilon, Rng& rng);

}  // namespace eierl
