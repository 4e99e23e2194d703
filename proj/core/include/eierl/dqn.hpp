#pragma once

#include <limits>
#include <vector>

#include "eierl/network.hpp"
#include "eierl/replay.hpp"

namespace eierl {

/// Online and target Q-networks plus the training hyperparameters.
struct DqnState {
  PolicyGenome online;   // trained by gradient descent
  PolicyGenome target;   // bootstrap source, synced from online once per epoch
  double gamma = 0.99;
  double lr = 0.001;
  double epsilon = 0.0;
  int batch_size = 16;
  double grad_clip = 10.0;
  // Training-time bound on TD targets. Returns in the dialogue environment
  // provably lie in [-2L, 2L], so the harness sets this to 2L; bootstrap
  // estimates outside the bound are always wrong and feed runaway
  // overestimation. Infinity disables the bound.
  double target_clamp = std::numeric_limits<double>::infinity();
};

/// Fresh agent with target = online.
DqnState make_dqn(const NetworkShape& shape, Rng& rng, double gamma = 0.99,
                  double lr = 0.001);

/// y_i = r for terminal transitions, r + gamma * max_a' Q_target(s', a')
/// otherwise.
std::vector<double> td_targets(const std::vector<Transition>& batch,
                               const PolicyGenome& target, double gamma);

/// One full pass over the buffer: floor(|buffer| / batch_size) minibatch
/// gradient steps against the pre-epoch target network, then one
/// online -> target sync. Returns the mean minibatch loss (0 if the buffer
/// was underfull).
double train_epoch(DqnState& dqn, ReplayBuffer& buffer, Rng& rng);

/// Greedy action with lowest-index tie-break.
int argmax_action(const PolicyGenome& genome, const std::vector<double>& obs);

/// eps-greedy: with probability epsilon a uniform random action, otherwise
/// the argmax.
int select_action(const PolicyGenome& genome, const std::vector<double>& obs,
                  double epsilon, Rng& rng);

}  // namespace eierl
