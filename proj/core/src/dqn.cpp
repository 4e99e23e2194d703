#include "eierl/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eierl {

DqnState make_dqn(const NetworkShape& shape, Rng& rng, double gamma, double lr) {
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("make_dqn: gamma outside [0, 1]");
  DqnState dqn;
  dqn.online = init_genome(shape, rng);
  dqn.target = dqn.online;
  dqn.gamma = gamma;
  dqn.lr = lr;
  return dqn;
}

std::vector<double> td_targets(const std::vector<Transition>& batch,
                               const PolicyGenome& target, double gamma) {
  if (batch.empty()) throw std::invalid_argument("td_targets: empty batch");
  std::vector<double> ys;
  ys.reserve(batch.size());
  for (const Transition& t : batch) {
    if (t.done) {
      ys.push_back(t.r);
      continue;
    }
    const std::vector<double> q = forward(target, t.s_next);
    double best = q[0];
    for (double v : q) best = v > best ? v : best;
    ys.push_back(t.r + gamma * best);
  }
  return ys;
}

double train_epoch(DqnState& dqn, ReplayBuffer& buffer, Rng& rng) {
  const std::size_t batches =
      buffer.size() / static_cast<std::size_t>(dqn.batch_size);
  // Bootstrap values stay fixed for the whole epoch.
  const PolicyGenome pre_epoch_target = dqn.target;

  double loss_sum = 0.0;
  std::vector<TrainingSample> samples(static_cast<std::size_t>(dqn.batch_size));
  for (std::size_t b = 0; b < batches; ++b) {
    const std::vector<Transition> batch =
        buffer.sample_minibatch(static_cast<std::size_t>(dqn.batch_size), rng);
    std::vector<double> ys = td_targets(batch, pre_epoch_target, dqn.gamma);
    if (std::isfinite(dqn.target_clamp)) {
      for (double& y : ys)
        y = std::clamp(y, -dqn.target_clamp, dqn.target_clamp);
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
      samples[i].obs = batch[i].s;
      samples[i].action = batch[i].a;
      samples[i].target = ys[i];
    }
    auto [loss, grad] = loss_and_gradient(dqn.online, samples);
    clip_l2_norm(grad, dqn.grad_clip);
    dqn.online = sgd_step(dqn.online, grad, dqn.lr);
    loss_sum += loss;
  }
  dqn.target = dqn.online;
  return batches == 0 ? 0.0 : loss_sum / static_cast<double>(batches);
}

int argmax_action(const PolicyGenome& genome, const std::vector<double>& obs) {
  const std::vector<double> q = forward(genome, obs);
  int best = 0;
  for (int i = 1; i < static_cast<int>(q.size()); ++i) {
    if (q[static_cast<std::size_t>(i)] > q[static_cast<std::size_t>(best)])
      best = i;
  }
  return best;
}

int select_action(const PolicyGenome& genome, const std::vector<double>& obs,
                  double epsilon, Rng& rng) {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("select_action: epsilon outside [0, 1]");
  if (uniform01(rng) < epsilon) {
    return static_cast<int>(
        uniform_index(rng, static_cast<std::size_t>(genome.shape.output_dim)));
  }
  return argmax_action(genome, obs);
}

}  // namespace eierl
