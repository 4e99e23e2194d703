#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "eierl/rng.hpp"

namespace eierl {

/// Fixed feedforward architecture: input -> hidden layers (ReLU) -> linear
/// output. Parameter layout is flat and fixed: W1, b1, W2, b2, ..., row-major
/// within each weight matrix (row = output unit, col = input unit).
struct NetworkShape {
  int input_dim = 0;
  std::vector<int> hidden_dims{80, 80};
  int output_dim = 0;

  int num_layers() const { return static_cast<int>(hidden_dims.size()) + 1; }
  int fan_in(int layer) const;
  int fan_out(int layer) const;

  /// Flat offset of layer's weight matrix.
  std::size_t weight_offset(int layer) const;
  std::size_t weight_index(int layer, int row, int col) const;
  std::size_t bias_index(int layer, int row) const;
  std::size_t genome_len() const { return weight_offset(num_layers()); }

  bool valid() const;
  bool operator==(const NetworkShape&) const = default;
};

/// Flat parameter vector of a Q-network; the unit of evolution, injection and
/// gradient training.
struct PolicyGenome {
  NetworkShape shape;
  std::vector<double> params;

  bool well_formed() const {
    return shape.valid() && params.size() == shape.genome_len();
  }
};

/// Same layout as PolicyGenome::params.
using GradientVector = std::vector<double>;

/// One layer of the structured (matrix-indexed) view of a genome.
struct LayerWeights {
  int rows = 0;  // fan_out
  int cols = 0;  // fan_in
  std::vector<double> w;  // row-major, rows*cols
  std::vector<double> b;  // rows

  bool operator==(const LayerWeights&) const = default;
};

using StructuredWeights = std::vector<LayerWeights>;

struct TrainingSample {
  std::vector<double> obs;
  int action = 0;
  double target = 0.0;
};

/// Zero-parameter genome of the given shape.
PolicyGenome zero_genome(const NetworkShape& shape);

/// Weights ~ U(-1/sqrt(fan_in), +1/sqrt(fan_in)), biases 0.
PolicyGenome init_genome(const NetworkShape& shape, Rng& rng);

/// Deterministic forward pass: affine -> ReLU -> ... -> affine (no output
/// activation). Throws std::invalid_argument on dimension mismatch.
std::vector<double> forward(const PolicyGenome& genome,
                            std::span<const double> obs);

/// Mean-squared loss over the batch, residual taken only at each sample's
/// chosen action. Returns the raw (unclipped) gradient in genome layout.
/// Throws std::invalid_argument on an empty batch.
std::pair<double, GradientVector> loss_and_gradient(
    const PolicyGenome& genome, const std::vector<TrainingSample>& batch);

/// params' = params - lr * grad. Throws on length mismatch or lr <= 0.
PolicyGenome sgd_step(const PolicyGenome& genome, const GradientVector& grad,
                      double lr);

/// Scales grad in place so its L2 norm is at most max_norm. Returns the norm
/// before clipping.
double clip_l2_norm(GradientVector& grad, double max_norm);

StructuredWeights unflatten(const PolicyGenome& genome);
PolicyGenome flatten(const StructuredWeights& layers, const NetworkShape& shape);

}  // namespace eierl
