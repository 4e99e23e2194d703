#include "eierl/network.hpp"

#include <cmath>
#include <stdexcept>

namespace eierl {

namespace {

int dim_at(const NetworkShape& s, int i) {
  if (i == 0) return s.input_dim;
  if (i <= static_cast<int>(s.hidden_dims.size()))
    return s.hidden_dims[static_cast<std::size_t>(i - 1)];
  return s.output_dim;
}

}  // namespace

int NetworkShape::fan_in(int layer) const { return dim_at(*this, layer); }

int NetworkShape::fan_out(int layer) const { return dim_at(*this, layer + 1); }

std::size_t NetworkShape::weight_offset(int layer) const {
  std::size_t off = 0;
  for (int l = 0; l < layer; ++l) {
    off += static_cast<std::size_t>(fan_in(l)) * fan_out(l) + fan_out(l);
  }
  return off;
}

std::size_t NetworkShape::weight_index(int layer, int row, int col) const {
  return weight_offset(layer) + static_cast<std::size_t>(row) * fan_in(layer) +
         col;
}

std::size_t NetworkShape::bias_index(int layer, int row) const {
  return weight_offset(layer) +
         static_cast<std::size_t>(fan_in(layer)) * fan_out(layer) + row;
}

bool NetworkShape::valid() const {
  if (input_dim < 1 || output_dim < 1) return false;
  for (int h : hidden_dims) {
    if (h < 1) return false;
  }
  return true;
}

PolicyGenome zero_genome(const NetworkShape& shape) {
  if (!shape.valid()) throw std::invalid_argument("zero_genome: invalid shape");
  return PolicyGenome{shape, std::vector<double>(shape.genome_len(), 0.0)};
}

PolicyGenome init_genome(const NetworkShape& shape, Rng& rng) {
  PolicyGenome g = zero_genome(shape);
  for (int l = 0; l < shape.num_layers(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(shape.fan_in(l)));
    std::uniform_real_distribution<double> dist(-bound, bound);
    const std::size_t w0 = shape.weight_offset(l);
    const std::size_t nw =
        static_cast<std::size_t>(shape.fan_in(l)) * shape.fan_out(l);
    for (std::size_t i = 0; i < nw; ++i) g.params[w0 + i] = dist(rng);
    // biases stay 0
  }
  return g;
}

namespace {

// z = W x + b for one layer, reading directly from the flat genome.
void affine(const PolicyGenome& g, int layer, const double* x, double* z) {
  const NetworkShape& s = g.shape;
  const int rows = s.fan_out(layer);
  const int cols = s.fan_in(layer);
  const double* w = g.params.data() + s.weight_offset(layer);
  const double* b = w + static_cast<std::size_t>(rows) * cols;
  for (int r = 0; r < rows; ++r) {
    const double* wr = w + static_cast<std::size_t>(r) * cols;
    double acc = b[r];
    for (int c = 0; c < cols; ++c) acc += wr[c] * x[c];
    z[r] = acc;
  }
}

}  // namespace

std::vector<double> forward(const PolicyGenome& genome,
                            std::span<const double> obs) {
  if (!genome.well_formed())
    throw std::invalid_argument("forward: malformed genome");
  if (static_cast<int>(obs.size()) != genome.shape.input_dim)
    throw std::invalid_argument("forward: observation dimension mismatch");

  const NetworkShape& s = genome.shape;
  std::vector<double> cur(obs.begin(), obs.end());
  std::vector<double> next;
  for (int l = 0; l < s.num_layers(); ++l) {
    next.assign(static_cast<std::size_t>(s.fan_out(l)), 0.0);
    affine(genome, l, cur.data(), next.data());
    if (l + 1 < s.num_layers()) {
      for (double& v : next) v = v > 0.0 ? v : 0.0;
    }
    cur.swap(next);
  }
  return cur;
}

std::pair<double, GradientVector> loss_and_gradient(
    const PolicyGenome& genome, const std::vector<TrainingSample>& batch) {
  if (!genome.well_formed())
    throw std::invalid_argument("loss_and_gradient: malformed genome");
  if (batch.empty())
    throw std::invalid_argument("loss_and_gradient: empty batch");

  const NetworkShape& s = genome.shape;
  const int layers = s.num_layers();
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  double loss = 0.0;
  GradientVector grad(s.genome_len(), 0.0);

  // Per-layer pre-activations; acts[l] is the input to layer l.
  std::vector<std::vector<double>> acts(static_cast<std::size_t>(layers) + 1);
  std::vector<std::vector<double>> pre(static_cast<std::size_t>(layers));

  for (const TrainingSample& sample : batch) {
    if (static_cast<int>(sample.obs.size()) != s.input_dim)
      throw std::invalid_argument("loss_and_gradient: observation dimension mismatch");
    if (sample.action < 0 || sample.action >= s.output_dim)
      throw std::invalid_argument("loss_and_gradient: action index out of range");

    acts[0] = sample.obs;
    for (int l = 0; l < layers; ++l) {
      pre[l].assign(static_cast<std::size_t>(s.fan_out(l)), 0.0);
      affine(genome, l, acts[l].data(), pre[l].data());
      acts[l + 1] = pre[l];
      if (l + 1 < layers) {
        for (double& v : acts[l + 1]) v = v > 0.0 ? v : 0.0;
      }
    }

    const double residual = acts[layers][static_cast<std::size_t>(sample.action)] -
                            sample.target;
    loss += residual * residual * inv_n;

    // dL/dz for the output layer: nonzero only at the chosen action.
    std::vector<double> delta(static_cast<std::size_t>(s.output_dim), 0.0);
    delta[static_cast<std::size_t>(sample.action)] = 2.0 * residual * inv_n;

    for (int l = layers - 1; l >= 0; --l) {
      const int rows = s.fan_out(l);
      const int cols = s.fan_in(l);
      double* gw = grad.data() + s.weight_offset(l);
      double* gb = gw + static_cast<std::size_t>(rows) * cols;
      const double* x = acts[l].data();
      for (int r = 0; r < rows; ++r) {
        const double d = delta[static_cast<std::size_t>(r)];
        if (d == 0.0) continue;
        double* gwr = gw + static_cast<std::size_t>(r) * cols;
        for (int c = 0; c < cols; ++c) gwr[c] += d * x[c];
        gb[r] += d;
      }
      if (l == 0) break;
      const double* w = genome.params.data() + s.weight_offset(l);
      std::vector<double> prev_delta(static_cast<std::size_t>(cols), 0.0);
      for (int r = 0; r < rows; ++r) {
        const double d = delta[static_cast<std::size_t>(r)];
        if (d == 0.0) continue;
        const double* wr = w + static_cast<std::size_t>(r) * cols;
        for (int c = 0; c < cols; ++c) prev_delta[c] += wr[c] * d;
      }
      // ReLU mask of the previous layer's pre-activation.
      const std::vector<double>& zprev = pre[l - 1];
      for (int c = 0; c < cols; ++c) {
        if (zprev[static_cast<std::size_t>(c)] <= 0.0)
          prev_delta[static_cast<std::size_t>(c)] = 0.0;
      }
      delta.swap(prev_delta);
    }
  }
  return {loss, grad};
}

PolicyGenome sgd_step(const PolicyGenome& genome, const GradientVector& grad,
                      double lr) {
  if (lr <= 0.0) throw std::invalid_argument("sgd_step: lr must be positive");
  if (grad.size() != genome.params.size())
    throw std::invalid_argument("sgd_step: gradient length mismatch");
  PolicyGenome out = genome;
  for (std::size_t i = 0; i < grad.size(); ++i) out.params[i] -= lr * grad[i];
  return out;
}

double clip_l2_norm(GradientVector& grad, double max_norm) {
  double sq = 0.0;
  for (double g : grad) sq += g * g;
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    const double scale = max_norm / norm;
    for (double& g : grad) g *= scale;
  }
  return norm;
}

StructuredWeights unflatten(const PolicyGenome& genome) {
  if (!genome.well_formed())
    throw std::invalid_argument("unflatten: malformed genome");
  const NetworkShape& s = genome.shape;
  StructuredWeights layers;
  layers.reserve(static_cast<std::size_t>(s.num_layers()));
  for (int l = 0; l < s.num_layers(); ++l) {
    LayerWeights lw;
    lw.rows = s.fan_out(l);
    lw.cols = s.fan_in(l);
    const std::size_t w0 = s.weight_offset(l);
    const std::size_t nw = static_cast<std::size_t>(lw.rows) * lw.cols;
    lw.w.assign(genome.params.begin() + static_cast<std::ptrdiff_t>(w0),
                genome.params.begin() + static_cast<std::ptrdiff_t>(w0 + nw));
    lw.b.assign(
        genome.params.begin() + static_cast<std::ptrdiff_t>(w0 + nw),
        genome.params.begin() + static_cast<std::ptrdiff_t>(w0 + nw + lw.rows));
    layers.push_back(std::move(lw));
  }
  return layers;
}

PolicyGenome flatten(const StructuredWeights& layers,
                     const NetworkShape& shape) {
  if (static_cast<int>(layers.size()) != shape.num_layers())
    throw std::invalid_argument("flatten: layer count mismatch");
  PolicyGenome g = zero_genome(shape);
  for (int l = 0; l < shape.num_layers(); ++l) {
    const LayerWeights& lw = layers[static_cast<std::size_t>(l)];
    if (lw.rows != shape.fan_out(l) || lw.cols != shape.fan_in(l) ||
        lw.w.size() != static_cast<std::size_t>(lw.rows) * lw.cols ||
        lw.b.size() != static_cast<std::size_t>(lw.rows))
      throw std::invalid_argument("flatten: layer shape mismatch");
    const std::size_t w0 = shape.weight_offset(l);
    std::copy(lw.w.begin(), lw.w.end(),
              g.params.begin() + static_cast<std::ptrdiff_t>(w0));
    std::copy(lw.b.begin(), lw.b.end(),
              g.params.begin() +
                  static_cast<std::ptrdiff_t>(w0 + lw.w.size()));
  }
  return g;
}

}  // namespace eierl
