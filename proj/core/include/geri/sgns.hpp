#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "geri/alias.hpp"
#include "geri/embedding.hpp"
#include "geri/graph.hpp"
#include "geri/rng.hpp"
#include "geri/walk.hpp"

namespace geri {

enum class WalkStarts : std::uint8_t { kAll, kTargets };

struct TrainConfig {
  std::uint32_t dim = 128;
  std::uint32_t negatives = 5;
  double lr = 0.025;          // linear decay to lr * 1e-4 over the run
  double lambda1 = 1.0;       // step scale for bridge-centered pairs
  std::uint64_t seed = 1;
  std::uint32_t workers = 1;  // 1 is bit-reproducible; >1 races benignly
  WalkStarts walk_starts = WalkStarts::kAll;
  bool two_matrix = false;    // separate context matrix (ablation)

  void validate() const;
};

// Negative-sampling noise: weighted degree raised to 3/4, over every node
// with at least one neighbor.
class NoiseDistribution {
 public:
  explicit NoiseDistribution(const HeteroNetwork& net);

  NodeId sample(Rng& rng) const { return table_.sample(rng); }
  const AliasTable& table() const { return table_; }

 private:
  AliasTable table_;
};

// --- SGNS loss and gradient --------------------------------------------
//
// loss = -log s(c.u) - sum_j log s(-n_j.u), dots clamped to +-30 before
// exponentiation. Templated so tests can run the same expressions in double.

template <class T>
T sgns_dot(std::span<const T> a, std::span<const T> b) {
  T dot = 0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return dot;
}

template <class T>
T sgns_clamp(T dot) {
  if (dot > T(30)) return T(30);
  if (dot < T(-30)) return T(-30);
  return dot;
}

template <class T>
T sgns_sigmoid(T z) {
  if (z >= 0) {
    return T(1) / (T(1) + std::exp(-z));
  }
  const T e = std::exp(z);
  return e / (T(1) + e);
}

// negatives is k rows of d, flattened.
template <class T>
T pair_loss(std::span<const T> center, std::span<const T> context, std::span<const T> negatives) {
  const std::size_t d = center.size();
  const T pos = sgns_clamp(sgns_dot(center, context));
  // -log s(z) computed stably
  auto nls = [](T z) { return z >= 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z)); };
  T loss = nls(pos);
  for (std::size_t off = 0; off < negatives.size(); off += d) {
    const T neg = sgns_clamp(sgns_dot(center, negatives.subspan(off, d)));
    loss += nls(-neg);
  }
  return loss;
}

// Gradients of pair_loss with respect to center, context, and each negative
// row. grad_negatives is k rows of d, flattened, like negatives.
template <class T>
void pair_grad(std::span<const T> center, std::span<const T> context, std::span<const T> negatives,
               std::span<T> grad_center, std::span<T> grad_context, std::span<T> grad_negatives) {
  const std::size_t d = center.size();
  const T pos = sgns_clamp(sgns_dot(center, context));
  const T g_pos = sgns_sigmoid(pos) - T(1);
  for (std::size_t i = 0; i < d; ++i) {
    grad_center[i] = g_pos * context[i];
    grad_context[i] = g_pos * center[i];
  }
  for (std::size_t off = 0; off < negatives.size(); off += d) {
    const auto neg_row = negatives.subspan(off, d);
    const T g_neg = sgns_sigmoid(sgns_clamp(sgns_dot(center, neg_row)));
    for (std::size_t i = 0; i < d; ++i) {
      grad_negatives[off + i] = g_neg * center[i];
      grad_center[i] += g_neg * neg_row[i];
    }
  }
}

// One stochastic update on the shared matrix: samples cfg.negatives noise
// rows (resampling draws equal to center/context up to 10 times, then
// skipping), then applies -step_size * gradient. Bridge-centered pairs are
// scaled by lambda1. When `context_matrix` is null the single-matrix form is
// used. `sampled` (optional) receives the negative ids actually applied.
void sgd_step(EmbeddingMatrix& matrix, EmbeddingMatrix* context_matrix, NodeId center,
              NodeId context, const NoiseDistribution& noise, const TrainConfig& cfg,
              std::uint32_t target_count, double step_size, Rng& rng,
              std::vector<NodeId>* sampled = nullptr);

struct TrainStats {
  std::uint64_t walks = 0;
  std::uint64_t dead_end_walks = 0;
  std::uint64_t pairs = 0;
  std::uint64_t skipped_negatives = 0;
};

// Full training run per the biased-walk + SkipGram recipe: walks_per_node
// epochs, each shuffling the start list, walking once per start and applying
// one sgd_step per window pair. Returns the full matrix (targets then
// bridges).
EmbeddingMatrix train(const HeteroNetwork& net, const BiasTables& bias, const WalkConfig& wcfg,
                      const TrainConfig& tcfg, TrainStats* stats = nullptr);

// Exact softmax log-likelihood of the given pairs under matrix rows, with
// bridge-centered terms weighted by lambda1. Quadratic in node count; guarded
// to <= 1000 nodes. Test oracle.
double exact_objective(const EmbeddingMatrix& matrix, const EmbeddingMatrix* context_matrix,
                       std::span<const std::pair<NodeId, NodeId>> pairs, double lambda1,
                       std::uint32_t target_count);

}  // namespace geri
