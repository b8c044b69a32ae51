#include "geri/sgns.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <numeric>
#include <thread>

#include "geri/log.hpp"

namespace geri {

void TrainConfig::validate() const {
  if (dim < 1) throw validation_error("embedding dimension must be at least 1");
  if (negatives < 1) throw validation_error("negative sample count must be at least 1");
  if (!(lr > 0.0)) throw validation_error("learning rate must be positive");
  if (lambda1 < 0.0) throw validation_error("lambda1 must be non-negative");
  if (workers < 1) throw validation_error("worker count must be at least 1");
}

NoiseDistribution::NoiseDistribution(const HeteroNetwork& net) {
  std::vector<std::uint32_t> outcomes;
  std::vector<double> weights;
  outcomes.reserve(net.node_count());
  weights.reserve(net.node_count());
  for (NodeId v = 0; v < net.node_count(); ++v) {
    const double wd = net.weighted_degree(v);
    if (wd > 0.0) {
      outcomes.push_back(v);
      weights.push_back(std::pow(wd, 0.75));
    }
  }
  table_ = AliasTable::build(std::move(outcomes), weights);
}

namespace {

inline float dot_f(const float* a, const float* b, std::uint32_t d) {
  float acc = 0.0f;
  for (std::uint32_t i = 0; i < d; ++i) acc += a[i] * b[i];
  return acc;
}

inline void axpy_f(float* y, float alpha, const float* x, std::uint32_t d) {
  for (std::uint32_t i = 0; i < d; ++i) y[i] += alpha * x[i];
}

inline float sigmoid_f(float z) {
  if (z > 30.0f) z = 30.0f;
  if (z < -30.0f) z = -30.0f;
  if (z >= 0.0f) return 1.0f / (1.0f + std::exp(-z));
  const float e = std::exp(z);
  return e / (1.0f + e);
}

}  // namespace

void sgd_step(EmbeddingMatrix& matrix, EmbeddingMatrix* context_matrix, NodeId center,
              NodeId context, const NoiseDistribution& noise, const TrainConfig& cfg,
              std::uint32_t target_count, double step_size, Rng& rng,
              std::vector<NodeId>* sampled) {
  const double scale = center >= target_count ? step_size * cfg.lambda1 : step_size;
  EmbeddingMatrix& ctx = context_matrix != nullptr ? *context_matrix : matrix;
  const std::uint32_t d = matrix.dim();

  // Sampling happens even for a zero step so the RNG stream (and therefore
  // the rest of a deterministic run) does not depend on lambda1.
  thread_local std::vector<NodeId> negs;
  negs.clear();
  for (std::uint32_t k = 0; k < cfg.negatives; ++k) {
    NodeId n = center;
    bool ok = false;
    for (int attempt = 0; attempt < 10; ++attempt) {
      n = noise.sample(rng);
      if (n != center && n != context) {
        ok = true;
        break;
      }
    }
    if (ok) negs.push_back(n);
  }
  if (sampled != nullptr) *sampled = negs;
  if (scale == 0.0) return;

  float* u = matrix.row(center);
  float* c = ctx.row(context);
  const float lr = static_cast<float>(scale);

  thread_local std::vector<float> u_delta;
  u_delta.assign(d, 0.0f);

  const float g_pos = (sigmoid_f(dot_f(u, c, d)) - 1.0f) * lr;
  axpy_f(u_delta.data(), g_pos, c, d);
  axpy_f(c, g_pos, u, d);

  for (const NodeId n : negs) {
    float* nv = ctx.row(n);
    const float g_neg = sigmoid_f(dot_f(u, nv, d)) * lr;
    axpy_f(u_delta.data(), g_neg, nv, d);
    axpy_f(nv, g_neg, u, d);
  }
  // update = -step * grad
  for (std::uint32_t i = 0; i < d; ++i) u[i] -= u_delta[i];
}

namespace {

std::vector<NodeId> start_nodes(const HeteroNetwork& net, WalkStarts starts) {
  const std::uint32_t n =
      starts == WalkStarts::kAll ? net.node_count() : net.target_count();
  std::vector<NodeId> nodes(n);
  std::iota(nodes.begin(), nodes.end(), 0u);
  return nodes;
}

}  // namespace

EmbeddingMatrix train(const HeteroNetwork& net, const BiasTables& bias, const WalkConfig& wcfg,
                      const TrainConfig& tcfg, TrainStats* stats_out) {
  wcfg.validate();
  tcfg.validate();

  EmbeddingMatrix matrix =
      EmbeddingMatrix::standard_normal(net.node_count(), tcfg.dim, tcfg.seed);
  EmbeddingMatrix context_matrix;
  if (tcfg.two_matrix) {
    context_matrix =
        EmbeddingMatrix::standard_normal(net.node_count(), tcfg.dim, mix_seed(tcfg.seed, 0xc07ULL));
  }
  if (net.node_count() == 0) return matrix;

  const NoiseDistribution noise(net);
  std::vector<NodeId> starts = start_nodes(net, tcfg.walk_starts);

  const std::uint64_t total_pairs =
      std::max<std::uint64_t>(1, static_cast<std::uint64_t>(wcfg.walks_per_node) * starts.size() *
                                     pairs_per_walk(wcfg.walk_length, wcfg.window));
  const double lr_floor = tcfg.lr * 1e-4;

  std::atomic<std::uint64_t> pairs_done{0};
  std::atomic<std::uint64_t> dead_ends{0};
  std::atomic<std::uint64_t> pair_count{0};
  std::atomic<std::uint64_t> walk_count{0};

  for (std::uint32_t epoch = 0; epoch < wcfg.walks_per_node; ++epoch) {
    Rng shuffle_rng(mix_seed(tcfg.seed, 0x5471ULL, epoch));
    shuffle_rng.shuffle(starts.data(), starts.size());

    auto run_range = [&](std::size_t begin, std::size_t end) {
      std::uint64_t local_done = 0;
      for (std::size_t idx = begin; idx < end; ++idx) {
        const NodeId s = starts[idx];
        // One stream per (seed, start, epoch): the corpus is identical
        // regardless of worker count.
        Rng rng(mix_seed(wcfg.seed ^ s, 0x9a17ULL, epoch));
        const Walk walk = random_walk(net, bias, s, wcfg.walk_length, rng);
        walk_count.fetch_add(1, std::memory_order_relaxed);
        if (walk.nodes.size() < wcfg.walk_length) {
          dead_ends.fetch_add(1, std::memory_order_relaxed);
        }
        const auto pairs = generate_training_pairs(walk, wcfg.window);
        pair_count.fetch_add(pairs.size(), std::memory_order_relaxed);
        for (const auto& [center, context] : pairs) {
          const std::uint64_t done = pairs_done.load(std::memory_order_relaxed) + local_done;
          const double frac = std::min(1.0, static_cast<double>(done) / total_pairs);
          const double lr = std::max(lr_floor, tcfg.lr * (1.0 - frac));
          sgd_step(matrix, tcfg.two_matrix ? &context_matrix : nullptr, center, context, noise,
                   tcfg, net.target_count(), lr, rng);
          ++local_done;
        }
        if (local_done >= 4096) {
          pairs_done.fetch_add(local_done, std::memory_order_relaxed);
          local_done = 0;
        }
      }
      pairs_done.fetch_add(local_done, std::memory_order_relaxed);
    };

    const std::uint32_t workers = std::min<std::uint32_t>(
        tcfg.workers, std::max<std::uint32_t>(1, static_cast<std::uint32_t>(starts.size())));
    if (workers <= 1) {
      run_range(0, starts.size());
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      const std::size_t chunk = (starts.size() + workers - 1) / workers;
      for (std::uint32_t w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(starts.size(), static_cast<std::size_t>(w) * chunk);
        const std::size_t end = std::min(starts.size(), begin + chunk);
        if (begin < end) pool.emplace_back(run_range, begin, end);
      }
      for (std::thread& th : pool) th.join();
    }
  }

  if (stats_out != nullptr) {
    stats_out->walks = walk_count.load();
    stats_out->dead_end_walks = dead_ends.load();
    stats_out->pairs = pair_count.load();
  }
  log::debug("train: %llu walks (%llu dead-ended early), %llu pairs",
             static_cast<unsigned long long>(walk_count.load()),
             static_cast<unsigned long long>(dead_ends.load()),
             static_cast<unsigned long long>(pair_count.load()));
  return matrix;
}

double exact_objective(const EmbeddingMatrix& matrix, const EmbeddingMatrix* context_matrix,
                       std::span<const std::pair<NodeId, NodeId>> pairs, double lambda1,
                       std::uint32_t target_count) {
  const std::uint32_t n = matrix.rows();
  if (n > 1000) {
    throw validation_error("exact_objective is a small-graph oracle (node count > 1000)");
  }
  const EmbeddingMatrix& ctx = context_matrix != nullptr ? *context_matrix : matrix;
  const std::uint32_t d = matrix.dim();

  double objective = 0.0;
  std::vector<double> logits(n);
  for (const auto& [center, context] : pairs) {
    const float* u = matrix.row(center);
    double max_logit = -1e300;
    for (std::uint32_t v = 0; v < n; ++v) {
      double dot = 0.0;
      const float* cv = ctx.row(v);
      for (std::uint32_t i = 0; i < d; ++i) dot += static_cast<double>(u[i]) * cv[i];
      logits[v] = dot;
      max_logit = std::max(max_logit, dot);
    }
    double sum = 0.0;
    for (std::uint32_t v = 0; v < n; ++v) sum += std::exp(logits[v] - max_logit);
    const double log_prob = logits[context] - max_logit - std::log(sum);
    objective += center >= target_count ? lambda1 * log_prob : log_prob;
  }
  return objective;
}

}  // namespace geri
