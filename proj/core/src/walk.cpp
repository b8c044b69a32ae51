#include "geri/walk.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>

namespace geri {

void WalkConfig::validate() const {
  if (!(p > 0.0) || !(q > 0.0) || !(r > 0.0)) {
    throw validation_error("walk parameters p, q, r must be positive");
  }
  if (walk_length < 2) throw validation_error("walk length must be at least 2");
  if (window < 1) throw validation_error("window must be at least 1");
  // walks_per_node == 0 is a legal no-op for the trainer
}

namespace {

// Case factor on top of the edge weight e_vx. `back` means x == t; since x
// and t are both neighbors of v the remaining distance is 1 (adjacent) or 2.
double case_factor([[maybe_unused]] NodeKind kind_t, NodeKind kind_v, NodeKind kind_x, bool back,
                   bool t_adjacent_x, double p, double q, double r) {
  if (kind_v == NodeKind::Bridge) {
    // t -> bridge: never walk back, otherwise plain edge weight.
    assert(kind_t == NodeKind::Target);
    return back ? 0.0 : 1.0;
  }
  // (Target, Target) and (Bridge, Target) share the shape.
  if (back) return p;
  if (t_adjacent_x) return 1.0;
  return kind_x == NodeKind::Target ? q : r;
}

bool adjacent_scan(const HeteroNetwork& net, NodeId a, NodeId b) {
  for (const Neighbor& n : net.neighbors(a)) {
    if (n.id == b) return true;
  }
  return false;
}

}  // namespace

double transition_weight(NodeId t, NodeId v, NodeId x, const HeteroNetwork& net,
                         const WalkConfig& cfg) {
  const double e_vx = net.edge_weight(v, x);
  if (e_vx <= 0.0) {
    throw validation_error("transition_weight: " + std::to_string(x) + " is not a neighbor of " +
                           std::to_string(v));
  }
  if (t == kNoPredecessor) return e_vx;
  return e_vx * case_factor(net.kind(t), net.kind(v), net.kind(x), x == t,
                            adjacent_scan(net, t, x), cfg.p, cfg.q, cfg.r);
}

std::uint64_t BiasTables::second_step_entry_estimate(const HeteroNetwork& net) {
  std::uint64_t entries = 0;
  for (NodeId v = 0; v < net.node_count(); ++v) {
    const std::uint64_t deg = net.degree(v);
    entries += deg * deg;
  }
  return entries;
}

std::optional<std::uint32_t> BiasTables::sorted_position(NodeId v, NodeId x) const {
  const std::vector<Neighbor>& row = sorted_adjacency_[v];
  auto it = std::lower_bound(row.begin(), row.end(), x,
                             [](const Neighbor& n, NodeId id) { return n.id < id; });
  if (it == row.end() || it->id != x) return std::nullopt;
  return static_cast<std::uint32_t>(it - row.begin());
}

BiasTables BiasTables::preprocess(const HeteroNetwork& net, const WalkConfig& cfg) {
  cfg.validate();
  BiasTables bias;
  bias.p_ = cfg.p;
  bias.q_ = cfg.q;
  bias.r_ = cfg.r;
  bias.max_factor_ = std::max({cfg.p, cfg.q, cfg.r, 1.0});
  bias.mode_ = cfg.bias_mode;
  if (bias.mode_ == BiasMode::kAuto) {
    bias.mode_ = second_step_entry_estimate(net) <= kAutoEntryLimit ? BiasMode::kPrecompute
                                                                    : BiasMode::kReject;
  }

  const std::uint32_t n = net.node_count();
  bias.sorted_adjacency_.resize(n);
  bias.first_step_.resize(n);
  for (NodeId v = 0; v < n; ++v) {
    const std::vector<Neighbor>& row = net.neighbors(v);
    bias.sorted_adjacency_[v] = row;
    std::sort(bias.sorted_adjacency_[v].begin(), bias.sorted_adjacency_[v].end(),
              [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });

    std::vector<std::uint32_t> outcomes(row.size());
    std::vector<double> weights(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) {
      outcomes[i] = row[i].id;
      weights[i] = row[i].weight;
    }
    bias.first_step_[v] = AliasTable::build(std::move(outcomes), weights);
  }

  if (bias.mode_ != BiasMode::kPrecompute) return bias;

  bias.second_step_.resize(n);
  std::vector<std::uint32_t> outcomes;
  std::vector<double> weights;
  for (NodeId v = 0; v < n; ++v) {
    const std::vector<Neighbor>& preds = bias.sorted_adjacency_[v];
    const std::vector<Neighbor>& row = bias.sorted_adjacency_[v];
    bias.second_step_[v].resize(preds.size());
    const NodeKind kind_v = net.kind(v);
    for (std::uint32_t t_pos = 0; t_pos < preds.size(); ++t_pos) {
      const NodeId t = preds[t_pos].id;
      const NodeKind kind_t = net.kind(t);
      outcomes.clear();
      weights.clear();
      outcomes.reserve(row.size());
      weights.reserve(row.size());
      for (const Neighbor& nb : row) {
        const double factor =
            case_factor(kind_t, kind_v, net.kind(nb.id), nb.id == t,
                        bias.adjacent(t, nb.id), cfg.p, cfg.q, cfg.r);
        outcomes.push_back(nb.id);
        weights.push_back(factor * nb.weight);
      }
      bias.second_step_[v][t_pos] = AliasTable::build(outcomes, weights);
    }
  }
  return bias;
}

std::optional<NodeId> BiasTables::step(const HeteroNetwork& net, NodeId t, NodeId v,
                                       Rng& rng) const {
  if (t == kNoPredecessor) {
    const AliasTable& table = first_step_[v];
    if (table.empty()) return std::nullopt;
    return table.sample(rng);
  }
  if (mode_ == BiasMode::kPrecompute) {
    const auto t_pos = sorted_position(v, t);
    assert(t_pos.has_value());
    const AliasTable& table = second_step_[v][*t_pos];
    if (table.empty()) return std::nullopt;
    return table.sample(rng);
  }
  return reject_step(net, t, v, rng);
}

std::optional<NodeId> BiasTables::reject_step(const HeteroNetwork& net, NodeId t, NodeId v,
                                              Rng& rng) const {
  const AliasTable& proposal = first_step_[v];
  if (proposal.empty()) return std::nullopt;
  const NodeKind kind_v = net.kind(v);
  const NodeKind kind_t = net.kind(t);

  if (kind_v == NodeKind::Bridge) {
    // Only the return move is forbidden; dead end iff t is the sole neighbor.
    if (proposal.size() == 1 && proposal.outcomes()[0] == t) return std::nullopt;
    for (;;) {
      const NodeId x = proposal.sample(rng);
      if (x != t) return x;
    }
  }

  constexpr int kMaxAttempts = 16;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const NodeId x = proposal.sample(rng);
    const double factor = case_factor(kind_t, kind_v, net.kind(x), x == t, adjacent(t, x), p_, q_, r_);
    if (rng.uniform() * max_factor_ < factor) return x;
  }
  // Tiny acceptance ratios fall back to an exact one-shot computation.
  return exact_step(net, t, v, rng);
}

std::optional<NodeId> BiasTables::exact_step(const HeteroNetwork& net, NodeId t, NodeId v,
                                             Rng& rng) const {
  const std::vector<Neighbor>& row = sorted_adjacency_[v];
  const NodeKind kind_v = net.kind(v);
  const NodeKind kind_t = net.kind(t);
  double total = 0.0;
  for (const Neighbor& nb : row) {
    total += nb.weight * case_factor(kind_t, kind_v, net.kind(nb.id), nb.id == t,
                                     adjacent(t, nb.id), p_, q_, r_);
  }
  if (total <= 0.0) return std::nullopt;
  double u = rng.uniform() * total;
  for (const Neighbor& nb : row) {
    u -= nb.weight * case_factor(kind_t, kind_v, net.kind(nb.id), nb.id == t,
                                 adjacent(t, nb.id), p_, q_, r_);
    if (u <= 0.0) return nb.id;
  }
  return row.back().id;
}

Walk random_walk(const HeteroNetwork& net, const BiasTables& bias, NodeId start,
                 std::uint32_t length, Rng& rng) {
  Walk walk;
  if (start >= net.node_count()) {
    throw validation_error("walk start " + std::to_string(start) + " out of range");
  }
  walk.nodes.reserve(length);
  walk.nodes.push_back(start);
  NodeId prev = kNoPredecessor;
  NodeId cur = start;
  while (walk.nodes.size() < length) {
    const std::optional<NodeId> next = bias.step(net, prev, cur, rng);
    if (!next) break;
    walk.nodes.push_back(*next);
    prev = cur;
    cur = *next;
  }
  return walk;
}

std::vector<std::pair<NodeId, NodeId>> generate_training_pairs(const Walk& walk,
                                                               std::uint32_t window) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  const std::size_t n = walk.nodes.size();
  if (n < 2) return pairs;
  pairs.reserve(pairs_per_walk(static_cast<std::uint32_t>(n), window));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i > window ? i - window : 0;
    const std::size_t hi = std::min(n - 1, i + window);
    for (std::size_t j = lo; j <= hi; ++j) {
      if (j == i) continue;
      pairs.emplace_back(walk.nodes[i], walk.nodes[j]);
    }
  }
  return pairs;
}

std::uint64_t pairs_per_walk(std::uint32_t walk_length, std::uint32_t window) {
  std::uint64_t count = 0;
  for (std::uint64_t i = 0; i < walk_length; ++i) {
    count += std::min<std::uint64_t>(i, window);
    count += std::min<std::uint64_t>(walk_length - 1 - i, window);
  }
  return count;
}

void write_walk(std::ostream& out, const Walk& walk, std::uint32_t target_count) {
  for (std::size_t i = 0; i < walk.nodes.size(); ++i) {
    if (i > 0) out << ' ';
    const NodeId v = walk.nodes[i];
    if (v < target_count) {
      out << v;
    } else {
      out << 'w' << (v - target_count);
    }
  }
  out << '\n';
}

}  // namespace geri
