#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "geri/alias.hpp"
#include "geri/graph.hpp"
#include "geri/rng.hpp"

namespace geri {

// Sentinel predecessor for the first step of a walk, which has no history;
// the step then samples proportionally to edge weights.
inline constexpr NodeId kNoPredecessor = std::numeric_limits<NodeId>::max();

enum class BiasMode : std::uint8_t {
  kPrecompute,  // one alias table per directed edge, O(1) steps
  kReject,      // rejection sampling against the first-order proposal
  kAuto,        // precompute unless the table footprint would be excessive
};

struct WalkConfig {
  double p = 1.0;  // back parameter
  double q = 1.0;  // out-target parameter
  double r = 1.0;  // out-bridge parameter
  std::uint32_t walk_length = 150;
  std::uint32_t walks_per_node = 10;
  std::uint32_t window = 10;
  std::uint64_t seed = 1;
  BiasMode bias_mode = BiasMode::kAuto;

  void validate() const;
};

// Unnormalized second-order transition weight beta from v to x given the walk
// arrived at v from t. Case by (kind(t), kind(v)):
//   (Target, Target)  back p / distance-1 factor 1 / out q (target) or r (bridge)
//   (Target, Bridge)  0 for the return move, edge weight otherwise
//   (Bridge, Target)  same shape as the first case
// With t == kNoPredecessor the weight is just the edge weight.
double transition_weight(NodeId t, NodeId v, NodeId x, const HeteroNetwork& net,
                         const WalkConfig& cfg);

// Precomputed sampling state for biased walks. First-step tables always
// exist; second-step tables exist per directed edge in precompute mode, and
// rejection sampling covers the rest. Immutable after construction.
class BiasTables {
 public:
  static BiasTables preprocess(const HeteroNetwork& net, const WalkConfig& cfg);

  BiasMode mode() const { return mode_; }

  const AliasTable& first_step(NodeId v) const { return first_step_[v]; }

  // Table over neighbors of v given the walk came from sorted-neighbor
  // position t_pos (see sorted_position). Precompute mode only.
  const AliasTable& second_step(NodeId v, std::uint32_t t_pos) const {
    return second_step_[v][t_pos];
  }

  // Position of x in v's id-sorted neighbor list, or nullopt if absent.
  std::optional<std::uint32_t> sorted_position(NodeId v, NodeId x) const;
  bool adjacent(NodeId v, NodeId x) const { return sorted_position(v, x).has_value(); }

  // Entries across all second-step tables for the given network; the auto
  // mode switches to rejection above kAutoEntryLimit.
  static std::uint64_t second_step_entry_estimate(const HeteroNetwork& net);
  static constexpr std::uint64_t kAutoEntryLimit = 16ull << 20;

  // One biased step: samples a successor of v for predecessor t (which may be
  // kNoPredecessor); returns nullopt on a dead end.
  std::optional<NodeId> step(const HeteroNetwork& net, NodeId t, NodeId v, Rng& rng) const;

 private:
  BiasMode mode_ = BiasMode::kPrecompute;
  double p_ = 1.0, q_ = 1.0, r_ = 1.0;
  double max_factor_ = 1.0;
  std::vector<AliasTable> first_step_;
  std::vector<std::vector<AliasTable>> second_step_;       // [v][t_pos], precompute mode
  std::vector<std::vector<Neighbor>> sorted_adjacency_;    // per node, ascending id

  std::optional<NodeId> reject_step(const HeteroNetwork& net, NodeId t, NodeId v, Rng& rng) const;
  std::optional<NodeId> exact_step(const HeteroNetwork& net, NodeId t, NodeId v, Rng& rng) const;
};

struct Walk {
  std::vector<NodeId> nodes;
};

// Biased second-order walk of at most `length` nodes starting at `start`;
// terminates early on dead ends.
Walk random_walk(const HeteroNetwork& net, const BiasTables& bias, NodeId start,
                 std::uint32_t length, Rng& rng);

// Symmetric window pairs (walk[i], walk[j]) for 0 < |i - j| <= window, in
// (i ascending, j ascending) order.
std::vector<std::pair<NodeId, NodeId>> generate_training_pairs(const Walk& walk,
                                                               std::uint32_t window);

// Number of pairs a full-length walk yields; short walks yield fewer.
std::uint64_t pairs_per_walk(std::uint32_t walk_length, std::uint32_t window);

// Debug corpus dump: one walk per line, targets as plain ids, bridges as
// "w<word-index>".
void write_walk(std::ostream& out, const Walk& walk, std::uint32_t target_count);

}  // namespace geri
