#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "geri/error.hpp"

namespace geri {

using NodeId = std::uint32_t;
using WordId = std::uint32_t;

enum class NodeKind : std::uint8_t { Target, Bridge };

struct Edge {
  NodeId src;
  NodeId dst;
  double weight;
};

struct NodeTextEntry {
  NodeId node;
  WordId word;
  double value;
};

struct EdgeTextEntry {
  NodeId node_i;
  NodeId node_j;
  WordId word;
  double value;
};

// Word string <-> dense WordId map, insertion-ordered.
class Vocabulary {
 public:
  WordId intern(const std::string& word);
  std::optional<WordId> find(const std::string& word) const;
  const std::string& word(WordId id) const { return words_.at(id); }
  std::uint32_t size() const { return static_cast<std::uint32_t>(words_.size()); }

  bool operator==(const Vocabulary& other) const { return words_ == other.words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> index_;
};

// The input graph with text attributes: targets, weighted undirected edges,
// sparse node-text and edge-text occurrence entries.
struct InfoNetwork {
  std::uint32_t targets = 0;
  std::vector<Edge> edges;
  std::vector<NodeTextEntry> node_text;
  std::vector<EdgeTextEntry> edge_text;
  Vocabulary vocabulary;

  bool operator==(const InfoNetwork& other) const;
};

struct Neighbor {
  NodeId id;
  double weight;

  bool operator==(const Neighbor&) const = default;
};

// Bipartite-augmented graph: target nodes keep their original edges and gain
// weighted links to the bridge (word) nodes that occur in their text. Bridge
// ids follow target ids: bridge for word w is target_count() + w.
// Immutable once built; safe for unsynchronized concurrent reads.
class HeteroNetwork {
 public:
  HeteroNetwork() = default;
  HeteroNetwork(std::uint32_t target_count, std::uint32_t bridge_count);

  std::uint32_t target_count() const { return target_count_; }
  std::uint32_t bridge_count() const { return bridge_count_; }
  std::uint32_t node_count() const { return target_count_ + bridge_count_; }

  NodeKind kind(NodeId v) const {
    check_id(v);
    return v < target_count_ ? NodeKind::Target : NodeKind::Bridge;
  }
  bool is_target(NodeId v) const { return v < target_count_; }

  const std::vector<Neighbor>& neighbors(NodeId v) const {
    check_id(v);
    return adjacency_[v];
  }

  std::size_t degree(NodeId v) const { return neighbors(v).size(); }
  double weighted_degree(NodeId v) const;

  // Weight of edge (v, x); 0 if absent. Linear in deg(v).
  double edge_weight(NodeId v, NodeId x) const;

  std::size_t edge_count() const { return edge_count_; }
  double total_edge_weight() const;

  // Adds both directions; callers are responsible for not duplicating.
  void add_undirected_edge(NodeId u, NodeId v, double weight);

 private:
  void check_id(NodeId v) const {
    if (v >= node_count()) {
      throw validation_error("node id " + std::to_string(v) + " out of range (node count " +
                             std::to_string(node_count()) + ")");
    }
  }

  std::uint32_t target_count_ = 0;
  std::uint32_t bridge_count_ = 0;
  std::size_t edge_count_ = 0;
  std::vector<std::vector<Neighbor>> adjacency_;
};

// --- file formats -----------------------------------------------------------
//
// Edge file:      "src dst [weight]"      one undirected edge per line
// Node-text file: "node word count"
// Edge-text file: "node_i node_j word count"
// Lines starting with '#' and blank lines are ignored. Ids are 0-based.

InfoNetwork parse_info_network(const std::string& edge_path,
                               const std::string& node_text_path,
                               const std::optional<std::string>& edge_text_path = std::nullopt);

// Writes the three input files back out; parse(save(net)) == net.
void save_info_network(const InfoNetwork& net, const std::string& edge_path,
                       const std::string& node_text_path,
                       const std::optional<std::string>& edge_text_path = std::nullopt);

HeteroNetwork build_hetero(const InfoNetwork& net);

// Edge-file format with a "#hetero targets=<n> bridges=<m>" header; edges are
// emitted canonically (src < dst, ascending) so equal networks serialize to
// equal bytes.
void save_hetero(const HeteroNetwork& net, const std::string& path);
HeteroNetwork load_hetero(const std::string& path);

const std::vector<Neighbor>& neighbors(const HeteroNetwork& net, NodeId v);

}  // namespace geri
