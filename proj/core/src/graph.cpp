#include "geri/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <tuple>
#include <unordered_set>

namespace geri {

WordId Vocabulary::intern(const std::string& word) {
  auto it = index_.find(word);
  if (it != index_.end()) return it->second;
  const WordId id = static_cast<WordId>(words_.size());
  words_.push_back(word);
  index_.emplace(word, id);
  return id;
}

std::optional<WordId> Vocabulary::find(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool InfoNetwork::operator==(const InfoNetwork& other) const {
  auto edge_key = [](const Edge& e) { return std::tuple(e.src, e.dst, e.weight); };
  auto nt_key = [](const NodeTextEntry& e) { return std::tuple(e.node, e.word, e.value); };
  auto et_key = [](const EdgeTextEntry& e) {
    return std::tuple(e.node_i, e.node_j, e.word, e.value);
  };
  if (targets != other.targets || edges.size() != other.edges.size() ||
      node_text.size() != other.node_text.size() || edge_text.size() != other.edge_text.size() ||
      !(vocabulary == other.vocabulary)) {
    return false;
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edge_key(edges[i]) != edge_key(other.edges[i])) return false;
  }
  for (std::size_t i = 0; i < node_text.size(); ++i) {
    if (nt_key(node_text[i]) != nt_key(other.node_text[i])) return false;
  }
  for (std::size_t i = 0; i < edge_text.size(); ++i) {
    if (et_key(edge_text[i]) != et_key(other.edge_text[i])) return false;
  }
  return true;
}

HeteroNetwork::HeteroNetwork(std::uint32_t target_count, std::uint32_t bridge_count)
    : target_count_(target_count),
      bridge_count_(bridge_count),
      adjacency_(static_cast<std::size_t>(target_count) + bridge_count) {}

double HeteroNetwork::weighted_degree(NodeId v) const {
  double sum = 0.0;
  for (const Neighbor& n : neighbors(v)) sum += n.weight;
  return sum;
}

double HeteroNetwork::edge_weight(NodeId v, NodeId x) const {
  for (const Neighbor& n : neighbors(v)) {
    if (n.id == x) return n.weight;
  }
  return 0.0;
}

double HeteroNetwork::total_edge_weight() const {
  double sum = 0.0;
  for (NodeId v = 0; v < node_count(); ++v) {
    for (const Neighbor& n : adjacency_[v]) {
      if (v <= n.id) sum += n.weight;
    }
  }
  return sum;
}

void HeteroNetwork::add_undirected_edge(NodeId u, NodeId v, double weight) {
  check_id(u);
  check_id(v);
  adjacency_[u].push_back({v, weight});
  adjacency_[v].push_back({u, weight});
  ++edge_count_;
}

const std::vector<Neighbor>& neighbors(const HeteroNetwork& net, NodeId v) {
  return net.neighbors(v);
}

// --- parsing ----------------------------------------------------------------

namespace {

struct Line {
  std::vector<std::string> fields;
  std::size_t number;
};

// Yields whitespace-split fields of every non-blank, non-comment line.
std::vector<Line> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open file: " + path);
  std::vector<Line> out;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::size_t start = raw.find_first_not_of(" \t\r");
    if (start == std::string::npos || raw[start] == '#') continue;
    Line line;
    line.number = number;
    std::istringstream ss(raw);
    std::string field;
    while (ss >> field) line.fields.push_back(field);
    if (!line.fields.empty()) out.push_back(std::move(line));
  }
  return out;
}

NodeId parse_id(const std::string& path, const Line& line, const std::string& field) {
  std::uint32_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw parse_error(path, line.number, "expected a non-negative node id, got '" + field + "'");
  }
  return value;
}

double parse_real(const std::string& path, const Line& line, const std::string& field) {
  try {
    std::size_t pos = 0;
    const double value = std::stod(field, &pos);
    if (pos != field.size()) throw std::invalid_argument(field);
    return value;
  } catch (const std::exception&) {
    throw parse_error(path, line.number, "expected a real number, got '" + field + "'");
  }
}

std::uint64_t undirected_key(NodeId a, NodeId b) {
  const NodeId lo = std::min(a, b);
  const NodeId hi = std::max(a, b);
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

}  // namespace

InfoNetwork parse_info_network(const std::string& edge_path, const std::string& node_text_path,
                               const std::optional<std::string>& edge_text_path) {
  InfoNetwork net;
  NodeId max_id = 0;
  bool any_id = false;
  auto track = [&](NodeId id) {
    max_id = std::max(max_id, id);
    any_id = true;
  };

  std::unordered_set<std::uint64_t> seen_edges;
  for (const Line& line : read_lines(edge_path)) {
    if (line.fields.size() != 2 && line.fields.size() != 3) {
      throw parse_error(edge_path, line.number, "expected 'src dst [weight]'");
    }
    const NodeId src = parse_id(edge_path, line, line.fields[0]);
    const NodeId dst = parse_id(edge_path, line, line.fields[1]);
    double weight = 1.0;
    if (line.fields.size() == 3) weight = parse_real(edge_path, line, line.fields[2]);
    if (src == dst) {
      throw validation_error(edge_path + ":" + std::to_string(line.number) + ": self-loop on node " +
                             std::to_string(src));
    }
    if (weight < 0.0) {
      throw validation_error(edge_path + ":" + std::to_string(line.number) +
                             ": negative edge weight");
    }
    if (!seen_edges.insert(undirected_key(src, dst)).second) {
      throw validation_error(edge_path + ":" + std::to_string(line.number) +
                             ": duplicate undirected edge " + std::to_string(src) + "-" +
                             std::to_string(dst));
    }
    track(src);
    track(dst);
    net.edges.push_back({src, dst, weight});
  }

  // Repeated (node, word) entries accumulate.
  std::unordered_map<std::uint64_t, std::size_t> node_text_index;
  for (const Line& line : read_lines(node_text_path)) {
    if (line.fields.size() != 3) {
      throw parse_error(node_text_path, line.number, "expected 'node word count'");
    }
    const NodeId node = parse_id(node_text_path, line, line.fields[0]);
    const double value = parse_real(node_text_path, line, line.fields[2]);
    if (value <= 0.0) {
      throw validation_error(node_text_path + ":" + std::to_string(line.number) +
                             ": text count must be positive");
    }
    const WordId word = net.vocabulary.intern(line.fields[1]);
    track(node);
    const std::uint64_t key = (static_cast<std::uint64_t>(node) << 32) | word;
    auto [it, fresh] = node_text_index.try_emplace(key, net.node_text.size());
    if (fresh) {
      net.node_text.push_back({node, word, value});
    } else {
      net.node_text[it->second].value += value;
    }
  }

  if (edge_text_path) {
    std::unordered_map<std::string, std::size_t> edge_text_index;
    for (const Line& line : read_lines(*edge_text_path)) {
      if (line.fields.size() != 4) {
        throw parse_error(*edge_text_path, line.number, "expected 'node_i node_j word count'");
      }
      const NodeId a = parse_id(*edge_text_path, line, line.fields[0]);
      const NodeId b = parse_id(*edge_text_path, line, line.fields[1]);
      const double value = parse_real(*edge_text_path, line, line.fields[3]);
      if (a == b) {
        throw validation_error(*edge_text_path + ":" + std::to_string(line.number) +
                               ": edge text on a self-loop");
      }
      if (value <= 0.0) {
        throw validation_error(*edge_text_path + ":" + std::to_string(line.number) +
                               ": text count must be positive");
      }
      const WordId word = net.vocabulary.intern(line.fields[2]);
      track(a);
      track(b);
      const std::string key = std::to_string(std::min(a, b)) + "," + std::to_string(std::max(a, b)) +
                              "," + std::to_string(word);
      auto [it, fresh] = edge_text_index.try_emplace(key, net.edge_text.size());
      if (fresh) {
        net.edge_text.push_back({a, b, word, value});
      } else {
        net.edge_text[it->second].value += value;
      }
    }
  }

  net.targets = any_id ? max_id + 1 : 0;
  return net;
}

namespace {

void write_weight(std::FILE* f, double w) {
  if (w == static_cast<double>(static_cast<long long>(w))) {
    std::fprintf(f, "%lld", static_cast<long long>(w));
  } else {
    std::fprintf(f, "%.17g", w);
  }
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_for_write(const std::string& path) {
  File f(std::fopen(path.c_str(), "w"));
  if (!f) throw error("cannot write file: " + path);
  return f;
}

}  // namespace

void save_info_network(const InfoNetwork& net, const std::string& edge_path,
                       const std::string& node_text_path,
                       const std::optional<std::string>& edge_text_path) {
  File ef = open_for_write(edge_path);
  for (const Edge& e : net.edges) {
    std::fprintf(ef.get(), "%" PRIu32 " %" PRIu32 " ", e.src, e.dst);
    write_weight(ef.get(), e.weight);
    std::fputc('\n', ef.get());
  }
  File nf = open_for_write(node_text_path);
  for (const NodeTextEntry& t : net.node_text) {
    std::fprintf(nf.get(), "%" PRIu32 " %s ", t.node, net.vocabulary.word(t.word).c_str());
    write_weight(nf.get(), t.value);
    std::fputc('\n', nf.get());
  }
  if (edge_text_path) {
    File tf = open_for_write(*edge_text_path);
    for (const EdgeTextEntry& t : net.edge_text) {
      std::fprintf(tf.get(), "%" PRIu32 " %" PRIu32 " %s ", t.node_i, t.node_j,
                   net.vocabulary.word(t.word).c_str());
      write_weight(tf.get(), t.value);
      std::fputc('\n', tf.get());
    }
  }
}

HeteroNetwork build_hetero(const InfoNetwork& net) {
  // Every vocabulary word carries at least one positive entry, so every word
  // becomes a bridge node: bridge id = targets + word id.
  HeteroNetwork hetero(net.targets, net.vocabulary.size());

  for (const Edge& e : net.edges) hetero.add_undirected_edge(e.src, e.dst, e.weight);

  // Target-bridge contributions from node text and edge text; a pair hit by
  // both rules merges into one edge with summed weight.
  std::unordered_map<std::uint64_t, std::size_t> pair_index;
  std::vector<Edge> text_edges;
  auto accumulate = [&](NodeId target, WordId word, double value) {
    const NodeId bridge = net.targets + word;
    const std::uint64_t key = (static_cast<std::uint64_t>(target) << 32) | bridge;
    auto [it, fresh] = pair_index.try_emplace(key, text_edges.size());
    if (fresh) {
      text_edges.push_back({target, bridge, value});
    } else {
      text_edges[it->second].weight += value;
    }
  };

  for (const NodeTextEntry& t : net.node_text) accumulate(t.node, t.word, t.value);
  for (const EdgeTextEntry& t : net.edge_text) {
    accumulate(t.node_i, t.word, t.value);
    accumulate(t.node_j, t.word, t.value);
  }
  for (const Edge& e : text_edges) hetero.add_undirected_edge(e.src, e.dst, e.weight);

  return hetero;
}

void save_hetero(const HeteroNetwork& net, const std::string& path) {
  File f = open_for_write(path);
  std::fprintf(f.get(), "#hetero targets=%" PRIu32 " bridges=%" PRIu32 "\n", net.target_count(),
               net.bridge_count());
  for (NodeId v = 0; v < net.node_count(); ++v) {
    std::vector<Neighbor> row = net.neighbors(v);
    std::sort(row.begin(), row.end(), [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
    for (const Neighbor& n : row) {
      if (n.id < v) continue;
      std::fprintf(f.get(), "%" PRIu32 " %" PRIu32 " ", v, n.id);
      write_weight(f.get(), n.weight);
      std::fputc('\n', f.get());
    }
  }
}

HeteroNetwork load_hetero(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open file: " + path);
  std::string header;
  if (!std::getline(in, header)) throw parse_error(path, 1, "missing #hetero header");
  std::uint32_t targets = 0;
  std::uint32_t bridges = 0;
  if (std::sscanf(header.c_str(), "#hetero targets=%" SCNu32 " bridges=%" SCNu32, &targets,
                  &bridges) != 2) {
    throw parse_error(path, 1, "malformed header, expected '#hetero targets=<n> bridges=<m>'");
  }
  HeteroNetwork net(targets, bridges);
  std::string raw;
  std::size_t number = 1;
  while (std::getline(in, raw)) {
    ++number;
    std::size_t start = raw.find_first_not_of(" \t\r");
    if (start == std::string::npos || raw[start] == '#') continue;
    NodeId src = 0;
    NodeId dst = 0;
    double weight = 0.0;
    std::istringstream ss(raw);
    if (!(ss >> src >> dst >> weight)) {
      throw parse_error(path, number, "expected 'src dst weight'");
    }
    if (src >= net.node_count() || dst >= net.node_count()) {
      throw validation_error(path + ":" + std::to_string(number) + ": node id out of range");
    }
    net.add_undirected_edge(src, dst, weight);
  }
  return net;
}

}  // namespace geri
