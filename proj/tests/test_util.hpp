#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "geri/graph.hpp"
#include "geri/rng.hpp"

namespace geri::test {

// Self-cleaning temp directory for file-format tests.
class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    static int counter = 0;
    path_ = base / ("geri_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Random InfoNetwork for property tests: a loose random graph with random
// node/edge text. Weights are positive and occasionally non-integer.
inline InfoNetwork random_info_network(Rng& rng, std::uint32_t max_targets = 12,
                                       std::uint32_t max_words = 6) {
  InfoNetwork net;
  net.targets = 2 + static_cast<std::uint32_t>(rng.uniform_below(max_targets - 1));
  const std::uint32_t words = static_cast<std::uint32_t>(rng.uniform_below(max_words + 1));

  std::vector<std::pair<NodeId, NodeId>> candidates;
  for (NodeId i = 0; i < net.targets; ++i) {
    for (NodeId j = i + 1; j < net.targets; ++j) candidates.emplace_back(i, j);
  }
  rng.shuffle(candidates.data(), candidates.size());
  const std::size_t edge_count = 1 + rng.uniform_below(candidates.size());
  for (std::size_t e = 0; e < edge_count; ++e) {
    const double w = rng.uniform() < 0.5 ? 1.0 : 0.25 + 2.0 * rng.uniform();
    net.edges.push_back({candidates[e].first, candidates[e].second, w});
  }

  std::vector<std::string> vocab;
  for (std::uint32_t w = 0; w < words; ++w) vocab.push_back("word" + std::to_string(w));

  for (std::uint32_t w = 0; w < words; ++w) {
    // Guarantee every word occurs at least once.
    const NodeId v = static_cast<NodeId>(rng.uniform_below(net.targets));
    const WordId id = net.vocabulary.intern(vocab[w]);
    net.node_text.push_back({v, id, 1.0 + std::floor(3.0 * rng.uniform())});
  }
  const std::size_t extra_nt = rng.uniform_below(2 * words + 1);
  for (std::size_t k = 0; k < extra_nt && words > 0; ++k) {
    const NodeId v = static_cast<NodeId>(rng.uniform_below(net.targets));
    const WordId id = net.vocabulary.intern(vocab[rng.uniform_below(words)]);
    bool dup = false;
    for (const auto& entry : net.node_text) {
      if (entry.node == v && entry.word == id) dup = true;
    }
    if (!dup) net.node_text.push_back({v, id, 0.5 + rng.uniform()});
  }
  const std::size_t extra_et = rng.uniform_below(words + 1);
  for (std::size_t k = 0; k < extra_et && !net.edges.empty() && words > 0; ++k) {
    const Edge& e = net.edges[rng.uniform_below(net.edges.size())];
    const WordId id = net.vocabulary.intern(vocab[rng.uniform_below(words)]);
    bool dup = false;
    for (const auto& entry : net.edge_text) {
      if (entry.node_i == e.src && entry.node_j == e.dst && entry.word == id) dup = true;
    }
    if (!dup) net.edge_text.push_back({e.src, e.dst, id, 1.0});
  }
  return net;
}

}  // namespace geri::test
