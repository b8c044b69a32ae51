#include "geri/synthetic.hpp"

#include <cmath>
#include <unordered_map>

#include "geri/rng.hpp"

namespace geri {

std::vector<Edge> erdos_renyi_edges(std::uint32_t n, double degree, std::uint64_t seed) {
  std::vector<Edge> edges;
  if (n < 2) return edges;
  const double p = std::min(1.0, degree / static_cast<double>(n - 1));
  if (p <= 0.0) return edges;
  edges.reserve(static_cast<std::size_t>(0.5 * degree * n * 1.1));

  Rng rng(mix_seed(seed, 0xe24ULL));
  const double log1mp = std::log1p(-p);
  // Skip-sampling over the linearized upper triangle.
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  std::uint64_t index = 0;
  while (true) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    const double skip = std::floor(std::log(u) / log1mp);
    if (skip >= static_cast<double>(total - index)) break;
    index += static_cast<std::uint64_t>(skip);
    // Invert index -> (i, j) in the upper triangle.
    const double nd = static_cast<double>(n);
    const double b = 2.0 * nd - 1.0;
    auto i = static_cast<std::uint64_t>((b - std::sqrt(b * b - 8.0 * static_cast<double>(index))) / 2.0);
    auto row_start = [&](std::uint64_t row) {
      return row * (2 * n - row - 1) / 2;
    };
    while (i > 0 && row_start(i) > index) --i;
    while (row_start(i + 1) <= index) ++i;
    const std::uint64_t j = i + 1 + (index - row_start(i));
    edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), 1.0});
    ++index;
    if (index >= total) break;
  }
  return edges;
}

InfoNetwork synthetic_network(std::uint32_t n, double degree, std::uint32_t words_per_node,
                              std::uint64_t seed) {
  InfoNetwork net;
  net.targets = n;
  net.edges = erdos_renyi_edges(n, degree, seed);

  const std::uint32_t vocab_size = std::max<std::uint32_t>(100, n / 100);
  for (std::uint32_t w = 0; w < vocab_size; ++w) {
    net.vocabulary.intern("w" + std::to_string(w));
  }

  Rng rng(mix_seed(seed, 0x7e87ULL));
  std::unordered_map<std::uint64_t, std::size_t> index;
  for (std::uint32_t v = 0; v < n; ++v) {
    for (std::uint32_t k = 0; k < words_per_node; ++k) {
      const auto w = static_cast<WordId>(rng.uniform_below(vocab_size));
      const std::uint64_t key = (static_cast<std::uint64_t>(v) << 32) | w;
      auto [it, fresh] = index.try_emplace(key, net.node_text.size());
      if (fresh) {
        net.node_text.push_back({v, w, 1.0});
      } else {
        net.node_text[it->second].value += 1.0;
      }
    }
  }
  return net;
}

}  // namespace geri
