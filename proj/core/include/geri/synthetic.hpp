#pragma once

#include <cstdint>

#include "geri/graph.hpp"

namespace geri {

// Erdos-Renyi G(n, p) with p = degree / (n - 1); geometric edge skipping, so
// generation is linear in the number of realized edges.
std::vector<Edge> erdos_renyi_edges(std::uint32_t n, double degree, std::uint64_t seed);

// Benchmark input: an ER graph plus synthetic text, each node linked to
// `words_per_node` words drawn uniformly from a vocabulary of
// max(100, n / 100) words with weight 1.
InfoNetwork synthetic_network(std::uint32_t n, double degree, std::uint32_t words_per_node,
                              std::uint64_t seed);

}  // namespace geri
