#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geri/graph.hpp"
#include "geri/rng.hpp"

namespace geri {

// Row-major (node count) x (dim) float matrix; target rows first, bridge
// rows after, matching HeteroNetwork ids.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::uint32_t rows, std::uint32_t dim)
      : rows_(rows), dim_(dim), data_(static_cast<std::size_t>(rows) * dim, 0.0f) {}

  static EmbeddingMatrix standard_normal(std::uint32_t rows, std::uint32_t dim,
                                         std::uint64_t seed);

  std::uint32_t rows() const { return rows_; }
  std::uint32_t dim() const { return dim_; }

  float* row(std::uint32_t i) { return data_.data() + static_cast<std::size_t>(i) * dim_; }
  const float* row(std::uint32_t i) const {
    return data_.data() + static_cast<std::size_t>(i) * dim_;
  }

  std::vector<float>& data() { return data_; }
  const std::vector<float>& data() const { return data_; }

  bool operator==(const EmbeddingMatrix&) const = default;

 private:
  std::uint32_t rows_ = 0;
  std::uint32_t dim_ = 0;
  std::vector<float> data_;
};

// Embedding file: header "<count> <d>", then one row per line "id v1 ... vd"
// for targets; with emit_bridges, "w<word>" rows follow. The binary variant
// keeps the text header and row ids but stores values as little-endian
// 32-bit floats.
void save_embeddings(const EmbeddingMatrix& matrix, std::uint32_t target_count,
                     const Vocabulary* vocabulary, bool emit_bridges, bool binary,
                     const std::string& path);

// Reads integer-id (target) rows back; "w..."-prefixed rows are skipped.
// Rows land at their id; absent ids stay zero.
EmbeddingMatrix load_embeddings(const std::string& path);

}  // namespace geri
