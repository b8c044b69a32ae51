#include "geri/embedding.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include "geri/error.hpp"

namespace geri {

EmbeddingMatrix EmbeddingMatrix::standard_normal(std::uint32_t rows, std::uint32_t dim,
                                                 std::uint64_t seed) {
  EmbeddingMatrix m(rows, dim);
  Rng rng(mix_seed(seed, 0x1417ULL));
  for (float& value : m.data_) value = static_cast<float>(rng.normal());
  return m;
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};

static_assert(std::endian::native == std::endian::little,
              "binary embedding output assumes a little-endian host");

void write_row_values(std::FILE* f, const float* values, std::uint32_t dim, bool binary) {
  if (binary) {
    std::fwrite(values, sizeof(float), dim, f);
  } else {
    for (std::uint32_t j = 0; j < dim; ++j) std::fprintf(f, " %.7g", values[j]);
  }
  std::fputc('\n', f);
}

}  // namespace

void save_embeddings(const EmbeddingMatrix& matrix, std::uint32_t target_count,
                     const Vocabulary* vocabulary, bool emit_bridges, bool binary,
                     const std::string& path) {
  if (emit_bridges && vocabulary == nullptr) {
    throw error("emit_bridges requires a vocabulary for bridge row names");
  }
  std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.c_str(), binary ? "wb" : "w"));
  if (!f) throw error("cannot write file: " + path);

  const std::uint32_t count =
      emit_bridges ? matrix.rows() : std::min(target_count, matrix.rows());
  std::fprintf(f.get(), "%" PRIu32 " %" PRIu32 "\n", count, matrix.dim());
  for (std::uint32_t i = 0; i < std::min(target_count, matrix.rows()); ++i) {
    std::fprintf(f.get(), "%" PRIu32, i);
    if (binary) std::fputc(' ', f.get());
    write_row_values(f.get(), matrix.row(i), matrix.dim(), binary);
  }
  if (emit_bridges) {
    for (std::uint32_t i = target_count; i < matrix.rows(); ++i) {
      std::fprintf(f.get(), "w%s", vocabulary->word(i - target_count).c_str());
      if (binary) std::fputc(' ', f.get());
      write_row_values(f.get(), matrix.row(i), matrix.dim(), binary);
    }
  }
}

namespace {

// Binary rows contain non-printable bytes with near certainty; text rows are
// pure printable ASCII.
bool looks_like_text(const std::string& payload) {
  return std::all_of(payload.begin(), payload.end(),
                     [](unsigned char c) { return std::isprint(c) || std::isspace(c); });
}

}  // namespace

EmbeddingMatrix load_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();

  const std::size_t header_end = content.find('\n');
  if (header_end == std::string::npos) throw parse_error(path, 1, "missing embedding header");
  std::uint32_t count = 0;
  std::uint32_t dim = 0;
  {
    std::istringstream ss(content.substr(0, header_end));
    if (!(ss >> count >> dim) || dim == 0) {
      throw parse_error(path, 1, "expected header '<count> <d>'");
    }
  }
  const std::string payload = content.substr(header_end + 1);

  std::vector<std::pair<std::uint32_t, std::vector<float>>> rows;
  std::uint32_t max_id = 0;
  auto keep = [&](const std::string& token, std::vector<float>&& values) {
    if (token.empty() || !std::isdigit(static_cast<unsigned char>(token[0]))) {
      return;  // bridge or named row; evaluation consumes target ids only
    }
    const auto id = static_cast<std::uint32_t>(std::stoul(token));
    max_id = std::max(max_id, id);
    rows.emplace_back(id, std::move(values));
  };

  if (looks_like_text(payload)) {
    std::istringstream ss(payload);
    std::string token;
    while (ss >> token) {
      std::vector<float> values(dim);
      for (std::uint32_t j = 0; j < dim; ++j) {
        if (!(ss >> values[j])) throw parse_error(path, 0, "truncated embedding row");
      }
      keep(token, std::move(values));
    }
  } else {
    std::size_t pos = 0;
    while (pos < payload.size()) {
      while (pos < payload.size() && std::isspace(static_cast<unsigned char>(payload[pos]))) ++pos;
      if (pos >= payload.size()) break;
      const std::size_t token_end = payload.find(' ', pos);
      if (token_end == std::string::npos) throw parse_error(path, 0, "truncated binary row");
      const std::string token = payload.substr(pos, token_end - pos);
      pos = token_end + 1;
      if (pos + sizeof(float) * dim > payload.size()) {
        throw parse_error(path, 0, "truncated binary row");
      }
      std::vector<float> values(dim);
      std::memcpy(values.data(), payload.data() + pos, sizeof(float) * dim);
      pos += sizeof(float) * dim;
      keep(token, std::move(values));
    }
  }
  if (rows.empty()) return EmbeddingMatrix(0, dim);

  EmbeddingMatrix matrix(max_id + 1, dim);
  for (const auto& [id, values] : rows) {
    std::memcpy(matrix.row(id), values.data(), sizeof(float) * dim);
  }
  return matrix;
}

}  // namespace geri
