#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "geri/rng.hpp"

namespace geri {

// Walker/Vose alias table: O(n) build, O(1) draws from a weighted
// discrete distribution. Outcomes with zero weight are dropped at build.
class AliasTable {
 public:
  AliasTable() = default;

  static AliasTable build(std::vector<std::uint32_t> outcomes,
                          const std::vector<double>& weights);

  bool empty() const { return outcomes_.empty(); }
  std::size_t size() const { return outcomes_.size(); }

  // Index into outcomes(); pre: !empty().
  std::uint32_t sample_slot(Rng& rng) const {
    assert(!empty());
    const std::uint32_t slot =
        static_cast<std::uint32_t>(rng.uniform_below(outcomes_.size()));
    return rng.uniform() < prob_[slot] ? slot : alias_[slot];
  }

  std::uint32_t sample(Rng& rng) const { return outcomes_[sample_slot(rng)]; }

  const std::vector<std::uint32_t>& outcomes() const { return outcomes_; }

  // Probability the table assigns to a slot; reconstructs the sampling
  // distribution exactly, for tests and diagnostics.
  double slot_probability(std::size_t slot) const {
    double p = prob_[slot];
    for (std::size_t j = 0; j < prob_.size(); ++j) {
      if (alias_[j] == slot) p += 1.0 - prob_[j];
    }
    return p / static_cast<double>(prob_.size());
  }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
  std::vector<std::uint32_t> outcomes_;
};

inline AliasTable AliasTable::build(std::vector<std::uint32_t> outcomes,
                                    const std::vector<double>& weights) {
  assert(outcomes.size() == weights.size());
  AliasTable t;

  // Drop zero-weight outcomes; an all-zero vector yields an empty table.
  double total = 0.0;
  std::size_t kept = 0;
  std::vector<double> w;
  w.reserve(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) {
      outcomes[kept++] = outcomes[i];
      w.push_back(weights[i]);
      total += weights[i];
    }
  }
  outcomes.resize(kept);
  if (kept == 0) return t;

  const std::size_t n = kept;
  t.outcomes_ = std::move(outcomes);
  t.prob_.assign(n, 0.0);
  t.alias_.assign(n, 0);

  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i) scaled[i] = w[i] * static_cast<double>(n) / total;

  std::vector<std::uint32_t> small, large;
  small.reserve(n);
  large.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }

  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    const std::uint32_t l = large.back();
    small.pop_back();
    t.prob_[s] = scaled[s];
    t.alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (const std::uint32_t l : large) {
    t.prob_[l] = 1.0;
    t.alias_[l] = l;
  }
  for (const std::uint32_t s : small) {
    t.prob_[s] = 1.0;
    t.alias_[s] = s;
  }
  return t;
}

}  // namespace geri
