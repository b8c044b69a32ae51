#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "geri/embedding.hpp"
#include "geri/logreg.hpp"
#include "geri/rng.hpp"

namespace geri {

enum class LabelMode : std::uint8_t { MultiClass, MultiLabel };

// Per-target-node label id sets; ids are dense 0..num_labels-1. MultiClass
// means every labeled node carries exactly one label.
struct LabelSet {
  LabelMode mode = LabelMode::MultiClass;
  std::vector<std::vector<std::uint32_t>> labels;  // indexed by node id
  std::uint32_t num_labels = 0;
  std::vector<std::string> names;

  bool labeled(std::uint32_t node) const {
    return node < labels.size() && !labels[node].empty();
  }
};

// Label file: "node label [label...]"; label tokens are interned in order of
// first appearance. Mode is inferred (all singletons -> MultiClass).
LabelSet parse_labels(const std::string& path);

struct SplitSpec {
  double train_fraction = 0.5;
  std::uint32_t repeats = 10;
  std::uint64_t seed = 1;
  bool stratified = true;

  void validate() const;
};

struct MetricsReport {
  std::vector<double> micro;  // per repeat
  std::vector<double> macro;
  double mean_micro = 0.0;
  double mean_macro = 0.0;
  std::string config_echo;
};

// Normalizes every nonzero row to unit L2 norm, in place.
void l2_normalize(EmbeddingMatrix& matrix);

// One split draw over the given labeled nodes: stratified by class
// (MultiClass) or by full label-set signature (MultiLabel); singleton groups
// go to training. Returns (train, test), each sorted.
std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> stratified_split(
    const LabelSet& labels, const std::vector<std::uint32_t>& nodes, double train_fraction,
    bool stratified, Rng& rng);

// One classifier per label over the given rows.
std::vector<LogRegModel> fit_logreg_ovr(const FeatureView& features,
                                        const std::vector<std::vector<std::uint32_t>>& row_labels,
                                        std::uint32_t num_labels, double C);

// MultiClass: argmax score, ties to the lowest label id. MultiLabel: the
// node's top-k labels where k is its true label count (or a fixed score
// threshold when given instead).
std::vector<std::vector<std::uint32_t>> predict(
    const std::vector<LogRegModel>& models, const FeatureView& features, LabelMode mode,
    const std::vector<std::uint32_t>* true_label_counts = nullptr,
    std::optional<double> threshold = std::nullopt);

// (micro, macro) F1 over parallel prediction/truth label sets; a label with
// no TP+FP+FN contributes 0 to the macro mean.
std::pair<double, double> micro_macro_f1(
    const std::vector<std::vector<std::uint32_t>>& predicted,
    const std::vector<std::vector<std::uint32_t>>& truth, std::uint32_t num_labels);

// The full repeated-split protocol: L2-normalized rows are assumed; each
// repeat draws a (stratified) split, fits one-vs-rest models and scores the
// held-out nodes.
MetricsReport evaluate(const EmbeddingMatrix& embeddings, const LabelSet& labels,
                       const SplitSpec& split, double C);

// TSV rows (repeat, micro_f1, macro_f1) with a trailing mean row.
void write_report_tsv(std::ostream& out, const MetricsReport& report);

}  // namespace geri
