#include "geri/pipeline.hpp"

#include <chrono>
#include <cmath>

#include "geri/log.hpp"
#include "geri/synthetic.hpp"

namespace geri {

EmbeddingMatrix embed(const HeteroNetwork& net, const WalkConfig& wcfg, const TrainConfig& tcfg,
                      TrainStats* stats) {
  const BiasTables bias = BiasTables::preprocess(net, wcfg);
  return train(net, bias, wcfg, tcfg, stats);
}

namespace {

// Scores one (p, q, r) point: train embeddings, then fit on the inner train
// slice and measure micro-F1 on the validation slice.
double validation_score(const HeteroNetwork& net, const LabelSet& labels, const WalkConfig& wcfg,
                        const TrainConfig& tcfg, double C, double validation_fraction,
                        std::uint64_t seed) {
  EmbeddingMatrix matrix = embed(net, wcfg, tcfg);
  l2_normalize(matrix);

  std::vector<std::uint32_t> nodes;
  for (std::uint32_t v = 0; v < net.target_count() && v < labels.labels.size(); ++v) {
    if (labels.labeled(v)) nodes.push_back(v);
  }
  Rng rng(mix_seed(seed, 0x9a1dULL));
  rng.shuffle(nodes.data(), nodes.size());
  const auto val_count =
      std::max<std::size_t>(1, static_cast<std::size_t>(validation_fraction * nodes.size()));
  std::vector<std::uint32_t> val_ids(nodes.begin(), nodes.begin() + val_count);
  std::vector<std::uint32_t> fit_ids(nodes.begin() + val_count, nodes.end());

  const std::uint32_t d = matrix.dim();
  auto gather = [&](const std::vector<std::uint32_t>& ids, std::vector<double>& storage) {
    storage.resize(ids.size() * d);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const float* row = matrix.row(ids[i]);
      for (std::uint32_t j = 0; j < d; ++j) storage[i * d + j] = row[j];
    }
    return FeatureView{storage.data(), ids.size(), d};
  };
  std::vector<double> fit_storage, val_storage;
  const FeatureView fit_features = gather(fit_ids, fit_storage);
  const FeatureView val_features = gather(val_ids, val_storage);

  std::vector<std::vector<std::uint32_t>> fit_labels(fit_ids.size());
  for (std::size_t i = 0; i < fit_ids.size(); ++i) fit_labels[i] = labels.labels[fit_ids[i]];
  std::vector<std::vector<std::uint32_t>> truth(val_ids.size());
  std::vector<std::uint32_t> counts(val_ids.size());
  for (std::size_t i = 0; i < val_ids.size(); ++i) {
    truth[i] = labels.labels[val_ids[i]];
    counts[i] = static_cast<std::uint32_t>(truth[i].size());
  }
  const auto models = fit_logreg_ovr(fit_features, fit_labels, labels.num_labels, C);
  const auto predicted = predict(models, val_features, labels.mode,
                                 labels.mode == LabelMode::MultiLabel ? &counts : nullptr);
  return micro_macro_f1(predicted, truth, labels.num_labels).first;
}

}  // namespace

GridResult grid_search(const HeteroNetwork& net, const LabelSet& labels, WalkConfig wcfg,
                       TrainConfig tcfg, const SplitSpec& split, double C,
                       const std::vector<double>& values, double validation_fraction) {
  GridResult result;
  result.best.validation_micro = -1.0;
  for (const double p : values) {
    for (const double q : values) {
      for (const double r : values) {
        wcfg.p = p;
        wcfg.q = q;
        wcfg.r = r;
        GridPoint point{p, q, r, 0.0};
        point.validation_micro =
            validation_score(net, labels, wcfg, tcfg, C, validation_fraction, split.seed);
        log::info("grid: p=%.2f q=%.2f r=%.2f validation micro-F1=%.4f", p, q, r,
                  point.validation_micro);
        result.points.push_back(point);
        if (point.validation_micro > result.best.validation_micro) result.best = point;
      }
    }
  }

  wcfg.p = result.best.p;
  wcfg.q = result.best.q;
  wcfg.r = result.best.r;
  EmbeddingMatrix matrix = embed(net, wcfg, tcfg);
  l2_normalize(matrix);
  result.test_report = evaluate(matrix, labels, split, C);
  return result;
}

BenchmarkRow benchmark_once(std::uint32_t n, double degree, std::uint32_t repeats,
                            const WalkConfig& wcfg, const TrainConfig& tcfg) {
  BenchmarkRow row;
  row.nodes = n;
  const InfoNetwork info = synthetic_network(n, degree, 5, wcfg.seed);
  row.edges = info.edges.size();
  const HeteroNetwork net = build_hetero(info);
  double total = 0.0;
  for (std::uint32_t rep = 0; rep < repeats; ++rep) {
    WalkConfig w = wcfg;
    TrainConfig t = tcfg;
    w.seed = mix_seed(wcfg.seed, 0xbe7cULL, rep);
    t.seed = mix_seed(tcfg.seed, 0xbe7dULL, rep);
    const auto start = std::chrono::steady_clock::now();
    (void)embed(net, w, t);
    const auto stop = std::chrono::steady_clock::now();
    total += std::chrono::duration<double>(stop - start).count();
  }
  row.seconds = total / repeats;
  return row;
}

double log_log_slope(const std::vector<BenchmarkRow>& rows) {
  const std::size_t n = rows.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const BenchmarkRow& row : rows) {
    const double x = std::log(static_cast<double>(row.nodes));
    const double y = std::log(row.seconds);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  return (n * sxy - sx * sy) / denom;
}

}  // namespace geri
