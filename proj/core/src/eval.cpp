#include "geri/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "geri/error.hpp"
#include "geri/log.hpp"
#include "geri/rng.hpp"

namespace geri {

void SplitSpec::validate() const {
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
    throw validation_error("train fraction must lie in (0, 1)");
  }
  if (repeats < 1) throw validation_error("repeats must be at least 1");
}

LabelSet parse_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open file: " + path);
  LabelSet set;
  std::unordered_map<std::string, std::uint32_t> interned;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t start = raw.find_first_not_of(" \t\r");
    if (start == std::string::npos || raw[start] == '#') continue;
    std::istringstream ss(raw);
    std::string node_field;
    ss >> node_field;
    std::uint32_t node = 0;
    try {
      std::size_t pos = 0;
      node = static_cast<std::uint32_t>(std::stoul(node_field, &pos));
      if (pos != node_field.size()) throw std::invalid_argument(node_field);
    } catch (const std::exception&) {
      throw parse_error(path, line_no, "expected a node id, got '" + node_field + "'");
    }
    std::vector<std::uint32_t> ids;
    std::string token;
    while (ss >> token) {
      auto [it, fresh] = interned.try_emplace(token, static_cast<std::uint32_t>(set.names.size()));
      if (fresh) set.names.push_back(token);
      if (std::find(ids.begin(), ids.end(), it->second) == ids.end()) ids.push_back(it->second);
    }
    if (ids.empty()) throw parse_error(path, line_no, "node without labels");
    if (node >= set.labels.size()) set.labels.resize(node + 1);
    if (!set.labels[node].empty()) {
      throw validation_error(path + ":" + std::to_string(line_no) + ": duplicate label line for node " +
                             std::to_string(node));
    }
    set.labels[node] = std::move(ids);
  }
  set.num_labels = static_cast<std::uint32_t>(set.names.size());
  set.mode = LabelMode::MultiClass;
  for (const auto& ids : set.labels) {
    if (ids.size() > 1) {
      set.mode = LabelMode::MultiLabel;
      break;
    }
  }
  return set;
}

void l2_normalize(EmbeddingMatrix& matrix) {
  const std::uint32_t d = matrix.dim();
  for (std::uint32_t i = 0; i < matrix.rows(); ++i) {
    float* row = matrix.row(i);
    double norm_sq = 0.0;
    for (std::uint32_t j = 0; j < d; ++j) norm_sq += static_cast<double>(row[j]) * row[j];
    if (norm_sq == 0.0) continue;
    const auto inv = static_cast<float>(1.0 / std::sqrt(norm_sq));
    for (std::uint32_t j = 0; j < d; ++j) row[j] *= inv;
  }
}

std::vector<LogRegModel> fit_logreg_ovr(const FeatureView& features,
                                        const std::vector<std::vector<std::uint32_t>>& row_labels,
                                        std::uint32_t num_labels, double C) {
  if (features.rows < 2) throw validation_error("need at least 2 training rows");
  LogRegOptions options;
  options.C = C;
  std::vector<LogRegModel> models;
  models.reserve(num_labels);
  std::vector<std::uint8_t> y(features.rows);
  for (std::uint32_t label = 0; label < num_labels; ++label) {
    for (std::size_t i = 0; i < features.rows; ++i) {
      const auto& ids = row_labels[i];
      y[i] = std::find(ids.begin(), ids.end(), label) != ids.end() ? 1 : 0;
    }
    models.push_back(fit_logreg_binary(features, y, options));
  }
  return models;
}

std::vector<std::vector<std::uint32_t>> predict(const std::vector<LogRegModel>& models,
                                                const FeatureView& features, LabelMode mode,
                                                const std::vector<std::uint32_t>* true_label_counts,
                                                std::optional<double> threshold) {
  const std::uint32_t num_labels = static_cast<std::uint32_t>(models.size());
  std::vector<std::vector<std::uint32_t>> out(features.rows);
  if (mode == LabelMode::MultiLabel && true_label_counts == nullptr && !threshold.has_value()) {
    throw validation_error(
        "multi-label prediction needs true label counts or an explicit score threshold");
  }
  std::vector<double> scores(num_labels);
  for (std::size_t i = 0; i < features.rows; ++i) {
    const double* x = features.row(i);
    for (std::uint32_t l = 0; l < num_labels; ++l) scores[l] = models[l].score(x);
    if (mode == LabelMode::MultiClass) {
      std::uint32_t best = 0;
      for (std::uint32_t l = 1; l < num_labels; ++l) {
        if (scores[l] > scores[best]) best = l;  // ties stay at the lowest id
      }
      out[i] = {best};
    } else if (true_label_counts != nullptr) {
      const std::uint32_t k = std::min((*true_label_counts)[i], num_labels);
      std::vector<std::uint32_t> order(num_labels);
      std::iota(order.begin(), order.end(), 0u);
      std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return scores[a] > scores[b];
      });
      out[i].assign(order.begin(), order.begin() + k);
      std::sort(out[i].begin(), out[i].end());
    } else {
      for (std::uint32_t l = 0; l < num_labels; ++l) {
        if (scores[l] >= *threshold) out[i].push_back(l);
      }
    }
  }
  return out;
}

std::pair<double, double> micro_macro_f1(const std::vector<std::vector<std::uint32_t>>& predicted,
                                         const std::vector<std::vector<std::uint32_t>>& truth,
                                         std::uint32_t num_labels) {
  if (predicted.size() != truth.size()) {
    throw validation_error("prediction/truth size mismatch");
  }
  std::vector<std::uint64_t> tp(num_labels, 0), fp(num_labels, 0), fn(num_labels, 0);
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    for (const std::uint32_t l : predicted[i]) {
      const bool hit = std::find(truth[i].begin(), truth[i].end(), l) != truth[i].end();
      (hit ? tp : fp)[l] += 1;
    }
    for (const std::uint32_t l : truth[i]) {
      if (std::find(predicted[i].begin(), predicted[i].end(), l) == predicted[i].end()) {
        fn[l] += 1;
      }
    }
  }
  std::uint64_t tp_sum = 0, fp_sum = 0, fn_sum = 0;
  double macro_sum = 0.0;
  for (std::uint32_t l = 0; l < num_labels; ++l) {
    tp_sum += tp[l];
    fp_sum += fp[l];
    fn_sum += fn[l];
    const std::uint64_t denom = 2 * tp[l] + fp[l] + fn[l];
    macro_sum += denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp[l]) / static_cast<double>(denom);
  }
  const std::uint64_t micro_denom = 2 * tp_sum + fp_sum + fn_sum;
  const double micro =
      micro_denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp_sum) / static_cast<double>(micro_denom);
  const double macro = num_labels == 0 ? 0.0 : macro_sum / num_labels;
  return {micro, macro};
}

std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> stratified_split(
    const LabelSet& labels, const std::vector<std::uint32_t>& nodes, double train_fraction,
    bool stratified, Rng& rng) {
  std::vector<std::uint32_t> train;
  std::vector<std::uint32_t> test;
  std::map<std::vector<std::uint32_t>, std::vector<std::uint32_t>> groups;
  if (stratified) {
    for (const std::uint32_t v : nodes) {
      std::vector<std::uint32_t> key = labels.labels[v];
      std::sort(key.begin(), key.end());
      groups[key].push_back(v);
    }
  } else {
    groups[{}] = nodes;
  }
  for (auto& [key, members] : groups) {
    rng.shuffle(members.data(), members.size());
    if (members.size() == 1) {
      if (stratified) log::warn("evaluate: singleton class group assigned to training");
      train.push_back(members[0]);
      continue;
    }
    const auto want = static_cast<std::size_t>(
        std::lround(train_fraction * static_cast<double>(members.size())));
    const std::size_t take = std::clamp<std::size_t>(want, 1, members.size() - 1);
    train.insert(train.end(), members.begin(), members.begin() + take);
    test.insert(test.end(), members.begin() + take, members.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

MetricsReport evaluate(const EmbeddingMatrix& embeddings, const LabelSet& labels,
                       const SplitSpec& split, double C) {
  split.validate();
  std::vector<std::uint32_t> nodes;
  for (std::uint32_t v = 0; v < embeddings.rows() && v < labels.labels.size(); ++v) {
    if (labels.labeled(v)) nodes.push_back(v);
  }
  if (nodes.size() < 2) throw validation_error("need at least 2 labeled nodes to evaluate");

  const std::uint32_t d = embeddings.dim();
  auto gather = [&](const std::vector<std::uint32_t>& ids, std::vector<double>& storage) {
    storage.resize(ids.size() * d);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const float* row = embeddings.row(ids[i]);
      for (std::uint32_t j = 0; j < d; ++j) storage[i * d + j] = row[j];
    }
    return FeatureView{storage.data(), ids.size(), d};
  };

  MetricsReport report;
  std::vector<double> train_storage, test_storage;
  for (std::uint32_t repeat = 0; repeat < split.repeats; ++repeat) {
    Rng rng(mix_seed(split.seed, 0xe5a1ULL, repeat));
    const auto [train_ids, test_ids] =
        stratified_split(labels, nodes, split.train_fraction, split.stratified, rng);
    if (test_ids.empty()) throw validation_error("empty test split");

    const FeatureView train_features = gather(train_ids, train_storage);
    const FeatureView test_features = gather(test_ids, test_storage);

    std::vector<std::vector<std::uint32_t>> train_labels(train_ids.size());
    for (std::size_t i = 0; i < train_ids.size(); ++i) train_labels[i] = labels.labels[train_ids[i]];
    std::vector<std::vector<std::uint32_t>> truth(test_ids.size());
    std::vector<std::uint32_t> counts(test_ids.size());
    for (std::size_t i = 0; i < test_ids.size(); ++i) {
      truth[i] = labels.labels[test_ids[i]];
      counts[i] = static_cast<std::uint32_t>(truth[i].size());
    }

    const auto models = fit_logreg_ovr(train_features, train_labels, labels.num_labels, C);
    const auto predicted =
        predict(models, test_features, labels.mode,
                labels.mode == LabelMode::MultiLabel ? &counts : nullptr);
    const auto [micro, macro] = micro_macro_f1(predicted, truth, labels.num_labels);
    report.micro.push_back(micro);
    report.macro.push_back(macro);
  }
  report.mean_micro = std::accumulate(report.micro.begin(), report.micro.end(), 0.0) /
                      static_cast<double>(report.micro.size());
  report.mean_macro = std::accumulate(report.macro.begin(), report.macro.end(), 0.0) /
                      static_cast<double>(report.macro.size());
  std::ostringstream echo;
  echo << "train_fraction=" << split.train_fraction << " repeats=" << split.repeats
       << " C=" << C << " seed=" << split.seed << " stratified=" << (split.stratified ? 1 : 0);
  report.config_echo = echo.str();
  return report;
}

void write_report_tsv(std::ostream& out, const MetricsReport& report) {
  out << "# " << report.config_echo << "\n";
  out << "repeat\tmicro_f1\tmacro_f1\n";
  for (std::size_t i = 0; i < report.micro.size(); ++i) {
    out << i << '\t' << report.micro[i] << '\t' << report.macro[i] << '\n';
  }
  out << "mean\t" << report.mean_micro << '\t' << report.mean_macro << '\n';
}

}  // namespace geri
