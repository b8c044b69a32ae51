#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace geri {

// Dense row-major feature view: n rows of dim doubles.
struct FeatureView {
  const double* data = nullptr;
  std::size_t rows = 0;
  std::size_t dim = 0;

  const double* row(std::size_t i) const { return data + i * dim; }
};

// One binary one-vs-rest classifier: unpenalized intercept, L2 penalty
// (1/C) * 0.5 * |w|^2 on the weights.
struct LogRegModel {
  std::vector<double> weights;
  double intercept = 0.0;
  bool degenerate = false;  // single-class training data; predicts the prior

  double margin(const double* x) const;
  double score(const double* x) const;  // sigmoid(margin)
};

struct LogRegOptions {
  double C = 100.0;            // inverse regularization strength
  double grad_tolerance = 1e-6;
  std::uint32_t max_iterations = 1000;
};

// Deterministic full-batch L-BFGS fit of a binary logistic model;
// labels are 0/1 per row.
LogRegModel fit_logreg_binary(const FeatureView& features, const std::vector<std::uint8_t>& labels,
                              const LogRegOptions& options);

// Regularized negative log-likelihood the fit minimizes; exposed for tests.
double logreg_objective(const FeatureView& features, const std::vector<std::uint8_t>& labels,
                        const std::vector<double>& weights, double intercept, double C);

}  // namespace geri
