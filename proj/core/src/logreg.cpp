#include "geri/logreg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "geri/log.hpp"

namespace geri {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

double LogRegModel::margin(const double* x) const {
  double m = intercept;
  for (std::size_t i = 0; i < weights.size(); ++i) m += weights[i] * x[i];
  return m;
}

double LogRegModel::score(const double* x) const { return sigmoid(margin(x)); }

double logreg_objective(const FeatureView& features, const std::vector<std::uint8_t>& labels,
                        const std::vector<double>& weights, double intercept, double C) {
  double obj = 0.0;
  for (std::size_t i = 0; i < features.rows; ++i) {
    double m = intercept;
    const double* x = features.row(i);
    for (std::size_t j = 0; j < features.dim; ++j) m += weights[j] * x[j];
    // -log p(y|x) = softplus(-z*m), z = +-1
    obj += softplus(labels[i] != 0 ? -m : m);
  }
  double penalty = 0.0;
  for (const double w : weights) penalty += w * w;
  return obj + penalty / (2.0 * C);
}

namespace {

// Objective and gradient in one pass; the parameter vector is [weights, b].
double eval_objective(const FeatureView& features, const std::vector<std::uint8_t>& labels,
                      const std::vector<double>& theta, double C, std::vector<double>& grad) {
  const std::size_t d = features.dim;
  std::fill(grad.begin(), grad.end(), 0.0);
  double obj = 0.0;
  for (std::size_t i = 0; i < features.rows; ++i) {
    const double* x = features.row(i);
    double m = theta[d];
    for (std::size_t j = 0; j < d; ++j) m += theta[j] * x[j];
    const double z = labels[i] != 0 ? 1.0 : -1.0;
    obj += softplus(-z * m);
    const double g = -z * sigmoid(-z * m);  // d softplus(-zm) / dm
    for (std::size_t j = 0; j < d; ++j) grad[j] += g * x[j];
    grad[d] += g;
  }
  for (std::size_t j = 0; j < d; ++j) {
    obj += theta[j] * theta[j] / (2.0 * C);
    grad[j] += theta[j] / C;
  }
  return obj;
}

double norm2(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

}  // namespace

LogRegModel fit_logreg_binary(const FeatureView& features, const std::vector<std::uint8_t>& labels,
                              const LogRegOptions& options) {
  LogRegModel model;
  model.weights.assign(features.dim, 0.0);

  std::size_t positives = 0;
  for (const std::uint8_t y : labels) positives += y != 0;
  if (positives == 0 || positives == labels.size()) {
    // Single-class training split: fall back to the (clamped) prior.
    const double prior =
        (static_cast<double>(positives) + 1.0) / (static_cast<double>(labels.size()) + 2.0);
    model.intercept = std::log(prior / (1.0 - prior));
    model.degenerate = true;
    log::warn("logreg: single-class training data (%zu/%zu positive); predicting the prior",
              positives, labels.size());
    return model;
  }

  const std::size_t n_params = features.dim + 1;
  std::vector<double> theta(n_params, 0.0);
  std::vector<double> grad(n_params, 0.0);
  double obj = eval_objective(features, labels, theta, options.C, grad);

  // L-BFGS with Armijo backtracking; memory 10.
  constexpr std::size_t kMemory = 10;
  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;
  std::vector<double> direction(n_params), theta_next(n_params), grad_next(n_params);
  std::vector<double> alpha(kMemory);

  for (std::uint32_t iter = 0; iter < options.max_iterations; ++iter) {
    if (norm2(grad) < options.grad_tolerance) break;

    // Two-loop recursion for H*grad.
    direction = grad;
    const std::size_t hist = s_hist.size();
    for (std::size_t i = hist; i-- > 0;) {
      alpha[i] = rho_hist[i] * dot(s_hist[i], direction);
      for (std::size_t j = 0; j < n_params; ++j) direction[j] -= alpha[i] * y_hist[i][j];
    }
    if (hist > 0) {
      const double gamma =
          dot(s_hist.back(), y_hist.back()) / std::max(1e-300, dot(y_hist.back(), y_hist.back()));
      for (double& v : direction) v *= gamma;
    }
    for (std::size_t i = 0; i < hist; ++i) {
      const double beta = rho_hist[i] * dot(y_hist[i], direction);
      for (std::size_t j = 0; j < n_params; ++j) direction[j] += (alpha[i] - beta) * s_hist[i][j];
    }
    for (double& v : direction) v = -v;

    double descent = dot(grad, direction);
    if (descent >= 0.0) {  // stale curvature; fall back to steepest descent
      for (std::size_t j = 0; j < n_params; ++j) direction[j] = -grad[j];
      descent = -dot(grad, grad);
    }

    double step = 1.0;
    double obj_next = obj;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t j = 0; j < n_params; ++j) theta_next[j] = theta[j] + step * direction[j];
      obj_next = eval_objective(features, labels, theta_next, options.C, grad_next);
      if (obj_next <= obj + 1e-4 * step * descent) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no further progress at machine precision

    std::vector<double> s(n_params), y(n_params);
    for (std::size_t j = 0; j < n_params; ++j) {
      s[j] = theta_next[j] - theta[j];
      y[j] = grad_next[j] - grad[j];
    }
    const double sy = dot(s, y);
    if (sy > 1e-12) {
      if (s_hist.size() == kMemory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    theta.swap(theta_next);
    grad.swap(grad_next);
    obj = obj_next;
  }

  model.weights.assign(theta.begin(), theta.begin() + features.dim);
  model.intercept = theta[features.dim];
  return model;
}

}  // namespace geri
