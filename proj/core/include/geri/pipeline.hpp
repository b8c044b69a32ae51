#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geri/eval.hpp"
#include "geri/graph.hpp"
#include "geri/sgns.hpp"
#include "geri/walk.hpp"

namespace geri {

// Walk-bias preprocessing + training in one call.
EmbeddingMatrix embed(const HeteroNetwork& net, const WalkConfig& wcfg, const TrainConfig& tcfg,
                      TrainStats* stats = nullptr);

struct GridPoint {
  double p = 1.0;
  double q = 1.0;
  double r = 1.0;
  double validation_micro = 0.0;
};

struct GridResult {
  std::vector<GridPoint> points;  // every swept point with its validation score
  GridPoint best;
  MetricsReport test_report;      // the best point re-evaluated on the test protocol
};

// Sweeps (p, q, r) over `values`^3, scoring each point by micro-F1 on a
// held-out slice of the training split (never the test data), then runs the
// full repeated-split evaluation at the winning point.
GridResult grid_search(const HeteroNetwork& net, const LabelSet& labels, WalkConfig wcfg,
                       TrainConfig tcfg, const SplitSpec& split, double C,
                       const std::vector<double>& values = {0.25, 0.5, 1.0, 2.0, 4.0},
                       double validation_fraction = 0.1);

struct BenchmarkRow {
  std::uint32_t nodes = 0;
  double seconds = 0.0;   // mean over repeats
  std::size_t edges = 0;  // realized ER edges
};

// Synthetic scalability run: ER graph with the given mean degree plus
// synthetic text, full preprocess + train, wall-clock averaged over repeats.
BenchmarkRow benchmark_once(std::uint32_t n, double degree, std::uint32_t repeats,
                            const WalkConfig& wcfg, const TrainConfig& tcfg);

// Least-squares slope of log(seconds) against log(nodes).
double log_log_slope(const std::vector<BenchmarkRow>& rows);

}  // namespace geri
