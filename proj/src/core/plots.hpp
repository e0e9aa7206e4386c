#pragma once

#include <string>
#include <vector>

#include "core/evalmetrics.hpp"

namespace robggm {

// Five-number summary of the sup-norm errors for one estimator (one value
// per replicate).
struct BoxStats {
  std::string estimator;
  int n = 0;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

// Linear-interpolation quantile on sorted order statistics (h = (n-1) q).
double quantile(std::vector<double> values, double q);

std::vector<BoxStats> compute_box_stats(const std::vector<MetricsRecord>& records);

// Reads metrics.csv (and roc.csv when present) from results_dir and writes
// box_stats.csv + supnorm_box.svg, plus roc.svg for each ROC file. Errors
// when metrics.csv is missing or holds no data rows.
void emit_plots(const std::string& results_dir);

}  // namespace robggm
