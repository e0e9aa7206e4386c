#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace robggm {

struct MetricsRecord {
  int replicate = 0;
  std::uint64_t seed = 0;
  std::string estimator;
  double lambda = 0.0;
  double mse = 0.0;      // |Omega_hat - Omega|_F / p; nan when no precision matrix exists
  double tpr = 0.0;
  double fpr = 0.0;
  double supnorm = 0.0;  // max-abs entry of Sigma_hat - Sigma
};

struct EdgeComparison {
  double tpr = 0.0;
  double fpr = 0.0;
};

// Edge universe = unordered pairs i < j. Errors when the truth is empty or
// complete (a denominator would vanish).
EdgeComparison compare_edges(const EdgeSet& est, const EdgeSet& truth);

struct MatrixErrors {
  double mse = 0.0;
  double supnorm = 0.0;
};

MatrixErrors matrix_errors(const Eigen::MatrixXd& omega_hat, const Eigen::MatrixXd& omega,
                           const Eigen::MatrixXd& sigma_hat, const Eigen::MatrixXd& sigma);

struct RocPoint {
  double lambda = 0.0;
  double fpr = 0.0;  // mean over replicates
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // decreasing-lambda order
  double auc = 0.0;
};

// Vertical (per-lambda) averaging over replicate curves; every replicate
// must carry the same lambda grid. AUC is the trapezoid area of the averaged
// points sorted by FPR with (0,0) and (1,1) appended.
RocCurve roc_curve(const std::vector<std::vector<RocPoint>>& replicate_curves);

// Trapezoid area under points sorted by FPR, anchored at (0,0) and (1,1).
double roc_auc(std::vector<RocPoint> points);

}  // namespace robggm
