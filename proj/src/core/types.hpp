#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace robggm {

// n x p data, rows are observations. Column names are optional (kept when a
// CSV has a header) and never affect numerics.
struct DataMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> column_names;

  int n() const { return static_cast<int>(values.rows()); }
  int p() const { return static_cast<int>(values.cols()); }
};

// Undirected edges as 1-based (i, j) pairs with i < j, sorted
// lexicographically. 1-based to match the edge-list file format and the C
// API surface.
struct EdgeSet {
  int p = 0;
  std::vector<std::pair<int, int>> pairs;

  bool contains(int i, int j) const;
  void add(int i, int j);        // accepts either order, normalizes to i < j
  void sort_and_dedup();
};

// Ground-truth model: precision matrix, its inverse scaled to a correlation
// matrix, and the exact edge support.
struct PrecisionModel {
  int p = 0;
  Eigen::MatrixXd omega;
  Eigen::MatrixXd sigma;
  EdgeSet edges;
};

enum class Method {
  gamma,       // gamma-divergence fits: univariate location/scale + pairwise correlation
  kendall,     // Kendall tau -> sin transform, MAD^2 diagonal
  spearman,    // Spearman rho -> 2 sin transform, MAD^2 diagonal
  gauss_rank,  // normal-scores correlation, Qn^2 diagonal
  gk_qn,       // pairwise robust covariance identity with Qn scale
  sample,      // MLE moments + Pearson correlation
};

// Parsed estimator: method plus the gamma exponent where applicable.
struct EstimatorSpec {
  Method method = Method::gamma;
  double gamma = 0.3;

  std::string tag() const;                       // e.g. "gamma@0.3", "kendall"
  static EstimatorSpec parse(const std::string& tag);
};

struct CovEstimate {
  Eigen::MatrixXd matrix;
  EstimatorSpec estimator;
  bool projected = false;        // true once psd_project has run
  double min_eigenvalue = 0.0;   // of the returned matrix (set by psd_project)
};

struct PrecisionEstimate {
  Eigen::MatrixXd omega;
  double lambda = 0.0;
  double objective = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
};

}  // namespace robggm
