#pragma once

#include <cstdint>
#include <vector>

#include "core/covmat.hpp"
#include "core/types.hpp"

namespace robggm {

struct LambdaGrid {
  std::vector<double> values;  // strictly decreasing
};

// Geometric sequence from lambda_max = max off-diagonal |S_ij| down to
// ratio * lambda_max, `count` points.
LambdaGrid lambda_grid(const CovEstimate& S, int count = 10, double ratio = 0.05);

// First index of the minimum; with a descending grid that prefers the
// largest lambda on ties.
int select_min_loss(const std::vector<double>& losses);

struct SelectionResult {
  double lambda = 0.0;
  std::vector<double> per_lambda;  // CV losses or StARS instabilities, grid order
};

struct Cv2Config {
  int grid_count = 10;
  double grid_ratio = 0.05;
  double glasso_tol = 1e-4;
  bool symmetric = false;  // also fit on fold 2 / evaluate on fold 1, average
  AssembleConfig assemble;
};

// Seeded half split; fold sizes ceil(n/2) and floor(n/2). Fits the glasso
// path on fold 1's covariance (PSD-projected, delta 0), scores
//   L(lambda) = tr(S2 Omega1(lambda)) - log det Omega1(lambda)
// against fold 2's covariance (projected with delta 1e-6), returns the
// grid argmin, largest lambda on ties.
SelectionResult cv2_select(const DataMatrix& data, const EstimatorSpec& estimator,
                           const LambdaGrid& grid, std::uint64_t seed,
                           const Cv2Config& cfg = {});

struct StarsConfig {
  int subsamples = 10;
  double cut = 0.2;
  double nodewise_tol = 1e-4;
  double zero_tol = 1e-8;
  AssembleConfig assemble;
};

// Stability selection over seeded subsamples of size floor(n/2): node-wise
// lasso + OR rule per subsample, per-edge selection frequencies theta,
// instability D(lambda) = mean 2 theta (1-theta), monotonized over the grid
// as Dbar(lambda) = max over lambda' >= lambda. Returns the smallest grid
// lambda with Dbar <= cut, or the largest grid lambda if none qualifies.
// per_lambda holds the monotonized instabilities.
SelectionResult stars_select(const DataMatrix& data, const EstimatorSpec& estimator,
                             const LambdaGrid& grid, std::uint64_t seed,
                             const StarsConfig& cfg = {});

}  // namespace robggm
