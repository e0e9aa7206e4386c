#include "core/select.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <string>

#include "core/errors.hpp"
#include "core/graphest.hpp"
#include "core/rng.hpp"

namespace robggm {

namespace {

DataMatrix take_rows(const DataMatrix& data, const std::vector<int>& rows) {
  DataMatrix out;
  out.column_names = data.column_names;
  out.values.resize(static_cast<int>(rows.size()), data.p());
  for (std::size_t r = 0; r < rows.size(); ++r) out.values.row(r) = data.values.row(rows[r]);
  return out;
}

double cv_loss(const Eigen::MatrixXd& S2, const Eigen::MatrixXd& omega1) {
  Eigen::LLT<Eigen::MatrixXd> llt(omega1);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::degenerate, "cv2_select: fitted precision matrix not positive definite");
  double logdet = 0.0;
  for (int i = 0; i < omega1.rows(); ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
  return (S2 * omega1).trace() - logdet;
}

std::vector<double> fold_losses(const DataMatrix& fit_fold, const DataMatrix& eval_fold,
                                const EstimatorSpec& estimator, const LambdaGrid& grid,
                                const Cv2Config& cfg) {
  const CovEstimate S1 = psd_project(assemble_cov(fit_fold, estimator, cfg.assemble), 0.0);
  const CovEstimate S2 =
      psd_project(assemble_cov(eval_fold, estimator, cfg.assemble), 1e-6);
  std::vector<double> losses;
  losses.reserve(grid.values.size());
  GlassoState warm;
  for (double lambda : grid.values) {
    const PrecisionEstimate est = glasso(S1, lambda, cfg.glasso_tol, &warm);
    losses.push_back(cv_loss(S2.matrix, est.omega));
  }
  return losses;
}

}  // namespace

LambdaGrid lambda_grid(const CovEstimate& S, int count, double ratio) {
  if (count < 2) fail(ErrorCode::invalid_argument, "lambda_grid: count must be >= 2");
  if (!(ratio > 0.0 && ratio < 1.0))
    fail(ErrorCode::invalid_argument, "lambda_grid: ratio must lie in (0,1)");
  const int p = static_cast<int>(S.matrix.rows());
  double lambda_max = 0.0;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      if (i != j) lambda_max = std::max(lambda_max, std::fabs(S.matrix(i, j)));
  if (lambda_max == 0.0)
    fail(ErrorCode::degenerate, "lambda_grid: all off-diagonal entries are zero");

  LambdaGrid grid;
  grid.values.resize(count);
  for (int i = 0; i < count; ++i)
    grid.values[i] =
        lambda_max * std::pow(ratio, static_cast<double>(i) / static_cast<double>(count - 1));
  grid.values.front() = lambda_max;          // pin the endpoints exactly
  grid.values.back() = ratio * lambda_max;
  return grid;
}

int select_min_loss(const std::vector<double>& losses) {
  if (losses.empty()) fail(ErrorCode::invalid_argument, "select_min_loss: empty losses");
  int best = 0;
  for (int i = 1; i < static_cast<int>(losses.size()); ++i)
    if (losses[i] < losses[best]) best = i;
  return best;
}

SelectionResult cv2_select(const DataMatrix& data, const EstimatorSpec& estimator,
                           const LambdaGrid& grid, std::uint64_t seed,
                           const Cv2Config& cfg) {
  const int n = data.n();
  if (n < 20) fail(ErrorCode::invalid_argument, "cv2_select: need n >= 20");
  if (grid.values.empty()) fail(ErrorCode::invalid_argument, "cv2_select: empty grid");

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  Rng rng = Rng::stream("select/cv2", seed);
  rng.shuffle(order);
  const int n1 = (n + 1) / 2;
  const std::vector<int> rows1(order.begin(), order.begin() + n1);
  const std::vector<int> rows2(order.begin() + n1, order.end());
  const DataMatrix fold1 = take_rows(data, rows1);
  const DataMatrix fold2 = take_rows(data, rows2);

  SelectionResult out;
  out.per_lambda = fold_losses(fold1, fold2, estimator, grid, cfg);
  if (cfg.symmetric) {
    const std::vector<double> reverse = fold_losses(fold2, fold1, estimator, grid, cfg);
    for (std::size_t i = 0; i < out.per_lambda.size(); ++i)
      out.per_lambda[i] = 0.5 * (out.per_lambda[i] + reverse[i]);
  }
  out.lambda = grid.values[static_cast<std::size_t>(select_min_loss(out.per_lambda))];
  return out;
}

SelectionResult stars_select(const DataMatrix& data, const EstimatorSpec& estimator,
                             const LambdaGrid& grid, std::uint64_t seed,
                             const StarsConfig& cfg) {
  if (cfg.subsamples < 2)
    fail(ErrorCode::invalid_argument, "stars_select: need at least 2 subsamples");
  if (grid.values.empty()) fail(ErrorCode::invalid_argument, "stars_select: empty grid");
  const int n = data.n();
  const int p = data.p();
  const int m = n / 2;
  if (m < 3) fail(ErrorCode::invalid_argument, "stars_select: subsample size too small");

  const std::size_t n_lambda = grid.values.size();
  const std::size_t n_pairs = static_cast<std::size_t>(p) * (p - 1) / 2;
  // selection counts per (lambda, unordered pair)
  std::vector<std::vector<int>> counts(n_lambda, std::vector<int>(n_pairs, 0));

  Rng rng = Rng::stream("select/stars", seed);
  for (int b = 0; b < cfg.subsamples; ++b) {
    const std::vector<int> rows = rng.sample_without_replacement(n, m);
    const DataMatrix sub = take_rows(data, rows);
    const CovEstimate S = psd_project(assemble_cov(sub, estimator, cfg.assemble), 0.0);
    Eigen::MatrixXd warm = Eigen::MatrixXd::Zero(p, p - 1);
    for (std::size_t li = 0; li < n_lambda; ++li) {
      warm = nodewise_lasso(S, grid.values[li], cfg.nodewise_tol, &warm);
      const EdgeSet edges = edges_from_nodewise(warm, EdgeRule::or_rule, cfg.zero_tol);
      for (const auto& [i, j] : edges.pairs) {
        const std::size_t a = static_cast<std::size_t>(i - 1);
        const std::size_t c = static_cast<std::size_t>(j - 1);
        counts[li][a * p - a * (a + 1) / 2 + (c - a - 1)] += 1;
      }
    }
  }

  std::vector<double> instability(n_lambda, 0.0);
  for (std::size_t li = 0; li < n_lambda; ++li) {
    double total = 0.0;
    for (std::size_t q = 0; q < n_pairs; ++q) {
      const double theta = static_cast<double>(counts[li][q]) / cfg.subsamples;
      total += 2.0 * theta * (1.0 - theta);
    }
    instability[li] = total / static_cast<double>(n_pairs);
  }
  // Monotonize: Dbar(lambda) = max over lambda' >= lambda; the grid is
  // descending, so that is a running prefix max.
  std::vector<double> dbar(n_lambda);
  double running = 0.0;
  for (std::size_t li = 0; li < n_lambda; ++li) {
    running = std::max(running, instability[li]);
    dbar[li] = running;
  }

  SelectionResult out;
  out.per_lambda = dbar;
  // Smallest compatible lambda = highest index with Dbar <= cut (Dbar is
  // non-decreasing along the descending grid). Fallback: largest grid lambda.
  int chosen = -1;
  for (int li = static_cast<int>(n_lambda) - 1; li >= 0; --li) {
    if (dbar[static_cast<std::size_t>(li)] <= cfg.cut) {
      chosen = li;
      break;
    }
  }
  out.lambda = grid.values[chosen >= 0 ? static_cast<std::size_t>(chosen) : 0];
  return out;
}

}  // namespace robggm
