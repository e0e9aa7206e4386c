#include "core/evalmetrics.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace robggm {

EdgeComparison compare_edges(const EdgeSet& est, const EdgeSet& truth) {
  if (est.p != truth.p)
    fail(ErrorCode::invalid_argument, "compare_edges: edge sets disagree on p");
  const long long pairs =
      static_cast<long long>(truth.p) * (truth.p - 1) / 2;
  const long long n_true = static_cast<long long>(truth.pairs.size());
  const long long n_false = pairs - n_true;
  if (n_true == 0) fail(ErrorCode::invalid_argument, "compare_edges: empty true edge set");
  if (n_false == 0)
    fail(ErrorCode::invalid_argument, "compare_edges: complete true edge set");

  long long hits = 0;
  for (const auto& e : est.pairs)
    if (truth.contains(e.first, e.second)) ++hits;
  const long long false_hits = static_cast<long long>(est.pairs.size()) - hits;

  EdgeComparison out;
  out.tpr = static_cast<double>(hits) / static_cast<double>(n_true);
  out.fpr = static_cast<double>(false_hits) / static_cast<double>(n_false);
  return out;
}

MatrixErrors matrix_errors(const Eigen::MatrixXd& omega_hat, const Eigen::MatrixXd& omega,
                           const Eigen::MatrixXd& sigma_hat, const Eigen::MatrixXd& sigma) {
  if (omega_hat.rows() != omega.rows() || omega_hat.cols() != omega.cols() ||
      sigma_hat.rows() != sigma.rows() || sigma_hat.cols() != sigma.cols())
    fail(ErrorCode::invalid_argument, "matrix_errors: shape mismatch");
  MatrixErrors out;
  out.mse = (omega_hat - omega).norm() / static_cast<double>(omega.rows());
  out.supnorm = (sigma_hat - sigma).cwiseAbs().maxCoeff();
  return out;
}

double roc_auc(std::vector<RocPoint> points) {
  points.push_back({0.0, 0.0, 0.0});
  points.push_back({0.0, 1.0, 1.0});
  std::sort(points.begin(), points.end(), [](const RocPoint& a, const RocPoint& b) {
    if (a.fpr != b.fpr) return a.fpr < b.fpr;
    return a.tpr < b.tpr;
  });
  double auc = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i)
    auc += 0.5 * (points[i].tpr + points[i - 1].tpr) * (points[i].fpr - points[i - 1].fpr);
  return auc;
}

RocCurve roc_curve(const std::vector<std::vector<RocPoint>>& replicate_curves) {
  if (replicate_curves.empty())
    fail(ErrorCode::invalid_argument, "roc_curve: no replicate curves");
  const std::size_t n_lambda = replicate_curves.front().size();
  if (n_lambda == 0) fail(ErrorCode::invalid_argument, "roc_curve: empty curve");
  for (const auto& curve : replicate_curves) {
    if (curve.size() != n_lambda)
      fail(ErrorCode::invalid_argument, "roc_curve: replicate grids differ in length");
    for (std::size_t i = 0; i < n_lambda; ++i)
      if (curve[i].lambda != replicate_curves.front()[i].lambda)
        fail(ErrorCode::invalid_argument, "roc_curve: replicate grids differ");
  }

  RocCurve out;
  out.points.resize(n_lambda);
  for (std::size_t i = 0; i < n_lambda; ++i) {
    RocPoint& pt = out.points[i];
    pt.lambda = replicate_curves.front()[i].lambda;
    for (const auto& curve : replicate_curves) {
      pt.fpr += curve[i].fpr;
      pt.tpr += curve[i].tpr;
    }
    pt.fpr /= static_cast<double>(replicate_curves.size());
    pt.tpr /= static_cast<double>(replicate_curves.size());
  }
  out.auc = roc_auc(out.points);
  return out;
}

}  // namespace robggm
