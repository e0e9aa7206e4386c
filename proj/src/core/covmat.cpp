#include "core/covmat.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "core/errors.hpp"

namespace robggm {

namespace {

std::span<const double> column(const Eigen::MatrixXd& x, int j) {
  return {x.col(j).data(), static_cast<std::size_t>(x.rows())};
}

// Wraps degenerate-scale errors with the offending column (1-based).
template <typename F>
auto for_column(int j, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::degenerate)
      fail(ErrorCode::degenerate, "column " + std::to_string(j + 1) + ": " + e.what());
    throw;
  }
}

}  // namespace

Eigen::MatrixXd standardize(const Eigen::MatrixXd& x, const std::vector<UnivariateFit>& fits) {
  if (static_cast<int>(fits.size()) != x.cols())
    fail(ErrorCode::invalid_argument, "standardize: one fit per column required");
  Eigen::MatrixXd z(x.rows(), x.cols());
  for (int j = 0; j < x.cols(); ++j) {
    if (!(fits[j].sigma2 > 0.0))
      fail(ErrorCode::degenerate, "standardize: nonpositive scale for column " +
                                      std::to_string(j + 1));
    z.col(j) = (x.col(j).array() - fits[j].mu) / std::sqrt(fits[j].sigma2);
  }
  return z;
}

CovEstimate assemble_cov(const DataMatrix& data, const EstimatorSpec& estimator,
                         const AssembleConfig& cfg_in) {
  const Eigen::MatrixXd& x = data.values;
  const int n = data.n(), p = data.p();
  if (n < 3) fail(ErrorCode::invalid_argument, "assemble_cov: need n >= 3");
  if (p < 2) fail(ErrorCode::invalid_argument, "assemble_cov: need p >= 2");

  AssembleConfig cfg = cfg_in;
  cfg.univariate.gamma = estimator.gamma;
  cfg.pairwise.gamma = estimator.gamma;

  CovEstimate out;
  out.estimator = estimator;
  Eigen::MatrixXd& s = out.matrix;
  s.setZero(p, p);

  switch (estimator.method) {
    case Method::gamma: {
      std::vector<UnivariateFit> fits(p);
      for (int j = 0; j < p; ++j)
        fits[j] = for_column(j, [&] { return gamma_univariate_fit(column(x, j), cfg.univariate); });
      const Eigen::MatrixXd z = standardize(x, fits);
      for (int j = 0; j < p; ++j) s(j, j) = fits[j].sigma2;
      for (int j = 0; j < p; ++j) {
        for (int k = j + 1; k < p; ++k) {
          const double rho = gamma_corr(column(z, j), column(z, k), cfg.pairwise).rho;
          s(j, k) = s(k, j) = std::sqrt(fits[j].sigma2) * std::sqrt(fits[k].sigma2) * rho;
        }
      }
      break;
    }
    case Method::kendall:
    case Method::spearman: {
      const RankMethod rm =
          estimator.method == Method::kendall ? RankMethod::kendall : RankMethod::spearman;
      std::vector<double> scale(p);
      for (int j = 0; j < p; ++j)
        scale[j] = for_column(j, [&] { return median_mad(column(x, j)).mad; });
      for (int j = 0; j < p; ++j) s(j, j) = scale[j] * scale[j];
      for (int j = 0; j < p; ++j)
        for (int k = j + 1; k < p; ++k) {
          const double rho =
              for_column(j, [&] { return rank_corr(column(x, j), column(x, k), rm); });
          s(j, k) = s(k, j) = scale[j] * scale[k] * rho;
        }
      break;
    }
    case Method::gauss_rank: {
      std::vector<double> scale(p);
      for (int j = 0; j < p; ++j) {
        scale[j] = for_column(j, [&] { return qn_scale(column(x, j)); });
        if (scale[j] == 0.0)
          fail(ErrorCode::degenerate,
               "column " + std::to_string(j + 1) + ": zero Qn scale");
      }
      for (int j = 0; j < p; ++j) s(j, j) = scale[j] * scale[j];
      for (int j = 0; j < p; ++j)
        for (int k = j + 1; k < p; ++k) {
          const double rho = for_column(
              j, [&] { return rank_corr(column(x, j), column(x, k), RankMethod::gauss_rank); });
          s(j, k) = s(k, j) = scale[j] * scale[k] * rho;
        }
      break;
    }
    case Method::gk_qn: {
      for (int j = 0; j < p; ++j) {
        const double sj = for_column(j, [&] { return qn_scale(column(x, j)); });
        if (sj == 0.0)
          fail(ErrorCode::degenerate,
               "column " + std::to_string(j + 1) + ": zero Qn scale");
        s(j, j) = sj * sj;
      }
      for (int j = 0; j < p; ++j)
        for (int k = j + 1; k < p; ++k)
          s(j, k) = s(k, j) =
              for_column(j, [&] { return gk_pairwise_cov(column(x, j), column(x, k)); });
      break;
    }
    case Method::sample: {
      const Eigen::VectorXd mean = x.colwise().mean();
      Eigen::MatrixXd centered = x.rowwise() - mean.transpose();
      Eigen::MatrixXd mle = (centered.transpose() * centered) / static_cast<double>(n);
      for (int j = 0; j < p; ++j)
        if (!(mle(j, j) > 0.0))
          fail(ErrorCode::degenerate,
               "column " + std::to_string(j + 1) + ": zero sample variance");
      for (int j = 0; j < p; ++j) {
        s(j, j) = mle(j, j);
        for (int k = j + 1; k < p; ++k) {
          const double rho = mle(j, k) / (std::sqrt(mle(j, j)) * std::sqrt(mle(k, k)));
          s(j, k) = s(k, j) = std::sqrt(mle(j, j)) * std::sqrt(mle(k, k)) * rho;
        }
      }
      break;
    }
  }
  return out;
}

CovEstimate psd_project(const CovEstimate& S, double delta) {
  const Eigen::MatrixXd sym = 0.5 * (S.matrix + S.matrix.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success)
    fail(ErrorCode::internal, "psd_project: eigendecomposition failed");

  CovEstimate out = S;
  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig >= delta) {
    out.matrix = S.matrix;  // already feasible: pass through unchanged
    out.projected = true;
    out.min_eigenvalue = min_eig;
    return out;
  }
  Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(delta);
  out.matrix = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
  out.matrix = 0.5 * (out.matrix + out.matrix.transpose());
  out.projected = true;
  out.min_eigenvalue = clipped.minCoeff();
  return out;
}

}  // namespace robggm
