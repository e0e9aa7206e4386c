#pragma once

#include <Eigen/Dense>

#include "core/paircorr.hpp"
#include "core/types.hpp"
#include "core/univariate.hpp"

namespace robggm {

struct AssembleConfig {
  GammaConfig univariate;  // gamma copied from the estimator spec
  PgdConfig pairwise;      // likewise
};

// Column-wise (x - mu_j)/sqrt(sigma2_j) given per-column fits.
Eigen::MatrixXd standardize(const Eigen::MatrixXd& x, const std::vector<UnivariateFit>& fits);

// Covariance assembled entrywise from robust marginals and pairwise
// correlations: S_jk = sqrt(s_jj) sqrt(s_kk) rho_jk, diagonal exactly the
// marginal scale estimates. gk_qn fills entries directly from the pairwise
// identity instead (diagonal Qn^2).
CovEstimate assemble_cov(const DataMatrix& data, const EstimatorSpec& estimator,
                         const AssembleConfig& cfg = {});

// Frobenius projection onto {S symmetric, eigenvalues >= delta}: clip the
// eigenvalues of the symmetrized input. Inputs already satisfying the
// constraint pass through unchanged.
CovEstimate psd_project(const CovEstimate& S, double delta = 0.0);

}  // namespace robggm
