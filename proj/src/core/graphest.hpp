#pragma once

#include <Eigen/Dense>
#include <optional>

#include "core/types.hpp"

namespace robggm {

// Coordinate descent for  min_b  0.5 b'Qb - c'b + lambda |b|_1  with Q PSD,
// positive diagonal. Stops when the KKT residual (max over coordinates of
// |g_i + lambda sign(b_i)| on active, max(0, |g_i| - lambda) on zero, with
// g = Qb - c) drops to tol. b is used as the warm start and overwritten.
// Returns the final KKT residual.
double lasso_cd(const Eigen::MatrixXd& Q, const Eigen::VectorXd& c, double lambda,
                double tol, int max_sweeps, Eigen::VectorXd& b);

// Warm-start state carried across a lambda grid (covariance-side iterate and
// per-column lasso coefficients).
struct GlassoState {
  Eigen::MatrixXd W;
  Eigen::MatrixXd B;  // p x (p-1), row j = coefficients for column j's subproblem
};

// L1-penalized precision estimation (penalty on ALL entries, diagonal
// included) by block coordinate descent on the covariance side. The stopping
// rule is the exact KKT certificate evaluated on the recovered precision
// matrix with its numeric inverse:
//   active (i,j):  |(S - Omega^-1)_ij + lambda sign(Omega_ij)| <= tol
//   zero (i,j):    |(S - Omega^-1)_ij| <= lambda + tol
// so the certificate holds on every successful return.
PrecisionEstimate glasso(const CovEstimate& S, double lambda, double tol = 1e-4,
                         GlassoState* warm = nullptr);

// The certificate residual above for an arbitrary (S, Omega, lambda) triple.
double glasso_kkt_residual(const Eigen::MatrixXd& S, const Eigen::MatrixXd& omega,
                           double lambda);

// tr(S Omega) - log det Omega + lambda |Omega|_1 (all entries). Errors if
// Omega is not positive definite.
double glasso_objective(const Eigen::MatrixXd& S, const Eigen::MatrixXd& omega,
                        double lambda);

// One lasso program per variable j:
//   min 0.5 b' S_{-j,-j} b - S_{j,-j} b + lambda |b|_1
// Row j of the result holds the p-1 coefficients of program j (column order:
// variables 1..p skipping j). Optional warm start must match the shape.
Eigen::MatrixXd nodewise_lasso(const CovEstimate& S, double lambda, double tol = 1e-4,
                               const Eigen::MatrixXd* warm = nullptr);

EdgeSet edges_from_precision(const PrecisionEstimate& est, double zero_tol = 1e-8);

enum class EdgeRule { and_rule, or_rule };

EdgeSet edges_from_nodewise(const Eigen::MatrixXd& B, EdgeRule rule, double zero_tol = 1e-8);

}  // namespace robggm
