#include "core/graphest.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <string>

#include "core/errors.hpp"

namespace robggm {

namespace {

constexpr int kMaxOuterSweeps = 10000;
constexpr int kMaxInnerSweeps = 10000;

inline double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

void check_square_symmetric(const Eigen::MatrixXd& S, const char* who) {
  if (S.rows() != S.cols())
    fail(ErrorCode::invalid_argument, std::string(who) + ": matrix not square");
  const double asym = (S - S.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * (1.0 + S.cwiseAbs().maxCoeff()))
    fail(ErrorCode::invalid_argument, std::string(who) + ": matrix not symmetric");
}

void check_psd_input(const CovEstimate& S, const char* who) {
  check_square_symmetric(S.matrix, who);
  if (S.projected) return;  // psd_project already certified the spectrum
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S.matrix,
                                                     Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-8)
    fail(ErrorCode::invalid_argument,
         std::string(who) + ": input covariance is not positive semidefinite");
}

// Quadratic term from Qsrc without row/column j; linear term from column j
// of Csrc (which is S itself for node-wise programs, but the current W
// iterate for the glasso subproblem).
void split_column(const Eigen::MatrixXd& Qsrc, const Eigen::MatrixXd& Csrc, int j,
                  Eigen::MatrixXd& Q, Eigen::VectorXd& c) {
  const int p = static_cast<int>(Qsrc.rows());
  Q.resize(p - 1, p - 1);
  c.resize(p - 1);
  for (int a = 0, ar = 0; a < p; ++a) {
    if (a == j) continue;
    c(ar) = Csrc(a, j);
    for (int b = 0, bc = 0; b < p; ++b) {
      if (b == j) continue;
      Q(ar, bc) = Qsrc(a, b);
      ++bc;
    }
    ++ar;
  }
}

}  // namespace

double lasso_cd(const Eigen::MatrixXd& Q, const Eigen::VectorXd& c, double lambda,
                double tol, int max_sweeps, Eigen::VectorXd& b) {
  const int m = static_cast<int>(Q.rows());
  if (b.size() != m) {
    b.setZero(m);
  }
  for (int i = 0; i < m; ++i)
    if (!(Q(i, i) > 0.0))
      fail(ErrorCode::degenerate, "lasso_cd: nonpositive diagonal in quadratic term");

  Eigen::VectorXd g = Q * b - c;
  double residual = 0.0;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (int i = 0; i < m; ++i) {
      const double bi_new = soft_threshold(Q(i, i) * b(i) - g(i), lambda) / Q(i, i);
      const double delta = bi_new - b(i);
      if (delta != 0.0) {
        g += Q.col(i) * delta;
        b(i) = bi_new;
      }
    }
    residual = 0.0;
    for (int i = 0; i < m; ++i) {
      const double r = (b(i) != 0.0) ? std::fabs(g(i) + lambda * (b(i) > 0 ? 1.0 : -1.0))
                                     : std::max(0.0, std::fabs(g(i)) - lambda);
      residual = std::max(residual, r);
    }
    if (residual <= tol) return residual;
  }
  return residual;
}

double glasso_kkt_residual(const Eigen::MatrixXd& S, const Eigen::MatrixXd& omega,
                           double lambda) {
  const Eigen::MatrixXd R = S - omega.inverse();
  const int p = static_cast<int>(S.rows());
  double worst = 0.0;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      const double o = omega(i, j);
      const double r = (o != 0.0) ? std::fabs(R(i, j) + lambda * (o > 0 ? 1.0 : -1.0))
                                  : std::max(0.0, std::fabs(R(i, j)) - lambda);
      worst = std::max(worst, r);
    }
  return worst;
}

double glasso_objective(const Eigen::MatrixXd& S, const Eigen::MatrixXd& omega,
                        double lambda) {
  Eigen::LLT<Eigen::MatrixXd> llt(omega);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::degenerate, "glasso_objective: precision matrix not positive definite");
  double logdet = 0.0;
  for (int i = 0; i < omega.rows(); ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
  return (S * omega).trace() - logdet + lambda * omega.cwiseAbs().sum();
}

PrecisionEstimate glasso(const CovEstimate& S_est, double lambda, double tol,
                         GlassoState* warm) {
  const Eigen::MatrixXd& S = S_est.matrix;
  check_psd_input(S_est, "glasso");
  if (!(lambda >= 0.0)) fail(ErrorCode::invalid_argument, "glasso: lambda must be >= 0");
  if (!(tol > 0.0)) fail(ErrorCode::invalid_argument, "glasso: tol must be > 0");
  const int p = static_cast<int>(S.rows());

  Eigen::MatrixXd W;
  Eigen::MatrixXd B;
  if (warm && warm->W.rows() == p && warm->B.rows() == p && warm->B.cols() == p - 1) {
    W = warm->W;
    W.diagonal() = S.diagonal().array() + lambda;  // diagonal is pinned by the KKT system
    B = warm->B;
  } else {
    W = S;
    W.diagonal() = S.diagonal().array() + lambda;
    B.setZero(p, p - 1);
  }

  PrecisionEstimate est;
  est.lambda = lambda;
  Eigen::MatrixXd omega(p, p);
  Eigen::MatrixXd Q;
  Eigen::VectorXd c, beta, w12;
  double inner_tol = std::min(1e-6, 0.01 * tol);
  double prev_residual = std::numeric_limits<double>::infinity();

  for (int sweep = 1; sweep <= kMaxOuterSweeps; ++sweep) {
    for (int j = 0; j < p; ++j) {
      split_column(W, S, j, Q, c);
      beta = B.row(j).transpose();
      lasso_cd(Q, c, lambda, inner_tol, kMaxInnerSweeps, beta);
      B.row(j) = beta.transpose();
      w12 = Q * beta;
      for (int a = 0, ar = 0; a < p; ++a) {
        if (a == j) continue;
        W(a, j) = W(j, a) = w12(ar++);
      }
    }

    // Recover the precision matrix. A pair is zero only when both of its
    // lasso programs agree (zero wins on disagreement: the zero branch of the
    // certificate has the lambda-wide margin).
    bool recovered = true;
    Eigen::VectorXd diag(p);
    for (int j = 0; j < p; ++j) {
      double dot = 0.0;
      for (int a = 0, ar = 0; a < p; ++a) {
        if (a == j) continue;
        dot += W(a, j) * B(j, ar++);
      }
      const double denom = W(j, j) - dot;
      if (!(denom > 0.0)) {
        recovered = false;
        break;
      }
      diag(j) = 1.0 / denom;
    }
    if (recovered) {
      omega.setZero();
      for (int j = 0; j < p; ++j) omega(j, j) = diag(j);
      for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
          const double bji = B(j, i);            // variable i inside program j (i < j)
          const double bij = B(i, j - 1);        // variable j inside program i
          if (bji == 0.0 || bij == 0.0) continue;
          omega(i, j) = omega(j, i) = -0.5 * (bji * diag(j) + bij * diag(i));
        }
      }
      const double residual = glasso_kkt_residual(S, omega, lambda);
      est.iterations = sweep;
      if (residual <= tol) {
        est.omega = omega;
        est.kkt_residual = residual;
        est.objective = glasso_objective(S, omega, lambda);
        if (warm) {
          warm->W = W;
          warm->B = B;
        }
        return est;
      }
      // Stalled progress usually means the inner programs are too loose.
      if (residual > 0.9 * prev_residual) inner_tol = std::max(inner_tol * 0.1, 1e-14);
      prev_residual = residual;
    } else {
      inner_tol = std::max(inner_tol * 0.1, 1e-14);
    }
  }
  fail(ErrorCode::nonconvergence,
       "glasso: KKT residual " + std::to_string(prev_residual) + " above tolerance " +
           std::to_string(tol) + " after " + std::to_string(kMaxOuterSweeps) + " sweeps");
}

Eigen::MatrixXd nodewise_lasso(const CovEstimate& S_est, double lambda, double tol,
                               const Eigen::MatrixXd* warm) {
  const Eigen::MatrixXd& S = S_est.matrix;
  check_psd_input(S_est, "nodewise_lasso");
  if (!(lambda >= 0.0))
    fail(ErrorCode::invalid_argument, "nodewise_lasso: lambda must be >= 0");
  const int p = static_cast<int>(S.rows());
  if (p < 2) fail(ErrorCode::invalid_argument, "nodewise_lasso: need p >= 2");

  Eigen::MatrixXd B(p, p - 1);
  Eigen::MatrixXd Q;
  Eigen::VectorXd c, beta;
  for (int j = 0; j < p; ++j) {
    split_column(S, S, j, Q, c);
    if (warm && warm->rows() == p && warm->cols() == p - 1)
      beta = warm->row(j).transpose();
    else
      beta.setZero(p - 1);
    const double residual = lasso_cd(Q, c, lambda, tol, kMaxInnerSweeps, beta);
    if (residual > tol)
      fail(ErrorCode::nonconvergence,
           "nodewise_lasso: program " + std::to_string(j + 1) + " stalled at residual " +
               std::to_string(residual));
    B.row(j) = beta.transpose();
  }
  return B;
}

EdgeSet edges_from_precision(const PrecisionEstimate& est, double zero_tol) {
  const int p = static_cast<int>(est.omega.rows());
  EdgeSet edges;
  edges.p = p;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (std::fabs(est.omega(i, j)) > zero_tol) edges.add(i + 1, j + 1);
  edges.sort_and_dedup();
  return edges;
}

EdgeSet edges_from_nodewise(const Eigen::MatrixXd& B, EdgeRule rule, double zero_tol) {
  const int p = static_cast<int>(B.rows());
  if (B.cols() != p - 1)
    fail(ErrorCode::invalid_argument, "edges_from_nodewise: expected p x (p-1) coefficients");
  EdgeSet edges;
  edges.p = p;
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      const bool from_i = std::fabs(B(i, j - 1)) > zero_tol;  // variable j in program i
      const bool from_j = std::fabs(B(j, i)) > zero_tol;      // variable i in program j
      const bool active =
          rule == EdgeRule::and_rule ? (from_i && from_j) : (from_i || from_j);
      if (active) edges.add(i + 1, j + 1);
    }
  }
  edges.sort_and_dedup();
  return edges;
}

}  // namespace robggm
