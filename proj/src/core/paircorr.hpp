#pragma once

#include <span>
#include <vector>

namespace robggm {

struct PgdConfig {
  double gamma = 0.3;
  double R = 0.99;    // box bound: iterates live in [-R, R]
  double s0 = 0.01;   // initial step parameter
  double tol = 1e-8;  // on |rho_{t+1} - rho_t|
  int max_iter = 500;
};

struct PairValueGrad {
  double value = 0.0;
  double grad = 0.0;
};

// Gamma-divergence objective between standardized pair data and the
// bivariate normal correlation family, plus its derivative in rho:
//   q_i   = zj_i^2 + zk_i^2 - 2 rho zj_i zk_i
//   d(rho)= -(1/g) log sum_i exp(-g q_i / (2 (1-rho^2)))
//           + log(1-rho^2) / (2 (1+g))
//   d'(rho)= sum_i w_i [ rho q_i/(1-rho^2)^2 - zj_i zk_i/(1-rho^2) ]
//           - rho / ((1+g)(1-rho^2)),   w_i the softmax of the exponents.
PairValueGrad gamma_corr_value_grad(std::span<const double> zj, std::span<const double> zk,
                                    double rho, double gamma);

struct PgdStep {  // recorded when a trace is requested
  double rho_from = 0.0;
  double rho_to = 0.0;
  double step = 0.0;  // the s that produced the accepted candidate
};

struct PairCorrFit {
  double rho = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Projected gradient descent from rho=0 with majorization backtracking: the
// candidate rho - d'(rho)/s (clipped to the box) is accepted once
//   d(cand) <= d(rho) + d'(rho)(cand - rho) + (s/2)(cand - rho)^2,
// doubling s until that holds; the accepted s carries over to the next
// iteration. Non-convergence returns the best iterate flagged accordingly.
PairCorrFit gamma_corr(std::span<const double> zj, std::span<const double> zk,
                       const PgdConfig& cfg, std::vector<PgdStep>* trace = nullptr);

enum class RankMethod { kendall, spearman, gauss_rank };

// Rank-based correlation estimates under the normal copula:
//   kendall:    sin(pi tau_b / 2)
//   spearman:   2 sin(pi r_S / 6)
//   gauss_rank: sum Phi^-1(R_i/(n+1)) Phi^-1(S_i/(n+1)) / sum Phi^-1(i/(n+1))^2
// Midranks for ties; the result is clamped to [-1, 1].
double rank_corr(std::span<const double> x, std::span<const double> y, RankMethod method);

// Pairwise covariance through the scale identity
//   cov = [scale(a x + b y)^2 - scale(a x - b y)^2] / (4 a b),
// a = 1/scale(x), b = 1/scale(y), with Qn as the scale.
double gk_pairwise_cov(std::span<const double> x, std::span<const double> y);

// Midranks (average ranks on ties), 1-based.
std::vector<double> midranks(std::span<const double> x);

}  // namespace robggm
