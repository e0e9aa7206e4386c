#pragma once

#include <span>
#include <vector>

namespace robggm {

struct LocationScale {
  double median = 0.0;
  double mad = 0.0;  // 1.4826 * median absolute deviation
};

// Errors with a degenerate-scale message when the raw MAD is zero.
LocationScale median_mad(std::span<const double> x);

double median_of(std::span<const double> x);

struct GammaConfig {
  double gamma = 0.3;
  double tol = 1e-8;
  int max_iter = 1000;
};

struct UnivariateFit {
  double mu = 0.0;
  double sigma2 = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Weighted location/scale fixed point for the gamma-divergence objective
//   d(mu, s2) = -(1/g) log sum_i exp(-g (x_i - mu)^2 / (2 s2))
//               + log(s2) / (2 (1 + g)),
// iterated from (median, raw MAD): weights are the softmax of the exponents,
// mu <- sum w_i x_i, s2 <- (1+g) sum w_i (x_i - mu_new)^2. The objective is
// non-increasing along the iterates. The variance iterate starts at the
// unnormalized MAD, a deliberately low point whose basin of attraction is the
// majority component of the data.
UnivariateFit gamma_univariate_fit(std::span<const double> x, const GammaConfig& cfg,
                                   std::vector<double>* objective_trace = nullptr);

// The objective above; used by tests and the monotonicity trace.
double gamma_univariate_objective(std::span<const double> x, double mu, double sigma2,
                                  double gamma);

// Rousseeuw-Croux Qn: 2.2219 times the k-th order statistic of the n(n-1)/2
// pairwise absolute differences, k = h(h-1)/2, h = floor(n/2) + 1. Plain
// O(n^2) enumeration, no finite-sample correction factors.
double qn_scale(std::span<const double> x);

}  // namespace robggm
