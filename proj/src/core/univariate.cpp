#include "core/univariate.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "core/errors.hpp"

namespace robggm {

namespace {

constexpr double kMadConsistency = 1.4826;  // normal-consistency factor
constexpr double kQnConsistency = 2.2219;

double median_sorted(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double median_of(std::span<const double> x) {
  if (x.empty()) fail(ErrorCode::invalid_argument, "median of empty vector");
  std::vector<double> v(x.begin(), x.end());
  return median_sorted(v);
}

LocationScale median_mad(std::span<const double> x) {
  if (x.size() < 2) fail(ErrorCode::invalid_argument, "median_mad needs n >= 2");
  LocationScale out;
  out.median = median_of(x);
  std::vector<double> dev(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) dev[i] = std::fabs(x[i] - out.median);
  const double raw = median_sorted(dev);
  if (raw == 0.0)
    fail(ErrorCode::degenerate, "median_mad: zero median absolute deviation (degenerate scale)");
  out.mad = kMadConsistency * raw;
  return out;
}

double gamma_univariate_objective(std::span<const double> x, double mu, double sigma2,
                                  double gamma) {
  // log-sum-exp with max subtraction; all exponents are <= 0 at the max.
  double m = -std::numeric_limits<double>::infinity();
  std::vector<double> a(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - mu;
    a[i] = -gamma * d * d / (2.0 * sigma2);
    m = std::max(m, a[i]);
  }
  double s = 0.0;
  for (double ai : a) s += std::exp(ai - m);
  return -(m + std::log(s)) / gamma + std::log(sigma2) / (2.0 * (1.0 + gamma));
}

UnivariateFit gamma_univariate_fit(std::span<const double> x, const GammaConfig& cfg,
                                   std::vector<double>* objective_trace) {
  if (x.size() < 2) fail(ErrorCode::invalid_argument, "gamma_univariate_fit needs n >= 2");
  if (!(cfg.gamma > 0.0)) fail(ErrorCode::invalid_argument, "gamma must be > 0");
  if (!(cfg.tol > 0.0) || cfg.max_iter < 1)
    fail(ErrorCode::invalid_argument, "gamma_univariate_fit: bad tol/max_iter");

  const LocationScale init = median_mad(x);
  UnivariateFit fit;
  fit.mu = init.median;
  // The variance iterate starts at the raw (unnormalized) median absolute
  // deviation. The deliberately low start concentrates the first weight pass
  // on the central bulk, so the iteration settles on the majority component;
  // a larger start (e.g. the squared consistent MAD, which contamination
  // inflates) can land in a wide local optimum bridging distant outliers.
  fit.sigma2 = init.mad / kMadConsistency;

  const std::size_t n = x.size();
  std::vector<double> w(n);
  const double obj_init = gamma_univariate_objective(x, fit.mu, fit.sigma2, cfg.gamma);
  double obj_prev = obj_init;
  (void)obj_prev;
  if (objective_trace) objective_trace->push_back(obj_init);

  for (int it = 1; it <= cfg.max_iter; ++it) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double d = x[i] - fit.mu;
      w[i] = -cfg.gamma * d * d / (2.0 * fit.sigma2);
      m = std::max(m, w[i]);
    }
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = std::exp(w[i] - m);
      wsum += w[i];
    }

    double mu_new = 0.0;
    for (std::size_t i = 0; i < n; ++i) mu_new += w[i] * x[i];
    mu_new /= wsum;

    double s2_new = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = x[i] - mu_new;
      s2_new += w[i] * d * d;
    }
    s2_new *= (1.0 + cfg.gamma) / wsum;
    if (!(s2_new > 0.0))
      fail(ErrorCode::degenerate, "gamma_univariate_fit: scale collapsed to zero");

    const double dmu = std::fabs(mu_new - fit.mu);
    const double ds2 = std::fabs(s2_new - fit.sigma2);
    const double s2_guard = std::max(s2_new, 1e-12);
    fit.mu = mu_new;
    fit.sigma2 = s2_new;
    fit.iterations = it;

#ifndef NDEBUG
    {
      const double obj_now =
          gamma_univariate_objective(x, fit.mu, fit.sigma2, cfg.gamma);
      assert(obj_now <= obj_prev + 1e-10 * (1.0 + std::fabs(obj_prev)));
      obj_prev = obj_now;
    }
#endif
    if (objective_trace)
      objective_trace->push_back(
          gamma_univariate_objective(x, fit.mu, fit.sigma2, cfg.gamma));

    if (std::max(dmu / std::sqrt(s2_guard), ds2 / s2_guard) < cfg.tol) {
      fit.converged = true;
      break;
    }
  }

  const double obj_final = gamma_univariate_objective(x, fit.mu, fit.sigma2, cfg.gamma);
  if (obj_final > obj_init + 1e-10 * (1.0 + std::fabs(obj_init)))
    fail(ErrorCode::internal, "gamma_univariate_fit: objective rose above its start value");
  return fit;
}

double qn_scale(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) fail(ErrorCode::invalid_argument, "qn_scale needs n >= 2");
  std::vector<double> gaps;
  gaps.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) gaps.push_back(std::fabs(x[i] - x[j]));
  const std::size_t h = n / 2 + 1;
  const std::size_t k = h * (h - 1) / 2;  // 1-based order statistic
  std::nth_element(gaps.begin(), gaps.begin() + (k - 1), gaps.end());
  return kQnConsistency * gaps[k - 1];
}

}  // namespace robggm
