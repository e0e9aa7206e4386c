#include "core/paircorr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "core/errors.hpp"
#include "core/normal.hpp"
#include "core/univariate.hpp"

namespace robggm {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_pair(std::span<const double> zj, std::span<const double> zk, std::size_t min_n) {
  if (zj.size() != zk.size())
    fail(ErrorCode::invalid_argument, "paired vectors differ in length");
  if (zj.size() < min_n)
    fail(ErrorCode::invalid_argument, "paired estimate needs more observations");
}

double clamp_corr(double r) { return std::clamp(r, -1.0, 1.0); }

}  // namespace

PairValueGrad gamma_corr_value_grad(std::span<const double> zj, std::span<const double> zk,
                                    double rho, double gamma) {
  check_pair(zj, zk, 2);
  if (!(std::fabs(rho) < 1.0))
    fail(ErrorCode::invalid_argument, "gamma_corr_value_grad: |rho| must be < 1");
  if (!(gamma > 0.0)) fail(ErrorCode::invalid_argument, "gamma must be > 0");

  const std::size_t n = zj.size();
  const double om = 1.0 - rho * rho;
  std::vector<double> a(n), q(n);
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    q[i] = zj[i] * zj[i] + zk[i] * zk[i] - 2.0 * rho * zj[i] * zk[i];
    a[i] = -gamma * q[i] / (2.0 * om);
    m = std::max(m, a[i]);
  }
  double wsum = 0.0, acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = std::exp(a[i] - m);
    wsum += w;
    acc += w * (rho * q[i] / (om * om) - zj[i] * zk[i] / om);
  }
  PairValueGrad out;
  out.value = -(m + std::log(wsum)) / gamma + std::log(om) / (2.0 * (1.0 + gamma));
  out.grad = acc / wsum - rho / ((1.0 + gamma) * om);
  return out;
}

PairCorrFit gamma_corr(std::span<const double> zj, std::span<const double> zk,
                       const PgdConfig& cfg, std::vector<PgdStep>* trace) {
  check_pair(zj, zk, 3);
  if (!(cfg.R > 0.0 && cfg.R < 1.0) || !(cfg.s0 > 0.0) || !(cfg.tol > 0.0) ||
      cfg.max_iter < 1)
    fail(ErrorCode::invalid_argument, "gamma_corr: bad PGD configuration");

  PairCorrFit fit;
  double rho = 0.0;
  double s = cfg.s0;
  PairValueGrad cur = gamma_corr_value_grad(zj, zk, rho, cfg.gamma);

  for (int it = 1; it <= cfg.max_iter; ++it) {
    double s_try = s;
    double cand = 0.0, cand_value = 0.0;
    for (;;) {
      cand = std::clamp(rho - cur.grad / s_try, -cfg.R, cfg.R);
      const double d = cand - rho;
      cand_value = gamma_corr_value_grad(zj, zk, cand, cfg.gamma).value;
      if (cand_value <= cur.value + cur.grad * d + 0.5 * s_try * d * d) break;
      s_try *= 2.0;
      if (!(s_try < 1e300))
        fail(ErrorCode::nonconvergence, "gamma_corr: backtracking step diverged");
    }
    if (trace) trace->push_back({rho, cand, s_try});

    const double delta = std::fabs(cand - rho);
    rho = cand;
    s = s_try;
    fit.iterations = it;
    if (delta < cfg.tol) {
      fit.converged = true;
      break;
    }
    cur = gamma_corr_value_grad(zj, zk, rho, cfg.gamma);
    cur.value = cand_value;  // reuse the value computed during backtracking
  }
  fit.rho = rho;
  return fit;
}

std::vector<double> midranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> ord(n);
  std::iota(ord.begin(), ord.end(), 0);
  std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> rank(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[ord[j + 1]] == x[ord[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;  // average of 1-based ranks
    for (std::size_t k = i; k <= j; ++k) rank[ord[k]] = r;
    i = j + 1;
  }
  return rank;
}

namespace {

double kendall_corr(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  long long concordant = 0, discordant = 0, tied_x = 0, tied_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0) ++tied_x;
      if (dy == 0.0) ++tied_y;
      if (dx == 0.0 || dy == 0.0) continue;
      if ((dx > 0.0) == (dy > 0.0)) ++concordant;
      else ++discordant;
    }
  }
  // tau-b denominator: sqrt((n0 - t_x)(n0 - t_y)) over tied pair counts
  const double n0 = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  const double fx = n0 - static_cast<double>(tied_x);
  const double fy = n0 - static_cast<double>(tied_y);
  if (fx <= 0.0 || fy <= 0.0)
    fail(ErrorCode::degenerate, "rank_corr: constant input column");
  const double tau = static_cast<double>(concordant - discordant) / std::sqrt(fx * fy);
  return std::sin(kPi * tau / 2.0);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = x[i] - mx, b = y[i] - my;
    sxx += a * a;
    syy += b * b;
    sxy += a * b;
  }
  if (sxx == 0.0 || syy == 0.0)
    fail(ErrorCode::degenerate, "rank_corr: constant input column");
  return sxy / std::sqrt(sxx * syy);
}

double spearman_corr(std::span<const double> x, std::span<const double> y) {
  const std::vector<double> rx = midranks(x);
  const std::vector<double> ry = midranks(y);
  const double rs = pearson(rx, ry);
  return 2.0 * std::sin(kPi * rs / 6.0);
}

double gauss_rank_corr(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const std::vector<double> rx = midranks(x);
  const std::vector<double> ry = midranks(y);
  double num = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    num += normal_quantile(rx[i] / (n + 1.0)) * normal_quantile(ry[i] / (n + 1.0));
  double den = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double z = normal_quantile(static_cast<double>(i) / (n + 1.0));
    den += z * z;
  }
  return num / den;
}

}  // namespace

double rank_corr(std::span<const double> x, std::span<const double> y, RankMethod method) {
  check_pair(x, y, 3);
  switch (method) {
    case RankMethod::kendall: return clamp_corr(kendall_corr(x, y));
    case RankMethod::spearman: return clamp_corr(spearman_corr(x, y));
    case RankMethod::gauss_rank: return clamp_corr(gauss_rank_corr(x, y));
  }
  fail(ErrorCode::internal, "rank_corr: unknown method");
}

double gk_pairwise_cov(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, 3);
  const double sx = qn_scale(x);
  const double sy = qn_scale(y);
  if (sx == 0.0 || sy == 0.0)
    fail(ErrorCode::degenerate, "gk_pairwise_cov: zero Qn scale");
  const double a = 1.0 / sx;
  const double b = 1.0 / sy;
  const std::size_t n = x.size();
  std::vector<double> sum(n), diff(n);
  for (std::size_t i = 0; i < n; ++i) {
    sum[i] = a * x[i] + b * y[i];
    diff[i] = a * x[i] - b * y[i];
  }
  const double sp = qn_scale(sum);
  const double sm = qn_scale(diff);
  return (sp * sp - sm * sm) / (4.0 * a * b);
}

}  // namespace robggm
