#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "core/covmat.hpp"
#include "core/errors.hpp"
#include "core/graphest.hpp"
#include "core/rng.hpp"
#include "core/types.hpp"
#include "doctest.h"

using robggm::CovEstimate;
using robggm::EdgeRule;
using robggm::glasso;
using robggm::GlassoState;
using robggm::PrecisionEstimate;

namespace {

CovEstimate wrap_cov(const Eigen::MatrixXd& m) {
  CovEstimate est;
  est.matrix = m;
  return est;
}

// 4x4 test covariance with a mixed-sign, partly weak off-diagonal pattern.
Eigen::MatrixXd s4() {
  Eigen::MatrixXd s(4, 4);
  s << 1.0, 0.45, 0.1, 0.0,
       0.45, 1.2, -0.3, 0.05,
       0.1, -0.3, 0.9, 0.2,
       0.0, 0.05, 0.2, 1.1;
  return s;
}

// Reference solution for s4() at penalty 0.12, computed with an independent
// splitting-method solver run to a 1e-12 certificate and frozen before this
// implementation existed.
Eigen::MatrixXd s4_reference() {
  Eigen::MatrixXd o(4, 4);
  o << 0.96443906198389151, -0.24441263899589655, -0.024221072332827609, 0.0,
       -0.2444126389958966, 0.83819589709713926, 0.14312451833106554, 0.0,
       -0.024221072332827609, 0.14312451833106549, 1.010242764986284, -0.064620355412281172,
       0.0, 0.0, -0.064620355412281172, 0.82390953150245383;
  return o;
}

CovEstimate random_cov(int p, int n, std::uint64_t seed) {
  robggm::Rng rng = robggm::Rng::stream("test/graphest", seed);
  Eigen::MatrixXd x(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) x(i, j) = rng.normal();
  for (int i = 0; i < n; ++i)
    for (int j = 1; j < p; ++j) x(i, j) = 0.5 * x(i, j - 1) + x(i, j);
  const Eigen::VectorXd mean = x.colwise().mean();
  x.rowwise() -= mean.transpose();
  return wrap_cov((x.transpose() * x) / static_cast<double>(n));
}

}  // namespace

TEST_SUITE_BEGIN("graphest");

TEST_CASE("coordinate descent solves a separable program") {
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd c(2);
  c << 1.0, 0.05;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(2);
  const double res = robggm::lasso_cd(q, c, 0.1, 1e-10, 1000, b);
  CHECK(b(0) == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(b(1) == 0.0);
  CHECK(res <= 1e-10);
}

TEST_CASE("per-node program matches the hand solution") {
  Eigen::MatrixXd s(3, 3);
  s << 1.0, 0.5, 0.0,
       0.5, 1.0, 0.0,
       0.0, 0.0, 1.0;
  const Eigen::MatrixXd b = robggm::nodewise_lasso(wrap_cov(s), 0.1, 1e-10);
  REQUIRE(b.rows() == 3);
  REQUIRE(b.cols() == 2);
  // program for variable 1: minimize 0.5 b' S22 b - S12' b + 0.1 |b|_1
  CHECK(b(0, 0) == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(b(0, 1) == 0.0);
}

TEST_CASE("solution matches the frozen reference") {
  const PrecisionEstimate est = glasso(wrap_cov(s4()), 0.12, 1e-6);
  const Eigen::MatrixXd ref = s4_reference();
  CHECK((est.omega - ref).cwiseAbs().maxCoeff() < 1e-4);
  CHECK(est.kkt_residual <= 1e-6);
  CHECK(robggm::glasso_objective(s4(), est.omega, 0.12) ==
        doctest::Approx(4.50297909660042).epsilon(1e-6));

  const robggm::EdgeSet edges = robggm::edges_from_precision(est);
  REQUIRE(edges.pairs.size() == 4);
  CHECK(edges.contains(1, 2));
  CHECK(edges.contains(1, 3));
  CHECK(edges.contains(2, 3));
  CHECK(edges.contains(3, 4));
  CHECK_FALSE(edges.contains(1, 4));
  CHECK_FALSE(edges.contains(2, 4));
}

TEST_CASE("diagonal input has a closed-form solution") {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(4, 4);
  s.diagonal() << 0.5, 1.0, 2.0, 3.0;
  const double lambda = 0.25;
  const PrecisionEstimate est = glasso(wrap_cov(s), lambda, 1e-8);
  for (int j = 0; j < 4; ++j)
    CHECK(est.omega(j, j) == doctest::Approx(1.0 / (s(j, j) + lambda)).epsilon(1e-8));
  CHECK(est.omega.cwiseAbs().sum() ==
        doctest::Approx(est.omega.diagonal().cwiseAbs().sum()).epsilon(1e-12));
}

TEST_CASE("one-dimensional problem") {
  Eigen::MatrixXd s(1, 1);
  s << 2.0;
  const PrecisionEstimate est = glasso(wrap_cov(s), 0.1, 1e-8);
  CHECK(est.omega(0, 0) == doctest::Approx(1.0 / 2.1).epsilon(1e-8));
}

TEST_CASE("certificate holds across a grid on random inputs") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const CovEstimate s = random_cov(8, 60, seed);
    double lmax = 0.0;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        if (i != j) lmax = std::max(lmax, std::fabs(s.matrix(i, j)));
    GlassoState warm;
    for (double f : {1.0, 0.6, 0.3, 0.1, 0.03}) {
      const PrecisionEstimate est = glasso(s, f * lmax, 1e-5, &warm);
      CHECK(est.kkt_residual <= 1e-5);
      CHECK(robggm::glasso_kkt_residual(s.matrix, est.omega, f * lmax) <= 1e-5);
      // positive definiteness of the estimate
      Eigen::LLT<Eigen::MatrixXd> llt(est.omega);
      CHECK(llt.info() == Eigen::Success);
    }
  }
}

TEST_CASE("warm and cold starts agree to tolerance") {
  const CovEstimate s = random_cov(6, 50, 9);
  GlassoState warm;
  (void)glasso(s, 0.4, 1e-7, &warm);
  const PrecisionEstimate warm_fit = glasso(s, 0.1, 1e-7, &warm);
  const PrecisionEstimate cold_fit = glasso(s, 0.1, 1e-7);
  CHECK((warm_fit.omega - cold_fit.omega).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("stronger penalties keep the objective chain consistent") {
  const CovEstimate s = random_cov(5, 40, 4);
  const PrecisionEstimate a = glasso(s, 0.05, 1e-6);
  const PrecisionEstimate b = glasso(s, 0.5, 1e-6);
  // the optimum objective value at lambda is attained at its own solution
  CHECK(robggm::glasso_objective(s.matrix, a.omega, 0.05) <=
        robggm::glasso_objective(s.matrix, b.omega, 0.05) + 1e-8);
  CHECK(robggm::glasso_objective(s.matrix, b.omega, 0.5) <=
        robggm::glasso_objective(s.matrix, a.omega, 0.5) + 1e-8);
}

TEST_CASE("invalid inputs are rejected") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 0.9, 0.2, 1.0;  // not symmetric
  CHECK_THROWS_AS((void)glasso(wrap_cov(bad), 0.1, 1e-6), robggm::Error);
  Eigen::MatrixXd indef(2, 2);
  indef << 1.0, 2.0, 2.0, 1.0;  // eigenvalue -1
  CHECK_THROWS_AS((void)glasso(wrap_cov(indef), 0.1, 1e-6), robggm::Error);
  CHECK_THROWS_AS((void)glasso(wrap_cov(s4()), -0.1, 1e-6), robggm::Error);
  CHECK_THROWS_AS((void)glasso(wrap_cov(s4()), 0.1, 0.0), robggm::Error);
}

TEST_CASE("support extraction respects the zero threshold") {
  PrecisionEstimate est;
  est.omega.resize(3, 3);
  est.omega << 1.0, 1e-9, 0.2,
               1e-9, 1.0, 0.0,
               0.2, 0.0, 1.0;
  const robggm::EdgeSet tight = robggm::edges_from_precision(est, 1e-8);
  CHECK(tight.pairs.size() == 1);
  CHECK(tight.contains(1, 3));
  const robggm::EdgeSet loose = robggm::edges_from_precision(est, 1e-10);
  CHECK(loose.pairs.size() == 2);
}

TEST_CASE("node-wise supports combine by the chosen rule") {
  // B rows: coefficients of each node's program; make the (1,2) support
  // one-sided
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(3, 2);
  b(0, 0) = 0.5;  // program 1 selects variable 2
  // program 2 selects nothing; program 3 selects nothing
  const robggm::EdgeSet both = robggm::edges_from_nodewise(b, EdgeRule::or_rule);
  CHECK(both.pairs.size() == 1);
  CHECK(both.contains(1, 2));
  const robggm::EdgeSet strict = robggm::edges_from_nodewise(b, EdgeRule::and_rule);
  CHECK(strict.pairs.empty());

  b(1, 0) = -0.3;  // program 2 selects variable 1 too
  const robggm::EdgeSet agreed = robggm::edges_from_nodewise(b, EdgeRule::and_rule);
  CHECK(agreed.pairs.size() == 1);
  CHECK(agreed.contains(1, 2));
}

TEST_CASE("node-wise programs satisfy their own certificates") {
  const CovEstimate s = random_cov(7, 50, 12);
  const double lambda = 0.15;
  const Eigen::MatrixXd b = robggm::nodewise_lasso(s, lambda, 1e-7);
  for (int j = 0; j < 7; ++j) {
    // rebuild program j and check its stationarity directly
    Eigen::MatrixXd q(6, 6);
    Eigen::VectorXd c(6);
    int a = 0;
    for (int i = 0; i < 7; ++i) {
      if (i == j) continue;
      int bcol = 0;
      for (int k = 0; k < 7; ++k) {
        if (k == j) continue;
        q(a, bcol) = s.matrix(i, k);
        ++bcol;
      }
      c(a) = s.matrix(j, i);
      ++a;
    }
    const Eigen::VectorXd beta = b.row(j).transpose();
    const Eigen::VectorXd g = q * beta - c;
    for (int i = 0; i < 6; ++i) {
      if (beta(i) != 0.0)
        CHECK(std::fabs(g(i) + lambda * (beta(i) > 0 ? 1.0 : -1.0)) <= 1e-6);
      else
        CHECK(std::fabs(g(i)) <= lambda + 1e-6);
    }
  }
}

TEST_SUITE_END();
