#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "core/errors.hpp"
#include "core/evalmetrics.hpp"
#include "core/types.hpp"
#include "doctest.h"

using robggm::compare_edges;
using robggm::EdgeComparison;
using robggm::EdgeSet;
using robggm::matrix_errors;
using robggm::MatrixErrors;
using robggm::roc_auc;
using robggm::roc_curve;
using robggm::RocCurve;
using robggm::RocPoint;

namespace {

EdgeSet edges(int p, std::vector<std::pair<int, int>> pairs) {
  EdgeSet e;
  e.p = p;
  for (const auto& [i, j] : pairs) e.add(i, j);
  e.sort_and_dedup();
  return e;
}

}  // namespace

TEST_SUITE_BEGIN("evalmetrics");

TEST_CASE("exact recovery scores one and zero") {
  const EdgeSet truth = edges(5, {{1, 2}, {2, 3}, {3, 4}});
  const EdgeComparison c = compare_edges(truth, truth);
  CHECK(c.tpr == 1.0);
  CHECK(c.fpr == 0.0);
}

TEST_CASE("empty estimate scores zero and zero") {
  const EdgeSet truth = edges(5, {{1, 2}, {2, 3}});
  const EdgeComparison c = compare_edges(edges(5, {}), truth);
  CHECK(c.tpr == 0.0);
  CHECK(c.fpr == 0.0);
}

TEST_CASE("rates count over unordered pairs") {
  // p = 4: six pairs, one true edge, five true non-edges
  const EdgeSet truth = edges(4, {{1, 2}});
  const EdgeSet est = edges(4, {{1, 2}, {3, 4}});
  const EdgeComparison c = compare_edges(est, truth);
  CHECK(c.tpr == 1.0);
  CHECK(c.fpr == doctest::Approx(0.2).epsilon(1e-15));

  const EdgeComparison miss = compare_edges(edges(4, {{3, 4}, {2, 4}}), truth);
  CHECK(miss.tpr == 0.0);
  CHECK(miss.fpr == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("degenerate truths are rejected") {
  const EdgeSet none = edges(4, {});
  const EdgeSet full = edges(3, {{1, 2}, {1, 3}, {2, 3}});
  const EdgeSet some = edges(4, {{1, 2}});
  CHECK_THROWS_AS((void)compare_edges(some, none), robggm::Error);
  CHECK_THROWS_AS((void)compare_edges(edges(3, {{1, 2}}), full), robggm::Error);
  const EdgeSet other_p = edges(5, {{1, 2}});
  CHECK_THROWS_AS((void)compare_edges(other_p, some), robggm::Error);
}

TEST_CASE("identical matrices give zero errors") {
  Eigen::MatrixXd a(3, 3);
  a << 2.0, 0.5, 0.0, 0.5, 1.5, -0.3, 0.0, -0.3, 1.0;
  const MatrixErrors e = matrix_errors(a, a, a, a);
  CHECK(e.mse == 0.0);
  CHECK(e.supnorm == 0.0);
}

TEST_CASE("a single perturbed entry drives both errors") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  Eigen::MatrixXd b = a;
  b(0, 1) = 0.3;
  const MatrixErrors e = matrix_errors(b, a, b, a);
  CHECK(e.supnorm == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(e.mse == doctest::Approx(0.1).epsilon(1e-15));  // |B - A|_F = 0.3, p = 3
}

TEST_CASE("frobenius error is normalized by dimension") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd b = a;
  b(0, 1) = 1.0;
  b(1, 0) = 1.0;
  const MatrixErrors e = matrix_errors(b, a, a, a);
  CHECK(e.mse == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));
  CHECK(e.supnorm == 0.0);  // supnorm is computed from the covariance pair
}

TEST_CASE("matrix shape mismatches are rejected") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS((void)matrix_errors(a, b, a, a), robggm::Error);
  CHECK_THROWS_AS((void)matrix_errors(a, a, a, b), robggm::Error);
}

TEST_CASE("area under a single point is the anchored trapezoid") {
  CHECK(roc_auc({{0.5, 0.2, 0.8}}) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(roc_auc({{0.5, 0.0, 1.0}}) == doctest::Approx(1.0).epsilon(1e-15));
  // points on the diagonal integrate to one half
  CHECK(roc_auc({{1.0, 0.25, 0.25}, {0.5, 0.75, 0.75}}) ==
        doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("area handles unsorted points") {
  const double a = roc_auc({{0.2, 0.6, 0.9}, {0.8, 0.1, 0.4}});
  const double b = roc_auc({{0.8, 0.1, 0.4}, {0.2, 0.6, 0.9}});
  CHECK(a == doctest::Approx(b).epsilon(1e-15));
  // trapezoid through (0,0), (0.1,0.4), (0.6,0.9), (1,1)
  const double expect = 0.5 * 0.1 * 0.4 + 0.5 * (0.4 + 0.9) * 0.5 + 0.5 * (0.9 + 1.0) * 0.4;
  CHECK(a == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("replicate curves average vertically") {
  std::vector<std::vector<RocPoint>> reps;
  reps.push_back({{1.0, 0.0, 1.0}, {0.5, 0.2, 1.0}});
  reps.push_back({{1.0, 0.0, 0.0}, {0.5, 0.4, 0.6}});
  const RocCurve curve = roc_curve(reps);
  REQUIRE(curve.points.size() == 2);
  CHECK(curve.points[0].lambda == 1.0);
  CHECK(curve.points[0].fpr == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(curve.points[0].tpr == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(curve.points[1].fpr == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(curve.points[1].tpr == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(curve.auc == doctest::Approx(roc_auc(curve.points)).epsilon(1e-15));
}

TEST_CASE("mismatched replicate grids are rejected") {
  std::vector<std::vector<RocPoint>> reps;
  reps.push_back({{1.0, 0.0, 1.0}, {0.5, 0.2, 1.0}});
  reps.push_back({{1.0, 0.0, 0.0}});
  CHECK_THROWS_AS((void)roc_curve(reps), robggm::Error);
  reps.pop_back();
  reps.push_back({{0.9, 0.0, 0.0}, {0.5, 0.1, 0.2}});
  CHECK_THROWS_AS((void)roc_curve(reps), robggm::Error);
  CHECK_THROWS_AS((void)roc_curve({}), robggm::Error);
}

TEST_SUITE_END();
