#include "core/datagen.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace robggm {

namespace {

constexpr double kEdgeWeight = 0.3;
constexpr double kDiagonalMargin = 0.2;
constexpr double kSupportZeroTol = 1e-10;
constexpr int kHubGroupSize = 20;

Eigen::MatrixXd adjacency(GraphKind kind, int p, std::uint64_t seed) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, p);
  switch (kind) {
    case GraphKind::chain:
      for (int i = 0; i + 1 < p; ++i) A(i, i + 1) = A(i + 1, i) = 1.0;
      break;
    case GraphKind::hub: {
      if (p % kHubGroupSize != 0)
        fail(ErrorCode::invalid_argument,
             "hub graph requires p divisible by " + std::to_string(kHubGroupSize));
      for (int g = 0; g < p; g += kHubGroupSize)
        for (int i = g + 1; i < g + kHubGroupSize; ++i) A(g, i) = A(i, g) = 1.0;
      break;
    }
    case GraphKind::scale_free: {
      // Preferential-attachment tree: node k >= 2 attaches to one previous
      // node drawn with probability proportional to its current degree.
      if (p < 2) fail(ErrorCode::invalid_argument, "scale_free graph requires p >= 2");
      Rng rng = Rng::stream("datagen/scale_free", seed);
      std::vector<int> degree(p, 0);
      A(0, 1) = A(1, 0) = 1.0;
      degree[0] = degree[1] = 1;
      int total_degree = 2;
      for (int k = 2; k < p; ++k) {
        std::uint64_t pick = rng.uniform_below(static_cast<std::uint64_t>(total_degree));
        int target = 0;
        for (int v = 0; v < k; ++v) {
          if (pick < static_cast<std::uint64_t>(degree[v])) {
            target = v;
            break;
          }
          pick -= static_cast<std::uint64_t>(degree[v]);
        }
        A(k, target) = A(target, k) = 1.0;
        ++degree[k];
        ++degree[target];
        total_degree += 2;
      }
      break;
    }
    case GraphKind::random_graph: {
      if (p < 2) fail(ErrorCode::invalid_argument, "random graph requires p >= 2");
      Rng rng = Rng::stream("datagen/random", seed);
      const double prob = 3.0 / static_cast<double>(p - 1);
      for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
          if (rng.bernoulli(std::min(prob, 1.0))) A(i, j) = A(j, i) = 1.0;
      break;
    }
  }
  return A;
}

}  // namespace

GraphKind parse_graph_kind(const std::string& name) {
  if (name == "chain") return GraphKind::chain;
  if (name == "hub") return GraphKind::hub;
  if (name == "scale_free") return GraphKind::scale_free;
  if (name == "random") return GraphKind::random_graph;
  fail(ErrorCode::parse, "unknown graph kind '" + name + "'");
}

std::string graph_kind_name(GraphKind kind) {
  switch (kind) {
    case GraphKind::chain: return "chain";
    case GraphKind::hub: return "hub";
    case GraphKind::scale_free: return "scale_free";
    case GraphKind::random_graph: return "random";
  }
  fail(ErrorCode::internal, "graph_kind_name: unknown kind");
}

PrecisionModel generate_graph(GraphKind kind, int p, std::uint64_t seed) {
  if (p < 2) fail(ErrorCode::invalid_argument, "generate_graph: need p >= 2");
  const Eigen::MatrixXd B = kEdgeWeight * adjacency(kind, p, seed);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(B, Eigen::EigenvaluesOnly);
  const double shift = std::fabs(eig.eigenvalues().minCoeff()) + kDiagonalMargin;
  Eigen::MatrixXd omega_raw = B;
  omega_raw.diagonal().array() += shift;

  const Eigen::MatrixXd sigma_raw = omega_raw.llt().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::VectorXd d = sigma_raw.diagonal().cwiseSqrt().cwiseInverse();

  PrecisionModel model;
  model.p = p;
  model.sigma = d.asDiagonal() * sigma_raw * d.asDiagonal();
  model.sigma = 0.5 * (model.sigma + model.sigma.transpose());
  model.omega = model.sigma.llt().solve(Eigen::MatrixXd::Identity(p, p));
  model.omega = 0.5 * (model.omega + model.omega.transpose());
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      if (i != j && std::fabs(model.omega(i, j)) < kSupportZeroTol) model.omega(i, j) = 0.0;

  model.edges.p = p;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (model.omega(i, j) != 0.0) model.edges.add(i + 1, j + 1);
  model.edges.sort_and_dedup();
  return model;
}

DataMatrix sample_clean(const PrecisionModel& model, int n, std::uint64_t seed) {
  if (n < 1) fail(ErrorCode::invalid_argument, "sample_clean: need n >= 1");
  Eigen::LLT<Eigen::MatrixXd> llt(model.sigma);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::degenerate, "sample_clean: sigma is not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();

  Rng rng = Rng::stream("datagen/clean", seed);
  DataMatrix data;
  data.values.resize(n, model.p);
  Eigen::VectorXd z(model.p);
  for (int r = 0; r < n; ++r) {
    for (int j = 0; j < model.p; ++j) z(j) = rng.normal();
    data.values.row(r) = (L * z).transpose();
  }
  return data;
}

DataMatrix contaminate(const DataMatrix& clean, const ContaminationSpec& spec,
                       std::uint64_t seed) {
  if (!(spec.eps >= 0.0 && spec.eps <= 1.0))
    fail(ErrorCode::invalid_argument, "contaminate: eps must lie in [0,1]");
  if (!(spec.contam_sd >= 0.0))
    fail(ErrorCode::invalid_argument, "contaminate: contam_sd must be >= 0");

  Rng rng = Rng::stream("datagen/contaminate", seed);
  DataMatrix out = clean;
  for (int r = 0; r < out.values.rows(); ++r) {
    for (int j = 0; j < out.values.cols(); ++j) {
      if (!rng.bernoulli(spec.eps)) continue;
      double mean = spec.contam_mean;
      if (spec.symmetric && rng.bernoulli(0.5)) mean = -mean;
      out.values(r, j) = rng.normal(mean, spec.contam_sd);
    }
  }
  return out;
}

}  // namespace robggm
