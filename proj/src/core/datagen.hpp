#pragma once

#include <cstdint>
#include <string>

#include "core/types.hpp"

namespace robggm {

enum class GraphKind { chain, hub, scale_free, random_graph };

GraphKind parse_graph_kind(const std::string& name);
std::string graph_kind_name(GraphKind kind);

// Builds the ground-truth model for a topology:
//   adjacency A -> Omega_raw = 0.3 A + (|min eigenvalue of 0.3 A| + 0.2) I,
//   Sigma = inverse of Omega_raw rescaled to a correlation matrix,
//   Omega = Sigma^-1 with entries below 1e-10 zeroed (restores the exact
//   support), edges = nonzero off-diagonal support.
// chain: path 1-2-...-p. hub: consecutive groups of 20, first node of each
// group connected to the other 19 (p must be a multiple of 20). scale_free:
// preferential-attachment tree (seeded). random: each pair independently an
// edge with probability 3/(p-1) (seeded).
PrecisionModel generate_graph(GraphKind kind, int p, std::uint64_t seed);

// n rows of N(0, Sigma) through the Cholesky factor of Sigma, seeded.
DataMatrix sample_clean(const PrecisionModel& model, int n, std::uint64_t seed);

struct ContaminationSpec {
  double eps = 0.0;            // per-cell replacement probability
  bool symmetric = false;      // false: N(mean, sd^2); true: +/-mean with equal odds
  double contam_mean = 10.0;
  double contam_sd = 1.0;
};

// Independent per-cell replacement (row-major scan): each cell is replaced
// with probability eps by a draw from the contamination distribution.
DataMatrix contaminate(const DataMatrix& clean, const ContaminationSpec& spec,
                       std::uint64_t seed);

}  // namespace robggm
