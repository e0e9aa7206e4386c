#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/datagen.hpp"
#include "core/graphest.hpp"
#include "core/types.hpp"

namespace robggm {

enum class GraphMethod { glasso, nodewise };
enum class SelectionMode { cv2, stars, fixed_grid_roc };

struct ExperimentConfig {
  GraphKind graph = GraphKind::chain;
  int p = 50;
  int n = 200;
  double eps = 0.0;
  bool symmetric_contamination = false;  // scenario = sym
  double contam_mean = 10.0;
  double contam_sd = 1.0;
  std::vector<EstimatorSpec> estimators = {EstimatorSpec{}};
  GraphMethod graph_method = GraphMethod::glasso;
  EdgeRule edge_rule = EdgeRule::and_rule;
  SelectionMode selection = SelectionMode::cv2;
  int replicates = 20;
  std::uint64_t seed = 1;
  int lambda_count = 10;
  double lambda_ratio = 0.05;
  int stars_subsamples = 10;
  double stars_cut = 0.2;
  double glasso_tol = 1e-4;
  double zero_tol = 1e-8;
  bool cv_symmetric = false;
  int threads = 1;
  std::string out_dir = "results";
};

// Plain-text "key = value" config; '#' or ';' start comments, [section]
// headers are accepted and ignored (keys are globally unique). The same keys
// work as a flat JSON object.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_json(const std::string& text);

// Dispatches on the first non-space byte ('{' selects JSON).
ExperimentConfig load_config_file(const std::string& path);

// Applies one key=value pair (shared by both parsers and CLI overrides).
void apply_config_key(ExperimentConfig& cfg, const std::string& key,
                      const std::string& value);

// Cross-field checks (estimator list non-empty, selection/graph-method
// pairing, positive sizes). Throws on violation.
void validate_config(const ExperimentConfig& cfg);

std::string selection_name(SelectionMode mode);
std::string graph_method_name(GraphMethod method);

}  // namespace robggm
