#pragma once

#include <map>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/evalmetrics.hpp"
#include "core/types.hpp"

namespace robggm {

struct SummaryRow {
  std::string estimator;
  int rows = 0;
  double mse_mean = 0.0, mse_sd = 0.0;
  double tpr_mean = 0.0, tpr_sd = 0.0;
  double fpr_mean = 0.0, fpr_sd = 0.0;
  double supnorm_mean = 0.0, supnorm_sd = 0.0;
};

struct RunResult {
  PrecisionModel model;
  std::vector<MetricsRecord> records;                 // sorted: replicate, tag, lambda desc
  std::vector<SummaryRow> summary;                    // sorted by tag
  std::map<std::string, RocCurve> roc;                // only in fixed-grid-roc mode
  std::map<std::string, std::vector<double>> selected_lambdas;  // per tag, by replicate
};

// Full campaign: one truth model per (config, seed), fresh data per
// replicate (replicate r draws with seed cfg.seed + r), every estimator on
// every replicate, metrics gathered deterministically. Writes metrics.csv,
// summary.csv, truth files and representative estimate files into
// cfg.out_dir (plus roc.csv in fixed-grid-roc mode), then the SVG plots.
// If a replicate fails, a "#failed: ..." sentinel row is appended to
// whatever part of metrics.csv exists and the error is rethrown.
RunResult run_experiment(const ExperimentConfig& cfg);

// In-memory variant used by tests and the selection/ROC machinery; no files.
RunResult run_campaign(const ExperimentConfig& cfg);

void write_metrics_csv(const std::vector<MetricsRecord>& records, const std::string& path);
std::vector<MetricsRecord> read_metrics_csv(const std::string& path);

std::vector<SummaryRow> summarize(const std::vector<MetricsRecord>& records);
void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path);

void write_roc_csv(const std::map<std::string, RocCurve>& curves, const std::string& path);
std::map<std::string, RocCurve> read_roc_csv(const std::string& path);

// Bisection on lambda until the glasso edge count hits (or brackets) the
// target; returns the best lambda found.
double lambda_for_target_edges(const CovEstimate& S, int target_edges, double tol,
                               double zero_tol);

}  // namespace robggm
