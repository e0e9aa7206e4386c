#include "core/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "core/covmat.hpp"
#include "core/csvio.hpp"
#include "core/errors.hpp"
#include "core/graphest.hpp"
#include "core/plots.hpp"
#include "core/select.hpp"

namespace robggm {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct ReplicateOutput {
  std::vector<MetricsRecord> records;
  std::map<std::string, std::vector<RocPoint>> roc_points;
  std::map<std::string, double> selected_lambda;
  CovEstimate first_sigma_hat;          // replicate 0, first estimator
  Eigen::MatrixXd first_omega_hat;      // may stay empty
  EdgeSet first_edges;
};

// Shared per-estimator grid for ROC mode, fixed from replicate 0 so every
// replicate is scored on identical lambdas (vertical averaging needs that).
struct SharedGrids {
  std::map<std::string, LambdaGrid> by_estimator;
  std::once_flag ready;
};

AssembleConfig assemble_config_for(const ExperimentConfig& cfg) {
  AssembleConfig ac;
  ac.univariate.gamma = 0.3;
  ac.pairwise.gamma = 0.3;
  (void)cfg;
  return ac;
}

ReplicateOutput run_replicate(const ExperimentConfig& cfg, const PrecisionModel& model,
                              int replicate, SharedGrids& grids) {
  const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(replicate);
  const DataMatrix clean = sample_clean(model, cfg.n, seed);
  ContaminationSpec spec;
  spec.eps = cfg.eps;
  spec.symmetric = cfg.symmetric_contamination;
  spec.contam_mean = cfg.contam_mean;
  spec.contam_sd = cfg.contam_sd;
  const DataMatrix data = contaminate(clean, spec, seed);

  ReplicateOutput out;
  const AssembleConfig ac = assemble_config_for(cfg);

  bool first_estimator = true;
  for (const EstimatorSpec& est : cfg.estimators) {
    const std::string tag = est.tag();
    const CovEstimate sigma_hat = assemble_cov(data, est, ac);
    const CovEstimate sigma_psd = psd_project(sigma_hat, 0.0);
    const double supnorm = (sigma_hat.matrix - model.sigma).cwiseAbs().maxCoeff();

    if (replicate == 0 && first_estimator) out.first_sigma_hat = sigma_hat;

    auto make_record = [&](double lambda, double mse, const EdgeSet& edges) {
      MetricsRecord rec;
      rec.replicate = replicate;
      rec.seed = seed;
      rec.estimator = tag;
      rec.lambda = lambda;
      rec.mse = mse;
      const EdgeComparison cmp = compare_edges(edges, model.edges);
      rec.tpr = cmp.tpr;
      rec.fpr = cmp.fpr;
      rec.supnorm = supnorm;
      return rec;
    };

    switch (cfg.selection) {
      case SelectionMode::fixed_grid_roc: {
        std::call_once(grids.ready, [&] {
          // replicate 0 reaches here first (see dispatch below); later
          // replicates reuse these grids verbatim.
          for (const EstimatorSpec& e : cfg.estimators) {
            const CovEstimate s = psd_project(assemble_cov(data, e, ac), 0.0);
            grids.by_estimator[e.tag()] =
                lambda_grid(s, cfg.lambda_count, cfg.lambda_ratio);
          }
        });
        const LambdaGrid& grid = grids.by_estimator.at(tag);
        GlassoState warm;
        Eigen::MatrixXd warm_b = Eigen::MatrixXd::Zero(cfg.p, cfg.p - 1);
        for (double lambda : grid.values) {
          EdgeSet edges;
          double mse = kNan;
          if (cfg.graph_method == GraphMethod::glasso) {
            const PrecisionEstimate fit = glasso(sigma_psd, lambda, cfg.glasso_tol, &warm);
            edges = edges_from_precision(fit, cfg.zero_tol);
            mse = matrix_errors(fit.omega, model.omega, sigma_hat.matrix, model.sigma).mse;
          } else {
            warm_b = nodewise_lasso(sigma_psd, lambda, cfg.glasso_tol, &warm_b);
            edges = edges_from_nodewise(warm_b, cfg.edge_rule, cfg.zero_tol);
          }
          out.records.push_back(make_record(lambda, mse, edges));
          out.roc_points[tag].push_back(
              {lambda, out.records.back().fpr, out.records.back().tpr});
        }
        break;
      }
      case SelectionMode::cv2: {
        const LambdaGrid grid = lambda_grid(sigma_psd, cfg.lambda_count, cfg.lambda_ratio);
        Cv2Config sc;
        sc.glasso_tol = cfg.glasso_tol;
        sc.symmetric = cfg.cv_symmetric;
        sc.assemble = ac;
        const SelectionResult sel = cv2_select(data, est, grid, seed, sc);
        const PrecisionEstimate fit = glasso(sigma_psd, sel.lambda, cfg.glasso_tol);
        const EdgeSet edges = edges_from_precision(fit, cfg.zero_tol);
        const double mse =
            matrix_errors(fit.omega, model.omega, sigma_hat.matrix, model.sigma).mse;
        out.records.push_back(make_record(sel.lambda, mse, edges));
        out.selected_lambda[tag] = sel.lambda;
        if (replicate == 0 && first_estimator) {
          out.first_omega_hat = fit.omega;
          out.first_edges = edges;
        }
        break;
      }
      case SelectionMode::stars: {
        const LambdaGrid grid = lambda_grid(sigma_psd, cfg.lambda_count, cfg.lambda_ratio);
        StarsConfig sc;
        sc.subsamples = cfg.stars_subsamples;
        sc.cut = cfg.stars_cut;
        sc.nodewise_tol = cfg.glasso_tol;
        sc.zero_tol = cfg.zero_tol;
        sc.assemble = ac;
        const SelectionResult sel = stars_select(data, est, grid, seed, sc);
        const Eigen::MatrixXd B = nodewise_lasso(sigma_psd, sel.lambda, cfg.glasso_tol);
        const EdgeSet edges = edges_from_nodewise(B, cfg.edge_rule, cfg.zero_tol);
        out.records.push_back(make_record(sel.lambda, kNan, edges));
        out.selected_lambda[tag] = sel.lambda;
        if (replicate == 0 && first_estimator) out.first_edges = edges;
        break;
      }
    }
    first_estimator = false;
  }
  return out;
}

void sort_records(std::vector<MetricsRecord>& records) {
  std::sort(records.begin(), records.end(),
            [](const MetricsRecord& a, const MetricsRecord& b) {
              if (a.replicate != b.replicate) return a.replicate < b.replicate;
              if (a.estimator != b.estimator) return a.estimator < b.estimator;
              return a.lambda > b.lambda;
            });
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<MetricsRecord>& records) {
  std::map<std::string, std::vector<const MetricsRecord*>> groups;
  for (const auto& r : records) groups[r.estimator].push_back(&r);

  std::vector<SummaryRow> rows;
  for (const auto& [tag, recs] : groups) {
    SummaryRow row;
    row.estimator = tag;
    row.rows = static_cast<int>(recs.size());
    auto stats = [&](auto field, double& mean, double& sd) {
      double m = 0.0;
      for (const MetricsRecord* r : recs) m += field(*r);
      m /= static_cast<double>(recs.size());
      double ss = 0.0;
      for (const MetricsRecord* r : recs) {
        const double d = field(*r) - m;
        ss += d * d;
      }
      mean = m;
      sd = recs.size() > 1 ? std::sqrt(ss / static_cast<double>(recs.size() - 1)) : 0.0;
    };
    stats([](const MetricsRecord& r) { return r.mse; }, row.mse_mean, row.mse_sd);
    stats([](const MetricsRecord& r) { return r.tpr; }, row.tpr_mean, row.tpr_sd);
    stats([](const MetricsRecord& r) { return r.fpr; }, row.fpr_mean, row.fpr_sd);
    stats([](const MetricsRecord& r) { return r.supnorm; }, row.supnorm_mean,
          row.supnorm_sd);
    rows.push_back(row);
  }
  return rows;
}

void write_metrics_csv(const std::vector<MetricsRecord>& records, const std::string& path) {
  std::ostringstream out;
  out << "replicate,seed,estimator,lambda,mse,tpr,fpr,supnorm\n";
  for (const auto& r : records) {
    out << r.replicate << ',' << r.seed << ',' << r.estimator << ','
        << format_double(r.lambda) << ',' << format_double(r.mse) << ','
        << format_double(r.tpr) << ',' << format_double(r.fpr) << ','
        << format_double(r.supnorm) << '\n';
  }
  write_text_file(path, out.str());
}

std::vector<MetricsRecord> read_metrics_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + path + "'");
  std::vector<MetricsRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (line_no == 1) continue;  // header
    std::vector<std::string> f;
    std::size_t start = 0;
    for (;;) {
      const std::size_t c = line.find(',', start);
      f.push_back(line.substr(start, c == std::string::npos ? c : c - start));
      if (c == std::string::npos) break;
      start = c + 1;
    }
    if (f.size() != 8)
      fail(ErrorCode::parse, path + ": bad metrics row at line " + std::to_string(line_no));
    MetricsRecord r;
    r.replicate = std::atoi(f[0].c_str());
    r.seed = std::strtoull(f[1].c_str(), nullptr, 10);
    r.estimator = f[2];
    r.lambda = std::strtod(f[3].c_str(), nullptr);
    r.mse = std::strtod(f[4].c_str(), nullptr);
    r.tpr = std::strtod(f[5].c_str(), nullptr);
    r.fpr = std::strtod(f[6].c_str(), nullptr);
    r.supnorm = std::strtod(f[7].c_str(), nullptr);
    records.push_back(std::move(r));
  }
  return records;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
  std::ostringstream out;
  out << "estimator,rows,mse_mean,mse_sd,tpr_mean,tpr_sd,fpr_mean,fpr_sd,"
         "supnorm_mean,supnorm_sd\n";
  for (const auto& r : rows) {
    out << r.estimator << ',' << r.rows << ',' << format_double(r.mse_mean) << ','
        << format_double(r.mse_sd) << ',' << format_double(r.tpr_mean) << ','
        << format_double(r.tpr_sd) << ',' << format_double(r.fpr_mean) << ','
        << format_double(r.fpr_sd) << ',' << format_double(r.supnorm_mean) << ','
        << format_double(r.supnorm_sd) << '\n';
  }
  write_text_file(path, out.str());
}

void write_roc_csv(const std::map<std::string, RocCurve>& curves, const std::string& path) {
  std::ostringstream out;
  out << "estimator,lambda,fpr,tpr,auc\n";
  for (const auto& [tag, curve] : curves) {
    for (const auto& pt : curve.points) {
      out << tag << ',' << format_double(pt.lambda) << ',' << format_double(pt.fpr) << ','
          << format_double(pt.tpr) << ',' << format_double(curve.auc) << '\n';
    }
  }
  write_text_file(path, out.str());
}

std::map<std::string, RocCurve> read_roc_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + path + "'");
  std::map<std::string, RocCurve> curves;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (;;) {
      const std::size_t c = line.find(',', start);
      f.push_back(line.substr(start, c == std::string::npos ? c : c - start));
      if (c == std::string::npos) break;
      start = c + 1;
    }
    if (f.size() != 5)
      fail(ErrorCode::parse, path + ": bad roc row at line " + std::to_string(line_no));
    RocCurve& curve = curves[f[0]];
    curve.points.push_back({std::strtod(f[1].c_str(), nullptr),
                            std::strtod(f[2].c_str(), nullptr),
                            std::strtod(f[3].c_str(), nullptr)});
    curve.auc = std::strtod(f[4].c_str(), nullptr);
  }
  if (curves.empty()) fail(ErrorCode::parse, path + ": no roc rows");
  return curves;
}

RunResult run_campaign(const ExperimentConfig& cfg) {
  validate_config(cfg);
  RunResult result;
  result.model = generate_graph(cfg.graph, cfg.p, cfg.seed);

  std::vector<ReplicateOutput> outputs(static_cast<std::size_t>(cfg.replicates));
  SharedGrids grids;

  // Replicate 0 runs first on its own so the ROC grids are fixed before any
  // parallel replicate needs them.
  outputs[0] = run_replicate(cfg, result.model, 0, grids);

  const int workers = std::min(cfg.threads, std::max(1, cfg.replicates - 1));
  if (cfg.replicates > 1) {
    std::atomic<int> next{1};
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&] {
      for (;;) {
        const int r = next.fetch_add(1);
        if (r >= cfg.replicates) return;
        try {
          outputs[static_cast<std::size_t>(r)] = run_replicate(cfg, result.model, r, grids);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    };
    if (workers <= 1) {
      work();
    } else {
      pool.reserve(static_cast<std::size_t>(workers));
      for (int t = 0; t < workers; ++t) pool.emplace_back(work);
      for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
  }

  for (auto& rep : outputs)
    result.records.insert(result.records.end(), rep.records.begin(), rep.records.end());
  sort_records(result.records);
  result.summary = summarize(result.records);

  if (cfg.selection == SelectionMode::fixed_grid_roc) {
    for (const EstimatorSpec& est : cfg.estimators) {
      const std::string tag = est.tag();
      std::vector<std::vector<RocPoint>> curves;
      curves.reserve(outputs.size());
      for (const auto& rep : outputs) curves.push_back(rep.roc_points.at(tag));
      result.roc[tag] = roc_curve(curves);
    }
  } else {
    for (const auto& rep : outputs)
      for (const auto& [tag, lambda] : rep.selected_lambda)
        result.selected_lambdas[tag].push_back(lambda);
  }
  return result;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) fail(ErrorCode::io, "cannot create output directory '" + cfg.out_dir + "'");
  const auto path = [&](const char* name) { return (fs::path(cfg.out_dir) / name).string(); };

  RunResult result;
  try {
    result = run_campaign(cfg);
  } catch (const std::exception& e) {
    // Flag whatever partial output exists so downstream consumers can tell a
    // finished campaign from a broken one.
    std::ofstream metrics(path("metrics.csv"), std::ios::binary | std::ios::app);
    metrics << "#failed: " << e.what() << "\n";
    throw;
  }

  write_metrics_csv(result.records, path("metrics.csv"));
  write_summary_csv(result.summary, path("summary.csv"));
  write_matrix_csv(result.model.sigma, path("sigma.csv"));
  write_matrix_csv(result.model.omega, path("omega.csv"));
  write_edges(result.model.edges, path("edges_truth.txt"));
  if (!result.roc.empty()) write_roc_csv(result.roc, path("roc.csv"));

  // Representative estimate files from replicate 0 / first estimator.
  const ExperimentConfig& c = cfg;
  {
    const std::uint64_t seed0 = c.seed;
    const DataMatrix clean = sample_clean(result.model, c.n, seed0);
    ContaminationSpec spec;
    spec.eps = c.eps;
    spec.symmetric = c.symmetric_contamination;
    spec.contam_mean = c.contam_mean;
    spec.contam_sd = c.contam_sd;
    const DataMatrix data = contaminate(clean, spec, seed0);
    const CovEstimate sigma_hat = assemble_cov(data, c.estimators.front());
    write_matrix_csv(sigma_hat.matrix, path("sigma_hat.csv"));
    const CovEstimate sigma_psd = psd_project(sigma_hat, 0.0);
    double lambda = 0.0;
    for (const auto& rec : result.records) {
      if (rec.replicate == 0 && rec.estimator == c.estimators.front().tag()) {
        lambda = rec.lambda;  // records are lambda-descending; take the first
        break;
      }
    }
    if (c.graph_method == GraphMethod::glasso) {
      const PrecisionEstimate fit = glasso(sigma_psd, lambda, c.glasso_tol);
      write_matrix_csv(fit.omega, path("omega_hat.csv"));
      write_edges(edges_from_precision(fit, c.zero_tol), path("edges.txt"));
    } else {
      const Eigen::MatrixXd B = nodewise_lasso(sigma_psd, lambda, c.glasso_tol);
      write_edges(edges_from_nodewise(B, c.edge_rule, c.zero_tol), path("edges.txt"));
    }
  }

  emit_plots(cfg.out_dir);
  return result;
}

double lambda_for_target_edges(const CovEstimate& S, int target_edges, double tol,
                               double zero_tol) {
  const int p = static_cast<int>(S.matrix.rows());
  const long long max_edges = static_cast<long long>(p) * (p - 1) / 2;
  if (target_edges < 0 || target_edges > max_edges)
    fail(ErrorCode::invalid_argument, "target edge count outside [0, p(p-1)/2]");

  double hi = 0.0;  // lambda_max: zero edges
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      if (i != j) hi = std::max(hi, std::fabs(S.matrix(i, j)));
  if (hi == 0.0) fail(ErrorCode::degenerate, "target edges: diagonal covariance");
  hi *= 1.0000001;
  double lo = hi * 1e-6;

  auto edge_count = [&](double lambda) {
    const PrecisionEstimate fit = glasso(S, lambda, tol);
    return static_cast<long long>(edges_from_precision(fit, zero_tol).pairs.size());
  };

  if (edge_count(hi) >= target_edges) return hi;
  long long at_lo = edge_count(lo);
  if (at_lo <= target_edges) return lo;

  for (int it = 0; it < 60; ++it) {
    const double mid = std::sqrt(lo * hi);  // bisect on the log scale
    const long long c = edge_count(mid);
    if (c == target_edges) return mid;
    if (c > target_edges) lo = mid;
    else hi = mid;
    if (hi / lo < 1.0 + 1e-9) break;
  }
  return std::sqrt(lo * hi);
}

}  // namespace robggm
