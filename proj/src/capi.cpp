#include "robggm/robggm.h"

#include <exception>
#include <memory>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/covmat.hpp"
#include "core/csvio.hpp"
#include "core/datagen.hpp"
#include "core/errors.hpp"
#include "core/evalmetrics.hpp"
#include "core/experiment.hpp"
#include "core/graphest.hpp"
#include "core/plots.hpp"
#include "core/select.hpp"
#include "core/types.hpp"

struct rggm_matrix {
  robggm::DataMatrix data;
};
struct rggm_model {
  robggm::PrecisionModel model;
};
struct rggm_cov {
  robggm::CovEstimate est;
};
struct rggm_precision {
  robggm::PrecisionEstimate est;
};
struct rggm_edges {
  robggm::EdgeSet edges;
};

namespace {

thread_local std::string g_last_error;

rggm_status map_code(robggm::ErrorCode code) {
  switch (code) {
    case robggm::ErrorCode::invalid_argument: return RGGM_ERR_INVALID_ARGUMENT;
    case robggm::ErrorCode::degenerate: return RGGM_ERR_DEGENERATE;
    case robggm::ErrorCode::nonconvergence: return RGGM_ERR_NONCONVERGENCE;
    case robggm::ErrorCode::parse: return RGGM_ERR_PARSE;
    case robggm::ErrorCode::io: return RGGM_ERR_IO;
    case robggm::ErrorCode::config: return RGGM_ERR_CONFIG;
    case robggm::ErrorCode::internal: return RGGM_ERR_INTERNAL;
  }
  return RGGM_ERR_INTERNAL;
}

template <typename Fn>
rggm_status wrap(Fn&& fn) {
  try {
    fn();
    return RGGM_OK;
  } catch (const robggm::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RGGM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return RGGM_ERR_INTERNAL;
  }
}

rggm_status arg_error(const char* msg) {
  g_last_error = msg;
  return RGGM_ERR_INVALID_ARGUMENT;
}

robggm::LambdaGrid grid_from(const double* grid, int grid_count) {
  if (grid_count < 1) robggm::fail(robggm::ErrorCode::invalid_argument, "empty lambda grid");
  robggm::LambdaGrid g;
  g.values.assign(grid, grid + grid_count);
  for (int i = 0; i < grid_count; ++i) {
    if (!(g.values[static_cast<std::size_t>(i)] > 0.0))
      robggm::fail(robggm::ErrorCode::invalid_argument, "lambda grid values must be positive");
    if (i > 0 && !(g.values[static_cast<std::size_t>(i)] <
                   g.values[static_cast<std::size_t>(i - 1)]))
      robggm::fail(robggm::ErrorCode::invalid_argument,
                   "lambda grid must be strictly decreasing");
  }
  return g;
}

}  // namespace

extern "C" {

const char* rggm_last_error(void) { return g_last_error.c_str(); }

const char* rggm_version(void) { return "0.1.0"; }

/* ---- matrices ---- */

rggm_status rggm_matrix_create(int rows, int cols, const double* data, rggm_matrix** out) {
  if (out == nullptr) return arg_error("out is NULL");
  if (rows < 1 || cols < 1) return arg_error("matrix dimensions must be positive");
  return wrap([&] {
    auto m = std::make_unique<rggm_matrix>();
    if (data == nullptr) {
      m->data.values = Eigen::MatrixXd::Zero(rows, cols);
    } else {
      m->data.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                      Eigen::RowMajor>>(data, rows, cols);
    }
    *out = m.release();
  });
}

rggm_status rggm_matrix_read_csv(const char* path, int has_header, rggm_matrix** out) {
  if (path == nullptr || out == nullptr) return arg_error("path/out is NULL");
  return wrap([&] {
    auto m = std::make_unique<rggm_matrix>();
    m->data = robggm::read_matrix_csv(path, has_header != 0);
    *out = m.release();
  });
}

rggm_status rggm_matrix_write_csv(const rggm_matrix* m, const char* path) {
  if (m == nullptr || path == nullptr) return arg_error("matrix/path is NULL");
  return wrap([&] { robggm::write_matrix_csv(m->data.values, path, m->data.column_names); });
}

int rggm_matrix_rows(const rggm_matrix* m) { return m == nullptr ? 0 : m->data.n(); }

int rggm_matrix_cols(const rggm_matrix* m) { return m == nullptr ? 0 : m->data.p(); }

rggm_status rggm_matrix_copy_data(const rggm_matrix* m, double* buffer) {
  if (m == nullptr || buffer == nullptr) return arg_error("matrix/buffer is NULL");
  return wrap([&] {
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        buffer, m->data.values.rows(), m->data.values.cols()) = m->data.values;
  });
}

void rggm_matrix_free(rggm_matrix* m) { delete m; }

/* ---- models ---- */

rggm_status rggm_model_generate(const char* graph_kind, int p, uint64_t seed,
                                rggm_model** out) {
  if (graph_kind == nullptr || out == nullptr) return arg_error("graph_kind/out is NULL");
  return wrap([&] {
    auto m = std::make_unique<rggm_model>();
    m->model = robggm::generate_graph(robggm::parse_graph_kind(graph_kind), p, seed);
    *out = m.release();
  });
}

rggm_status rggm_model_sigma(const rggm_model* m, rggm_matrix** out) {
  if (m == nullptr || out == nullptr) return arg_error("model/out is NULL");
  return wrap([&] {
    auto mat = std::make_unique<rggm_matrix>();
    mat->data.values = m->model.sigma;
    *out = mat.release();
  });
}

rggm_status rggm_model_omega(const rggm_model* m, rggm_matrix** out) {
  if (m == nullptr || out == nullptr) return arg_error("model/out is NULL");
  return wrap([&] {
    auto mat = std::make_unique<rggm_matrix>();
    mat->data.values = m->model.omega;
    *out = mat.release();
  });
}

rggm_status rggm_model_edges(const rggm_model* m, rggm_edges** out) {
  if (m == nullptr || out == nullptr) return arg_error("model/out is NULL");
  return wrap([&] {
    auto e = std::make_unique<rggm_edges>();
    e->edges = m->model.edges;
    *out = e.release();
  });
}

rggm_status rggm_model_sample(const rggm_model* m, int n, uint64_t seed, double eps,
                              int symmetric, double contam_mean, double contam_sd,
                              rggm_matrix** out) {
  if (m == nullptr || out == nullptr) return arg_error("model/out is NULL");
  return wrap([&] {
    auto mat = std::make_unique<rggm_matrix>();
    const robggm::DataMatrix clean = robggm::sample_clean(m->model, n, seed);
    robggm::ContaminationSpec spec;
    spec.eps = eps;
    spec.symmetric = symmetric != 0;
    spec.contam_mean = contam_mean;
    spec.contam_sd = contam_sd;
    mat->data = robggm::contaminate(clean, spec, seed);
    *out = mat.release();
  });
}

void rggm_model_free(rggm_model* m) { delete m; }

/* ---- covariance ---- */

rggm_status rggm_cov_assemble(const rggm_matrix* data, const char* estimator_tag,
                              rggm_cov** out) {
  if (data == nullptr || estimator_tag == nullptr || out == nullptr)
    return arg_error("data/estimator_tag/out is NULL");
  return wrap([&] {
    auto cov = std::make_unique<rggm_cov>();
    cov->est = robggm::assemble_cov(data->data, robggm::EstimatorSpec::parse(estimator_tag));
    *out = cov.release();
  });
}

rggm_status rggm_cov_project(const rggm_cov* S, double delta, rggm_cov** out) {
  if (S == nullptr || out == nullptr) return arg_error("cov/out is NULL");
  return wrap([&] {
    auto cov = std::make_unique<rggm_cov>();
    cov->est = robggm::psd_project(S->est, delta);
    *out = cov.release();
  });
}

rggm_status rggm_cov_matrix(const rggm_cov* S, rggm_matrix** out) {
  if (S == nullptr || out == nullptr) return arg_error("cov/out is NULL");
  return wrap([&] {
    auto mat = std::make_unique<rggm_matrix>();
    mat->data.values = S->est.matrix;
    *out = mat.release();
  });
}

int rggm_cov_projected(const rggm_cov* S) {
  return (S != nullptr && S->est.projected) ? 1 : 0;
}

double rggm_cov_min_eigenvalue(const rggm_cov* S) {
  return S == nullptr ? 0.0 : S->est.min_eigenvalue;
}

void rggm_cov_free(rggm_cov* S) { delete S; }

/* ---- precision ---- */

rggm_status rggm_glasso(const rggm_cov* S, double lambda, double tol, rggm_precision** out) {
  if (S == nullptr || out == nullptr) return arg_error("cov/out is NULL");
  return wrap([&] {
    auto est = std::make_unique<rggm_precision>();
    est->est = robggm::glasso(S->est, lambda, tol > 0 ? tol : 1e-4);
    *out = est.release();
  });
}

rggm_status rggm_precision_matrix(const rggm_precision* est, rggm_matrix** out) {
  if (est == nullptr || out == nullptr) return arg_error("precision/out is NULL");
  return wrap([&] {
    auto mat = std::make_unique<rggm_matrix>();
    mat->data.values = est->est.omega;
    *out = mat.release();
  });
}

double rggm_precision_objective(const rggm_precision* est) {
  return est == nullptr ? 0.0 : est->est.objective;
}

double rggm_precision_kkt_residual(const rggm_precision* est) {
  return est == nullptr ? 0.0 : est->est.kkt_residual;
}

int rggm_precision_iterations(const rggm_precision* est) {
  return est == nullptr ? 0 : est->est.iterations;
}

rggm_status rggm_precision_edges(const rggm_precision* est, double zero_tol,
                                 rggm_edges** out) {
  if (est == nullptr || out == nullptr) return arg_error("precision/out is NULL");
  return wrap([&] {
    auto e = std::make_unique<rggm_edges>();
    e->edges = robggm::edges_from_precision(est->est, zero_tol > 0 ? zero_tol : 1e-8);
    *out = e.release();
  });
}

void rggm_precision_free(rggm_precision* est) { delete est; }

rggm_status rggm_nodewise_edges(const rggm_cov* S, double lambda, double tol,
                                int use_or_rule, double zero_tol, rggm_edges** out) {
  if (S == nullptr || out == nullptr) return arg_error("cov/out is NULL");
  return wrap([&] {
    const Eigen::MatrixXd B = robggm::nodewise_lasso(S->est, lambda, tol > 0 ? tol : 1e-4);
    auto e = std::make_unique<rggm_edges>();
    e->edges = robggm::edges_from_nodewise(
        B, use_or_rule != 0 ? robggm::EdgeRule::or_rule : robggm::EdgeRule::and_rule,
        zero_tol > 0 ? zero_tol : 1e-8);
    *out = e.release();
  });
}

/* ---- edges ---- */

rggm_status rggm_edges_create(int p, rggm_edges** out) {
  if (out == nullptr) return arg_error("out is NULL");
  if (p < 2) return arg_error("edge set dimension must be at least 2");
  return wrap([&] {
    auto e = std::make_unique<rggm_edges>();
    e->edges.p = p;
    *out = e.release();
  });
}

rggm_status rggm_edges_add(rggm_edges* e, int i, int j) {
  if (e == nullptr) return arg_error("edges is NULL");
  if (i < 1 || j < 1 || i > e->edges.p || j > e->edges.p || i == j)
    return arg_error("edge indices must be distinct and within [1, p]");
  return wrap([&] {
    e->edges.add(i, j);
    e->edges.sort_and_dedup();
  });
}

int rggm_edges_dim(const rggm_edges* e) { return e == nullptr ? 0 : e->edges.p; }

int rggm_edges_count(const rggm_edges* e) {
  return e == nullptr ? 0 : static_cast<int>(e->edges.pairs.size());
}

rggm_status rggm_edges_get(const rggm_edges* e, int index, int* i, int* j) {
  if (e == nullptr || i == nullptr || j == nullptr) return arg_error("edges/i/j is NULL");
  if (index < 0 || index >= static_cast<int>(e->edges.pairs.size()))
    return arg_error("edge index out of range");
  *i = e->edges.pairs[static_cast<std::size_t>(index)].first;
  *j = e->edges.pairs[static_cast<std::size_t>(index)].second;
  return RGGM_OK;
}

rggm_status rggm_edges_read(const char* path, rggm_edges** out) {
  if (path == nullptr || out == nullptr) return arg_error("path/out is NULL");
  return wrap([&] {
    auto e = std::make_unique<rggm_edges>();
    e->edges = robggm::read_edges(path);
    *out = e.release();
  });
}

rggm_status rggm_edges_write(const rggm_edges* e, const char* path) {
  if (e == nullptr || path == nullptr) return arg_error("edges/path is NULL");
  return wrap([&] { robggm::write_edges(e->edges, path); });
}

rggm_status rggm_edges_compare(const rggm_edges* est, const rggm_edges* truth, double* tpr,
                               double* fpr) {
  if (est == nullptr || truth == nullptr) return arg_error("est/truth is NULL");
  return wrap([&] {
    const robggm::EdgeComparison cmp = robggm::compare_edges(est->edges, truth->edges);
    if (tpr != nullptr) *tpr = cmp.tpr;
    if (fpr != nullptr) *fpr = cmp.fpr;
  });
}

void rggm_edges_free(rggm_edges* e) { delete e; }

/* ---- tuning ---- */

rggm_status rggm_lambda_grid(const rggm_cov* S, int count, double ratio, double* values) {
  if (S == nullptr || values == nullptr) return arg_error("cov/values is NULL");
  return wrap([&] {
    const robggm::LambdaGrid grid = robggm::lambda_grid(S->est, count, ratio);
    for (std::size_t i = 0; i < grid.values.size(); ++i) values[i] = grid.values[i];
  });
}

rggm_status rggm_cv2_select(const rggm_matrix* data, const char* estimator_tag,
                            const double* grid, int grid_count, uint64_t seed,
                            double glasso_tol, int symmetric, double* lambda_out,
                            double* per_lambda) {
  if (data == nullptr || estimator_tag == nullptr || grid == nullptr ||
      lambda_out == nullptr)
    return arg_error("data/estimator_tag/grid/lambda_out is NULL");
  return wrap([&] {
    robggm::Cv2Config cfg;
    cfg.glasso_tol = glasso_tol > 0 ? glasso_tol : 1e-4;
    cfg.symmetric = symmetric != 0;
    const robggm::SelectionResult sel =
        robggm::cv2_select(data->data, robggm::EstimatorSpec::parse(estimator_tag),
                           grid_from(grid, grid_count), seed, cfg);
    *lambda_out = sel.lambda;
    if (per_lambda != nullptr)
      for (std::size_t i = 0; i < sel.per_lambda.size(); ++i) per_lambda[i] = sel.per_lambda[i];
  });
}

rggm_status rggm_stars_select(const rggm_matrix* data, const char* estimator_tag,
                              const double* grid, int grid_count, uint64_t seed,
                              int subsamples, double cut, double nodewise_tol,
                              double zero_tol, double* lambda_out, double* per_lambda) {
  if (data == nullptr || estimator_tag == nullptr || grid == nullptr ||
      lambda_out == nullptr)
    return arg_error("data/estimator_tag/grid/lambda_out is NULL");
  return wrap([&] {
    robggm::StarsConfig cfg;
    cfg.subsamples = subsamples > 0 ? subsamples : 10;
    cfg.cut = cut > 0 ? cut : 0.2;
    cfg.nodewise_tol = nodewise_tol > 0 ? nodewise_tol : 1e-4;
    cfg.zero_tol = zero_tol > 0 ? zero_tol : 1e-8;
    const robggm::SelectionResult sel =
        robggm::stars_select(data->data, robggm::EstimatorSpec::parse(estimator_tag),
                             grid_from(grid, grid_count), seed, cfg);
    *lambda_out = sel.lambda;
    if (per_lambda != nullptr)
      for (std::size_t i = 0; i < sel.per_lambda.size(); ++i) per_lambda[i] = sel.per_lambda[i];
  });
}

rggm_status rggm_target_edges_lambda(const rggm_cov* S, int target_edges, double tol,
                                     double zero_tol, double* lambda_out) {
  if (S == nullptr || lambda_out == nullptr) return arg_error("cov/lambda_out is NULL");
  return wrap([&] {
    *lambda_out = robggm::lambda_for_target_edges(S->est, target_edges,
                                                  tol > 0 ? tol : 1e-4,
                                                  zero_tol > 0 ? zero_tol : 1e-8);
  });
}

/* ---- evaluation ---- */

rggm_status rggm_matrix_errors(const rggm_matrix* omega_hat, const rggm_matrix* omega,
                               const rggm_matrix* sigma_hat, const rggm_matrix* sigma,
                               double* mse, double* supnorm) {
  if (omega_hat == nullptr || omega == nullptr || sigma_hat == nullptr || sigma == nullptr)
    return arg_error("matrix argument is NULL");
  return wrap([&] {
    const robggm::MatrixErrors err = robggm::matrix_errors(
        omega_hat->data.values, omega->data.values, sigma_hat->data.values,
        sigma->data.values);
    if (mse != nullptr) *mse = err.mse;
    if (supnorm != nullptr) *supnorm = err.supnorm;
  });
}

/* ---- campaigns ---- */

rggm_status rggm_run_experiment(const char* config_path, const char* const* overrides,
                                int n_overrides) {
  if (n_overrides > 0 && overrides == nullptr) return arg_error("overrides is NULL");
  return wrap([&] {
    robggm::ExperimentConfig cfg;
    if (config_path != nullptr) cfg = robggm::load_config_file(config_path);
    for (int i = 0; i < n_overrides; ++i) {
      const std::string kv = overrides[i] != nullptr ? overrides[i] : "";
      const std::size_t eq = kv.find('=');
      if (eq == std::string::npos)
        robggm::fail(robggm::ErrorCode::config, "override '" + kv + "' is not key=value");
      robggm::apply_config_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    robggm::run_experiment(cfg);
  });
}

rggm_status rggm_emit_plots(const char* results_dir) {
  if (results_dir == nullptr) return arg_error("results_dir is NULL");
  return wrap([&] { robggm::emit_plots(results_dir); });
}

} /* extern "C" */
