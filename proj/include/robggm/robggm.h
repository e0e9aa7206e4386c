/* robggm — robust Gaussian graphical model estimation.
 *
 * C interface to the shared library. All functions that can fail return an
 * rggm_status; on failure rggm_last_error() gives a message for the calling
 * thread. Handles are opaque and must be released with the matching _free
 * function. Output handle parameters are written only on RGGM_OK. Matrix
 * buffers are row-major; edge indices are 1-based with i < j.
 */
#ifndef ROBGGM_H
#define ROBGGM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rggm_status {
  RGGM_OK = 0,
  RGGM_ERR_INVALID_ARGUMENT = 1,
  RGGM_ERR_DEGENERATE = 2,      /* input degenerate for the requested estimate */
  RGGM_ERR_NONCONVERGENCE = 3,  /* iteration limit hit before the certificate */
  RGGM_ERR_PARSE = 4,
  RGGM_ERR_IO = 5,
  RGGM_ERR_CONFIG = 6,
  RGGM_ERR_INTERNAL = 7,
} rggm_status;

/* Message of the most recent failing call on this thread; never NULL. */
const char* rggm_last_error(void);

const char* rggm_version(void);

typedef struct rggm_matrix rggm_matrix;       /* n x p data or any real matrix */
typedef struct rggm_model rggm_model;         /* ground-truth precision model */
typedef struct rggm_cov rggm_cov;             /* covariance estimate */
typedef struct rggm_precision rggm_precision; /* penalized precision estimate */
typedef struct rggm_edges rggm_edges;         /* undirected edge set */

/* ---- matrices ---- */

/* data row-major (rows*cols), or NULL for zeros. */
rggm_status rggm_matrix_create(int rows, int cols, const double* data, rggm_matrix** out);
rggm_status rggm_matrix_read_csv(const char* path, int has_header, rggm_matrix** out);
rggm_status rggm_matrix_write_csv(const rggm_matrix* m, const char* path);
int rggm_matrix_rows(const rggm_matrix* m);
int rggm_matrix_cols(const rggm_matrix* m);
/* buffer must hold rows*cols doubles; filled row-major. */
rggm_status rggm_matrix_copy_data(const rggm_matrix* m, double* buffer);
void rggm_matrix_free(rggm_matrix* m);

/* ---- ground-truth models and synthetic data ---- */

/* graph_kind: "chain", "hub", "scale_free", or "random". */
rggm_status rggm_model_generate(const char* graph_kind, int p, uint64_t seed,
                                rggm_model** out);
rggm_status rggm_model_sigma(const rggm_model* m, rggm_matrix** out);
rggm_status rggm_model_omega(const rggm_model* m, rggm_matrix** out);
rggm_status rggm_model_edges(const rggm_model* m, rggm_edges** out);
/* n draws from N(0, Sigma), then independent per-cell contamination with
 * probability eps: N(contam_mean, contam_sd^2), sign-flipped with equal odds
 * when symmetric is nonzero. eps = 0 leaves the sample clean. */
rggm_status rggm_model_sample(const rggm_model* m, int n, uint64_t seed, double eps,
                              int symmetric, double contam_mean, double contam_sd,
                              rggm_matrix** out);
void rggm_model_free(rggm_model* m);

/* ---- covariance estimation ---- */

/* estimator_tag: "gamma@0.3" (any positive value after '@'), "kendall",
 * "spearman", "gauss_rank", "gk_qn", or "sample". */
rggm_status rggm_cov_assemble(const rggm_matrix* data, const char* estimator_tag,
                              rggm_cov** out);
/* Frobenius projection onto eigenvalues >= delta. */
rggm_status rggm_cov_project(const rggm_cov* S, double delta, rggm_cov** out);
rggm_status rggm_cov_matrix(const rggm_cov* S, rggm_matrix** out);
int rggm_cov_projected(const rggm_cov* S);
double rggm_cov_min_eigenvalue(const rggm_cov* S);
void rggm_cov_free(rggm_cov* S);

/* ---- sparse precision estimation ---- */

/* L1-penalized (diagonal included) precision estimate; pass tol <= 0 for the
 * default certificate tolerance 1e-4. */
rggm_status rggm_glasso(const rggm_cov* S, double lambda, double tol,
                        rggm_precision** out);
rggm_status rggm_precision_matrix(const rggm_precision* est, rggm_matrix** out);
double rggm_precision_objective(const rggm_precision* est);
double rggm_precision_kkt_residual(const rggm_precision* est);
int rggm_precision_iterations(const rggm_precision* est);
/* Support of the estimate; entries with |omega_ij| <= zero_tol count as zero
 * (zero_tol <= 0 selects the default 1e-8). */
rggm_status rggm_precision_edges(const rggm_precision* est, double zero_tol,
                                 rggm_edges** out);
void rggm_precision_free(rggm_precision* est);

/* Node-wise lasso graph estimate; use_or_rule nonzero joins the per-node
 * supports with OR instead of AND. */
rggm_status rggm_nodewise_edges(const rggm_cov* S, double lambda, double tol,
                                int use_or_rule, double zero_tol, rggm_edges** out);

/* ---- edge sets ---- */

rggm_status rggm_edges_create(int p, rggm_edges** out);
rggm_status rggm_edges_add(rggm_edges* e, int i, int j);
int rggm_edges_dim(const rggm_edges* e);
int rggm_edges_count(const rggm_edges* e);
/* index in [0, count); writes the 1-based pair. */
rggm_status rggm_edges_get(const rggm_edges* e, int index, int* i, int* j);
rggm_status rggm_edges_read(const char* path, rggm_edges** out);
rggm_status rggm_edges_write(const rggm_edges* e, const char* path);
/* TPR/FPR of est against truth over all unordered pairs. */
rggm_status rggm_edges_compare(const rggm_edges* est, const rggm_edges* truth,
                               double* tpr, double* fpr);
void rggm_edges_free(rggm_edges* e);

/* ---- tuning ---- */

/* Geometric grid from max off-diagonal |S_ij| down to ratio times it;
 * values must hold count doubles (written in decreasing order). */
rggm_status rggm_lambda_grid(const rggm_cov* S, int count, double ratio, double* values);

/* Seeded 2-fold cross-validation over the grid (glasso path). per_lambda may
 * be NULL, otherwise receives grid_count losses. */
rggm_status rggm_cv2_select(const rggm_matrix* data, const char* estimator_tag,
                            const double* grid, int grid_count, uint64_t seed,
                            double glasso_tol, int symmetric, double* lambda_out,
                            double* per_lambda);

/* Seeded stability selection over the grid (node-wise lasso, OR rule).
 * per_lambda may be NULL, otherwise receives the monotonized instabilities. */
rggm_status rggm_stars_select(const rggm_matrix* data, const char* estimator_tag,
                              const double* grid, int grid_count, uint64_t seed,
                              int subsamples, double cut, double nodewise_tol,
                              double zero_tol, double* lambda_out, double* per_lambda);

/* Smallest-bracketing lambda whose glasso support has target_edges edges
 * (bisection); tol <= 0 selects the default 1e-4. */
rggm_status rggm_target_edges_lambda(const rggm_cov* S, int target_edges, double tol,
                                     double zero_tol, double* lambda_out);

/* ---- evaluation ---- */

/* mse = |omega_hat - omega|_F / p, supnorm = max |sigma_hat - sigma|.
 * Either output pointer may be NULL. */
rggm_status rggm_matrix_errors(const rggm_matrix* omega_hat, const rggm_matrix* omega,
                               const rggm_matrix* sigma_hat, const rggm_matrix* sigma,
                               double* mse, double* supnorm);

/* ---- campaigns ---- */

/* Runs a full simulation campaign. config_path may be NULL (defaults), and
 * overrides is an array of "key=value" strings applied after the file.
 * Writes metrics.csv, summary.csv, truth and estimate files, and plots into
 * the configured output directory. */
rggm_status rggm_run_experiment(const char* config_path, const char* const* overrides,
                                int n_overrides);

/* Renders box_stats.csv + supnorm_box.svg (and roc.svg when roc.csv exists)
 * from a results directory produced by rggm_run_experiment. */
rggm_status rggm_emit_plots(const char* results_dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ROBGGM_H */
