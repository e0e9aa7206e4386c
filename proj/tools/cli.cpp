// Command-line front end. Everything goes through the shared library's C
// interface; this translation unit holds no estimation logic.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "robggm/robggm.h"

namespace {

// Exits the process with the failing status after printing the library's
// error message; returns only on RGGM_OK.
void check(rggm_status status, const char* what) {
  if (status == RGGM_OK) return;
  std::fprintf(stderr, "error: %s: %s\n", what, rggm_last_error());
  std::exit(static_cast<int>(status));
}

template <typename T, void (*Free)(T*)>
using handle = std::unique_ptr<T, std::integral_constant<decltype(Free), Free>>;

using matrix_handle = handle<rggm_matrix, rggm_matrix_free>;
using model_handle = handle<rggm_model, rggm_model_free>;
using cov_handle = handle<rggm_cov, rggm_cov_free>;
using precision_handle = handle<rggm_precision, rggm_precision_free>;
using edges_handle = handle<rggm_edges, rggm_edges_free>;

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::fprintf(stderr, "error: cannot create directory '%s'\n", dir.c_str());
    std::exit(static_cast<int>(RGGM_ERR_IO));
  }
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct GenerateArgs {
  std::string graph = "chain";
  int p = 50;
  int n = 200;
  std::uint64_t seed = 1;
  double eps = 0.0;
  std::string scenario = "asym";
  double contam_mean = 10.0;
  double contam_sd = 1.0;
  std::string out = "results";
};

int cmd_generate(const GenerateArgs& a) {
  ensure_dir(a.out);
  rggm_model* model_raw = nullptr;
  check(rggm_model_generate(a.graph.c_str(), a.p, a.seed, &model_raw), "generate model");
  model_handle model(model_raw);

  rggm_matrix* m = nullptr;
  check(rggm_model_sigma(model.get(), &m), "model covariance");
  matrix_handle sigma(m);
  check(rggm_matrix_write_csv(sigma.get(), join_path(a.out, "sigma.csv").c_str()),
        "write sigma.csv");

  check(rggm_model_omega(model.get(), &m), "model precision");
  matrix_handle omega(m);
  check(rggm_matrix_write_csv(omega.get(), join_path(a.out, "omega.csv").c_str()),
        "write omega.csv");

  rggm_edges* e = nullptr;
  check(rggm_model_edges(model.get(), &e), "model edges");
  edges_handle edges(e);
  check(rggm_edges_write(edges.get(), join_path(a.out, "edges.txt").c_str()),
        "write edges.txt");

  check(rggm_model_sample(model.get(), a.n, a.seed, a.eps, a.scenario == "sym" ? 1 : 0,
                          a.contam_mean, a.contam_sd, &m),
        "sample data");
  matrix_handle data(m);
  check(rggm_matrix_write_csv(data.get(), join_path(a.out, "data.csv").c_str()),
        "write data.csv");

  std::printf("wrote %s: data.csv (%d x %d), sigma.csv, omega.csv, edges.txt (%d edges)\n",
              a.out.c_str(), rggm_matrix_rows(data.get()), rggm_matrix_cols(data.get()),
              rggm_edges_count(edges.get()));
  return 0;
}

struct EstimateArgs {
  std::string data_path;
  bool has_header = false;
  std::vector<std::string> estimators;
  std::vector<double> gammas;
  double lambda = -1.0;
  int target_edges = -1;
  std::string graph_method = "glasso";
  std::string edge_rule = "and";
  double glasso_tol = 1e-4;
  double zero_tol = 1e-8;
  std::string out = "results";
};

int cmd_estimate(const EstimateArgs& a) {
  ensure_dir(a.out);
  std::vector<std::string> tags = a.estimators;
  for (double g : a.gammas) tags.push_back("gamma@" + fmt_double(g));
  if (tags.empty()) tags.push_back("gamma@0.3");

  rggm_matrix* m = nullptr;
  check(rggm_matrix_read_csv(a.data_path.c_str(), a.has_header ? 1 : 0, &m), "read data");
  matrix_handle data(m);

  for (const std::string& tag : tags) {
    const std::string suffix = tags.size() > 1 ? "_" + tag : "";
    rggm_cov* c = nullptr;
    check(rggm_cov_assemble(data.get(), tag.c_str(), &c), tag.c_str());
    cov_handle cov(c);
    check(rggm_cov_matrix(cov.get(), &m), "covariance matrix");
    matrix_handle sigma_hat(m);
    check(rggm_matrix_write_csv(sigma_hat.get(),
                                join_path(a.out, "sigma_hat" + suffix + ".csv").c_str()),
          "write sigma_hat.csv");

    if (a.lambda < 0 && a.target_edges < 0) {
      std::printf("%s: wrote sigma_hat%s.csv\n", tag.c_str(), suffix.c_str());
      continue;
    }

    check(rggm_cov_project(cov.get(), 0.0, &c), "psd projection");
    cov_handle proj(c);
    double lambda = a.lambda;
    if (a.target_edges >= 0) {
      check(rggm_target_edges_lambda(proj.get(), a.target_edges, a.glasso_tol, a.zero_tol,
                                     &lambda),
            "target edge count");
    }

    rggm_edges* e = nullptr;
    if (a.graph_method == "nodewise") {
      check(rggm_nodewise_edges(proj.get(), lambda, a.glasso_tol,
                                a.edge_rule == "or" ? 1 : 0, a.zero_tol, &e),
            "node-wise lasso");
      edges_handle edges(e);
      check(rggm_edges_write(edges.get(), join_path(a.out, "edges" + suffix + ".txt").c_str()),
            "write edges.txt");
      std::printf("%s: lambda=%s, %d edges\n", tag.c_str(), fmt_double(lambda).c_str(),
                  rggm_edges_count(edges.get()));
    } else {
      rggm_precision* pr = nullptr;
      check(rggm_glasso(proj.get(), lambda, a.glasso_tol, &pr), "glasso");
      precision_handle prec(pr);
      check(rggm_precision_matrix(prec.get(), &m), "precision matrix");
      matrix_handle omega_hat(m);
      check(rggm_matrix_write_csv(omega_hat.get(),
                                  join_path(a.out, "omega_hat" + suffix + ".csv").c_str()),
            "write omega_hat.csv");
      check(rggm_precision_edges(prec.get(), a.zero_tol, &e), "edge support");
      edges_handle edges(e);
      check(rggm_edges_write(edges.get(), join_path(a.out, "edges" + suffix + ".txt").c_str()),
            "write edges.txt");
      std::printf("%s: lambda=%s, %d edges, kkt=%s\n", tag.c_str(),
                  fmt_double(lambda).c_str(), rggm_edges_count(edges.get()),
                  fmt_double(rggm_precision_kkt_residual(prec.get())).c_str());
    }
  }
  return 0;
}

struct SelectArgs {
  std::string data_path;
  bool has_header = false;
  std::string estimator = "gamma@0.3";
  std::string selection = "cv2";
  int grid_count = 10;
  double grid_ratio = 0.05;
  std::uint64_t seed = 1;
  double glasso_tol = 1e-4;
  bool cv_symmetric = false;
  int subsamples = 10;
  double cut = 0.2;
  double zero_tol = 1e-8;
  std::string out;
};

int cmd_select(const SelectArgs& a) {
  rggm_matrix* m = nullptr;
  check(rggm_matrix_read_csv(a.data_path.c_str(), a.has_header ? 1 : 0, &m), "read data");
  matrix_handle data(m);

  rggm_cov* c = nullptr;
  check(rggm_cov_assemble(data.get(), a.estimator.c_str(), &c), a.estimator.c_str());
  cov_handle cov(c);
  check(rggm_cov_project(cov.get(), 0.0, &c), "psd projection");
  cov_handle proj(c);

  std::vector<double> grid(static_cast<std::size_t>(a.grid_count));
  check(rggm_lambda_grid(proj.get(), a.grid_count, a.grid_ratio, grid.data()),
        "lambda grid");

  double lambda = 0.0;
  std::vector<double> scores(grid.size());
  if (a.selection == "stars") {
    check(rggm_stars_select(data.get(), a.estimator.c_str(), grid.data(), a.grid_count,
                            a.seed, a.subsamples, a.cut, a.glasso_tol, a.zero_tol, &lambda,
                            scores.data()),
          "stability selection");
  } else if (a.selection == "cv2") {
    check(rggm_cv2_select(data.get(), a.estimator.c_str(), grid.data(), a.grid_count,
                          a.seed, a.glasso_tol, a.cv_symmetric ? 1 : 0, &lambda,
                          scores.data()),
          "cross-validation");
  } else {
    std::fprintf(stderr, "error: unknown selection '%s' (cv2|stars)\n",
                 a.selection.c_str());
    return static_cast<int>(RGGM_ERR_CONFIG);
  }

  std::printf("selected lambda = %s\n", fmt_double(lambda).c_str());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::printf("  lambda=%s %s=%s%s\n", fmt_double(grid[i]).c_str(),
                a.selection == "stars" ? "instability" : "cv_loss",
                fmt_double(scores[i]).c_str(), grid[i] == lambda ? "  <-- selected" : "");
  }
  if (!a.out.empty()) {
    ensure_dir(a.out);
    std::string body = "lambda," +
                       std::string(a.selection == "stars" ? "instability" : "cv_loss") +
                       ",selected\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      body += fmt_double(grid[i]) + "," + fmt_double(scores[i]) + "," +
              (grid[i] == lambda ? "1" : "0") + "\n";
    }
    const std::string path = join_path(a.out, "select.csv");
    FILE* f = std::fopen(path.c_str(), "wb");
    if (f == nullptr || std::fwrite(body.data(), 1, body.size(), f) != body.size()) {
      if (f != nullptr) std::fclose(f);
      std::fprintf(stderr, "error: cannot write '%s'\n", path.c_str());
      return static_cast<int>(RGGM_ERR_IO);
    }
    std::fclose(f);
  }
  return 0;
}

struct EvaluateArgs {
  std::string edges_path;
  std::string truth_path;
  std::string omega_hat_path, omega_path, sigma_hat_path, sigma_path;
};

int cmd_evaluate(const EvaluateArgs& a) {
  rggm_edges* e = nullptr;
  check(rggm_edges_read(a.edges_path.c_str(), &e), "read estimated edges");
  edges_handle est(e);
  check(rggm_edges_read(a.truth_path.c_str(), &e), "read truth edges");
  edges_handle truth(e);

  double tpr = 0.0, fpr = 0.0;
  check(rggm_edges_compare(est.get(), truth.get(), &tpr, &fpr), "compare edges");
  std::printf("tpr=%s\nfpr=%s\n", fmt_double(tpr).c_str(), fmt_double(fpr).c_str());

  if (!a.omega_hat_path.empty()) {
    rggm_matrix* m = nullptr;
    check(rggm_matrix_read_csv(a.omega_hat_path.c_str(), 0, &m), "read omega_hat");
    matrix_handle omega_hat(m);
    check(rggm_matrix_read_csv(a.omega_path.c_str(), 0, &m), "read omega");
    matrix_handle omega(m);
    check(rggm_matrix_read_csv(a.sigma_hat_path.c_str(), 0, &m), "read sigma_hat");
    matrix_handle sigma_hat(m);
    check(rggm_matrix_read_csv(a.sigma_path.c_str(), 0, &m), "read sigma");
    matrix_handle sigma(m);
    double mse = 0.0, supnorm = 0.0;
    check(rggm_matrix_errors(omega_hat.get(), omega.get(), sigma_hat.get(), sigma.get(),
                             &mse, &supnorm),
          "matrix errors");
    std::printf("mse=%s\nsupnorm=%s\n", fmt_double(mse).c_str(),
                fmt_double(supnorm).c_str());
  }
  return 0;
}

struct RunArgs {
  std::string config;
  std::vector<std::string> overrides;  // assembled key=value pairs
};

int cmd_run(const RunArgs& a) {
  std::vector<const char*> ptrs;
  ptrs.reserve(a.overrides.size());
  for (const std::string& s : a.overrides) ptrs.push_back(s.c_str());
  check(rggm_run_experiment(a.config.empty() ? nullptr : a.config.c_str(),
                            ptrs.empty() ? nullptr : ptrs.data(),
                            static_cast<int>(ptrs.size())),
        "run experiment");
  std::printf("done\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust Gaussian graphical model estimation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rggm_version()));

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand(
      "generate", "Generate a ground-truth model and a (contaminated) sample");
  generate->add_option("--graph", gen.graph, "chain|hub|scale_free|random");
  generate->add_option("--p", gen.p, "dimension");
  generate->add_option("--n", gen.n, "observations");
  generate->add_option("--seed", gen.seed, "RNG seed");
  generate->add_option("--eps", gen.eps, "cell contamination probability");
  generate->add_option("--scenario", gen.scenario, "asym|sym contamination")
      ->check(CLI::IsMember({"asym", "sym"}));
  generate->add_option("--contam-mean", gen.contam_mean, "contamination mean");
  generate->add_option("--contam-sd", gen.contam_sd, "contamination standard deviation");
  generate->add_option("--out", gen.out, "output directory");

  EstimateArgs est;
  CLI::App* estimate =
      app.add_subcommand("estimate", "Estimate a covariance (and optionally a graph)");
  estimate->add_option("--data", est.data_path, "input CSV, rows = observations")
      ->required();
  estimate->add_flag("--has-header", est.has_header, "first CSV row is column names");
  estimate->add_option("--estimator", est.estimators,
                       "estimator tag (repeatable): gamma@G, kendall, spearman, "
                       "gauss_rank, gk_qn, sample");
  estimate->add_option("--gamma", est.gammas, "shorthand for --estimator gamma@VALUE");
  CLI::Option* opt_lambda =
      estimate->add_option("--lambda", est.lambda, "penalty for a graph fit");
  estimate->add_option("--target-edges", est.target_edges,
                       "choose lambda so the graph has this many edges")
      ->excludes(opt_lambda);
  estimate->add_option("--graph-method", est.graph_method, "glasso|nodewise")
      ->check(CLI::IsMember({"glasso", "nodewise"}));
  estimate->add_option("--edge-rule", est.edge_rule, "and|or (node-wise only)")
      ->check(CLI::IsMember({"and", "or"}));
  estimate->add_option("--glasso-tol", est.glasso_tol, "solver certificate tolerance");
  estimate->add_option("--zero-tol", est.zero_tol, "support zero threshold");
  estimate->add_option("--out", est.out, "output directory");

  SelectArgs sel;
  CLI::App* select = app.add_subcommand("select", "Pick a penalty on a lambda grid");
  select->add_option("--data", sel.data_path, "input CSV")->required();
  select->add_flag("--has-header", sel.has_header, "first CSV row is column names");
  select->add_option("--estimator", sel.estimator, "estimator tag");
  select->add_option("--selection", sel.selection, "cv2|stars")
      ->check(CLI::IsMember({"cv2", "stars"}));
  select->add_option("--grid-count", sel.grid_count, "grid size");
  select->add_option("--grid-ratio", sel.grid_ratio, "lambda_min / lambda_max");
  select->add_option("--seed", sel.seed, "RNG seed");
  select->add_option("--glasso-tol", sel.glasso_tol, "solver tolerance");
  select->add_flag("--cv-symmetric", sel.cv_symmetric, "average both fold orders");
  select->add_option("--subsamples", sel.subsamples, "stability subsamples");
  select->add_option("--cut", sel.cut, "instability threshold");
  select->add_option("--zero-tol", sel.zero_tol, "support zero threshold");
  select->add_option("--out", sel.out, "also write select.csv here");

  EvaluateArgs ev;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Score estimated edges (and matrices) against truth");
  evaluate->add_option("--edges", ev.edges_path, "estimated edge list")->required();
  evaluate->add_option("--truth", ev.truth_path, "true edge list")->required();
  // matrix errors need all four matrices, so the flags require each other
  CLI::Option* oh = evaluate->add_option("--omega-hat", ev.omega_hat_path,
                                         "estimated precision CSV");
  CLI::Option* om =
      evaluate->add_option("--omega", ev.omega_path, "true precision CSV")->needs(oh);
  CLI::Option* sh =
      evaluate->add_option("--sigma-hat", ev.sigma_hat_path, "estimated covariance CSV")
          ->needs(oh);
  CLI::Option* sg =
      evaluate->add_option("--sigma", ev.sigma_path, "true covariance CSV")->needs(oh);
  oh->needs(om)->needs(sh)->needs(sg);

  RunArgs run;
  std::string run_graph, run_scenario, run_out;
  std::vector<std::string> run_estimators, run_sets;
  std::vector<double> run_gammas;
  double run_eps = -1.0;
  std::int64_t run_seed = -1, run_threads = -1;
  CLI::App* runcmd = app.add_subcommand("run", "Run a full simulation campaign");
  runcmd->add_option("--config", run.config, "key=value or JSON config file");
  runcmd->add_option("--seed", run_seed, "base seed override");
  runcmd->add_option("--out", run_out, "output directory override");
  runcmd->add_option("--threads", run_threads, "worker threads over replicates");
  runcmd->add_option("--estimator", run_estimators, "estimator tag (repeatable)");
  runcmd->add_option("--gamma", run_gammas, "shorthand for gamma@VALUE (repeatable)");
  runcmd->add_option("--graph", run_graph, "chain|hub|scale_free|random");
  runcmd->add_option("--eps", run_eps, "cell contamination probability");
  runcmd->add_option("--scenario", run_scenario, "asym|sym")
      ->check(CLI::IsMember({"asym", "sym"}));
  runcmd->add_option("--set", run_sets, "extra key=value override (repeatable)");

  std::string plot_dir = "results";
  CLI::App* plot = app.add_subcommand("plot", "Render plots from a results directory");
  plot->add_option("--out", plot_dir, "results directory (read and written)");

  CLI11_PARSE(app, argc, argv);

  if (generate->parsed()) return cmd_generate(gen);
  if (estimate->parsed()) return cmd_estimate(est);
  if (select->parsed()) return cmd_select(sel);
  if (evaluate->parsed()) return cmd_evaluate(ev);
  if (runcmd->parsed()) {
    if (!run_graph.empty()) run.overrides.push_back("graph=" + run_graph);
    if (run_eps >= 0) run.overrides.push_back("eps=" + fmt_double(run_eps));
    if (!run_scenario.empty()) run.overrides.push_back("scenario=" + run_scenario);
    std::vector<std::string> tags = run_estimators;
    for (double g : run_gammas) tags.push_back("gamma@" + fmt_double(g));
    if (!tags.empty()) {
      std::string joined;
      for (std::size_t i = 0; i < tags.size(); ++i)
        joined += (i != 0 ? "," : "") + tags[i];
      run.overrides.push_back("estimators=" + joined);
    }
    if (run_seed >= 0) run.overrides.push_back("seed=" + std::to_string(run_seed));
    if (run_threads >= 0) run.overrides.push_back("threads=" + std::to_string(run_threads));
    if (!run_out.empty()) run.overrides.push_back("out=" + run_out);
    for (const std::string& s : run_sets) run.overrides.push_back(s);
    return cmd_run(run);
  }
  if (plot->parsed()) {
    check(rggm_emit_plots(plot_dir.c_str()), "plot");
    std::printf("wrote plots in %s\n", plot_dir.c_str());
    return 0;
  }
  return 1;
}
