#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/covmat.hpp"
#include "core/csvio.hpp"
#include "core/datagen.hpp"
#include "core/errors.hpp"
#include "core/experiment.hpp"
#include "core/graphest.hpp"
#include "core/plots.hpp"
#include "core/types.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

using robggm::ExperimentConfig;
using robggm::MetricsRecord;
using robggm::run_campaign;
using robggm::run_experiment;
using robggm::RunResult;
using robggm::SelectionMode;

namespace {

ExperimentConfig small_cv2_config() {
  ExperimentConfig cfg;
  cfg.graph = robggm::GraphKind::chain;
  cfg.p = 8;
  cfg.n = 60;
  cfg.eps = 0.05;
  cfg.estimators = {robggm::EstimatorSpec::parse("kendall"),
                    robggm::EstimatorSpec::parse("sample")};
  cfg.selection = SelectionMode::cv2;
  cfg.replicates = 3;
  cfg.seed = 4242;
  cfg.lambda_count = 6;
  cfg.lambda_ratio = 0.1;
  cfg.out_dir = "./test_tmp_harness/out";
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("campaign produces one record per replicate and estimator") {
  const ExperimentConfig cfg = small_cv2_config();
  const RunResult r = run_campaign(cfg);
  REQUIRE(r.records.size() == 6);  // 3 replicates x 2 estimators
  for (const MetricsRecord& rec : r.records) {
    CHECK(std::isfinite(rec.mse));
    CHECK(rec.tpr >= 0.0);
    CHECK(rec.tpr <= 1.0);
    CHECK(rec.fpr >= 0.0);
    CHECK(rec.fpr <= 1.0);
    CHECK(rec.supnorm > 0.0);
    CHECK(rec.lambda > 0.0);
    CHECK(rec.seed == cfg.seed + static_cast<std::uint64_t>(rec.replicate));
  }
  // sorted by replicate, then estimator tag
  for (std::size_t i = 1; i < r.records.size(); ++i) {
    const auto& a = r.records[i - 1];
    const auto& b = r.records[i];
    CHECK((a.replicate < b.replicate ||
           (a.replicate == b.replicate && a.estimator <= b.estimator)));
  }
  REQUIRE(r.summary.size() == 2);
  CHECK(r.selected_lambdas.at("kendall").size() == 3);
  CHECK(r.roc.empty());
}

TEST_CASE("campaign is deterministic") {
  const ExperimentConfig cfg = small_cv2_config();
  const RunResult a = run_campaign(cfg);
  const RunResult b = run_campaign(cfg);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].mse == b.records[i].mse);
    CHECK(a.records[i].tpr == b.records[i].tpr);
    CHECK(a.records[i].fpr == b.records[i].fpr);
    CHECK(a.records[i].supnorm == b.records[i].supnorm);
    CHECK(a.records[i].lambda == b.records[i].lambda);
  }
}

TEST_CASE("threaded and serial campaigns agree") {
  ExperimentConfig cfg = small_cv2_config();
  const RunResult serial = run_campaign(cfg);
  cfg.threads = 3;
  const RunResult parallel = run_campaign(cfg);
  REQUIRE(serial.records.size() == parallel.records.size());
  for (std::size_t i = 0; i < serial.records.size(); ++i) {
    CHECK(serial.records[i].mse == parallel.records[i].mse);
    CHECK(serial.records[i].lambda == parallel.records[i].lambda);
    CHECK(serial.records[i].supnorm == parallel.records[i].supnorm);
  }
}

TEST_CASE("summary rows hold the column means") {
  const ExperimentConfig cfg = small_cv2_config();
  const RunResult r = run_campaign(cfg);
  for (const robggm::SummaryRow& row : r.summary) {
    double mse = 0.0, tpr = 0.0, fpr = 0.0, sup = 0.0;
    int count = 0;
    for (const MetricsRecord& rec : r.records) {
      if (rec.estimator != row.estimator) continue;
      mse += rec.mse;
      tpr += rec.tpr;
      fpr += rec.fpr;
      sup += rec.supnorm;
      ++count;
    }
    REQUIRE(count == row.rows);
    CHECK(row.mse_mean == doctest::Approx(mse / count).epsilon(1e-12));
    CHECK(row.tpr_mean == doctest::Approx(tpr / count).epsilon(1e-12));
    CHECK(row.fpr_mean == doctest::Approx(fpr / count).epsilon(1e-12));
    CHECK(row.supnorm_mean == doctest::Approx(sup / count).epsilon(1e-12));
    CHECK(row.mse_sd >= 0.0);
  }
}

TEST_CASE("experiment writes its file suite byte-reproducibly") {
  fs::remove_all("./test_tmp_harness");
  const ExperimentConfig cfg = small_cv2_config();
  (void)run_experiment(cfg);
  const fs::path out(cfg.out_dir);
  for (const char* name : {"metrics.csv", "summary.csv", "sigma.csv", "omega.csv",
                           "edges_truth.txt", "sigma_hat.csv", "omega_hat.csv",
                           "edges.txt", "box_stats.csv", "supnorm_box.svg"}) {
    CAPTURE(name);
    CHECK(fs::exists(out / name));
  }
  CHECK_FALSE(fs::exists(out / "roc.csv"));

  // metrics round trip
  const std::vector<MetricsRecord> back = robggm::read_metrics_csv((out / "metrics.csv").string());
  REQUIRE(back.size() == 6);
  const RunResult r = run_campaign(cfg);
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].estimator == r.records[i].estimator);
    CHECK(back[i].mse == r.records[i].mse);
    CHECK(back[i].supnorm == r.records[i].supnorm);
  }

  // a rerun into a second directory is byte-identical
  ExperimentConfig cfg2 = cfg;
  cfg2.out_dir = "./test_tmp_harness/out2";
  (void)run_experiment(cfg2);
  for (const char* name : {"metrics.csv", "summary.csv", "sigma.csv"}) {
    CAPTURE(name);
    CHECK(slurp((out / name).string()) == slurp((fs::path(cfg2.out_dir) / name).string()));
  }
  fs::remove_all("./test_tmp_harness");
}

TEST_CASE("fixed-grid mode shares one grid across replicates") {
  ExperimentConfig cfg = small_cv2_config();
  cfg.selection = SelectionMode::fixed_grid_roc;
  cfg.lambda_count = 5;
  const RunResult r = run_campaign(cfg);
  // lambda set per estimator must be identical in every replicate
  std::map<std::string, std::vector<double>> rep0;
  for (const MetricsRecord& rec : r.records)
    if (rec.replicate == 0) rep0[rec.estimator].push_back(rec.lambda);
  for (const auto& [tag, grid] : rep0) CHECK(grid.size() == 5);
  for (int rep = 1; rep < cfg.replicates; ++rep) {
    std::map<std::string, std::vector<double>> cur;
    for (const MetricsRecord& rec : r.records)
      if (rec.replicate == rep) cur[rec.estimator].push_back(rec.lambda);
    CHECK(cur == rep0);
  }
  REQUIRE(r.roc.size() == 2);
  for (const auto& [tag, curve] : r.roc) {
    CHECK(curve.points.size() == 5);
    CHECK(curve.auc > 0.0);
    CHECK(curve.auc <= 1.0);
  }
}

TEST_CASE("stability mode leaves the precision error undefined") {
  ExperimentConfig cfg = small_cv2_config();
  cfg.selection = SelectionMode::stars;
  cfg.graph_method = robggm::GraphMethod::nodewise;
  cfg.replicates = 2;
  cfg.stars_subsamples = 4;
  const RunResult r = run_campaign(cfg);
  REQUIRE(r.records.size() == 4);
  for (const MetricsRecord& rec : r.records) {
    CHECK(std::isnan(rec.mse));
    CHECK(rec.supnorm > 0.0);
  }
}

TEST_CASE("failed campaigns leave a sentinel row behind") {
  fs::remove_all("./test_tmp_harness_fail");
  ExperimentConfig cfg = small_cv2_config();
  cfg.graph = robggm::GraphKind::hub;
  cfg.p = 15;  // not a multiple of twenty: model construction fails
  cfg.out_dir = "./test_tmp_harness_fail";
  CHECK_THROWS_AS((void)run_experiment(cfg), robggm::Error);
  const std::string text = slurp("./test_tmp_harness_fail/metrics.csv");
  CHECK(text.find("#failed: ") != std::string::npos);
  fs::remove_all("./test_tmp_harness_fail");
}

TEST_CASE("plot emission requires campaign output") {
  fs::remove_all("./test_tmp_harness_plots");
  CHECK_THROWS_AS(robggm::emit_plots("./test_tmp_harness_plots"), robggm::Error);
  fs::create_directories("./test_tmp_harness_plots");
  robggm::write_text_file("./test_tmp_harness_plots/metrics.csv",
                          "replicate,seed,estimator,lambda,mse,tpr,fpr,supnorm\n");
  CHECK_THROWS_AS(robggm::emit_plots("./test_tmp_harness_plots"), robggm::Error);
  fs::remove_all("./test_tmp_harness_plots");
}

TEST_CASE("quantiles interpolate linearly") {
  CHECK(robggm::quantile({1.0}, 0.5) == 1.0);
  CHECK(robggm::quantile({1.0, 2.0}, 0.5) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(robggm::quantile({3.0, 1.0, 2.0, 4.0}, 0.25) == doctest::Approx(1.75).epsilon(1e-15));
  CHECK(robggm::quantile({3.0, 1.0, 2.0, 4.0}, 0.0) == 1.0);
  CHECK(robggm::quantile({3.0, 1.0, 2.0, 4.0}, 1.0) == 4.0);
  CHECK_THROWS_AS((void)robggm::quantile({}, 0.5), robggm::Error);
}

TEST_CASE("box statistics summarize one value per replicate") {
  std::vector<MetricsRecord> records;
  for (int rep = 0; rep < 4; ++rep) {
    MetricsRecord rec;
    rec.replicate = rep;
    rec.estimator = "kendall";
    rec.supnorm = 1.0 + rep;
    records.push_back(rec);
    rec.lambda = 0.5;  // second row of the same replicate must not recount
    records.push_back(rec);
  }
  const std::vector<robggm::BoxStats> stats = robggm::compute_box_stats(records);
  REQUIRE(stats.size() == 1);
  CHECK(stats[0].estimator == "kendall");
  CHECK(stats[0].n == 4);
  CHECK(stats[0].min == 1.0);
  CHECK(stats[0].median == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(stats[0].max == 4.0);
}

TEST_CASE("target edge count is reached by bisection") {
  const robggm::PrecisionModel model =
      robggm::generate_graph(robggm::GraphKind::chain, 8, 21);
  const robggm::DataMatrix data = robggm::sample_clean(model, 120, 22);
  const robggm::CovEstimate S = robggm::psd_project(
      robggm::assemble_cov(data, robggm::EstimatorSpec::parse("sample")), 0.0);
  const int target = 7;
  const double lambda = robggm::lambda_for_target_edges(S, target, 1e-4, 1e-8);
  CHECK(lambda > 0.0);
  const robggm::PrecisionEstimate est = robggm::glasso(S, lambda, 1e-6);
  const auto edges = robggm::edges_from_precision(est);
  const int count = static_cast<int>(edges.pairs.size());
  CHECK(count >= target - 1);
  CHECK(count <= target + 1);
}

TEST_CASE("roc files round trip") {
  fs::remove_all("./test_tmp_harness_roc");
  fs::create_directories("./test_tmp_harness_roc");
  ExperimentConfig cfg = small_cv2_config();
  cfg.selection = SelectionMode::fixed_grid_roc;
  cfg.lambda_count = 4;
  cfg.replicates = 2;
  const RunResult r = run_campaign(cfg);
  const std::string path = "./test_tmp_harness_roc/roc.csv";
  robggm::write_roc_csv(r.roc, path);
  const std::map<std::string, robggm::RocCurve> back = robggm::read_roc_csv(path);
  REQUIRE(back.size() == r.roc.size());
  for (const auto& [tag, curve] : r.roc) {
    const robggm::RocCurve& rb = back.at(tag);
    REQUIRE(rb.points.size() == curve.points.size());
    CHECK(rb.auc == curve.auc);
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      CHECK(rb.points[i].lambda == curve.points[i].lambda);
      CHECK(rb.points[i].fpr == curve.points[i].fpr);
      CHECK(rb.points[i].tpr == curve.points[i].tpr);
    }
  }
  fs::remove_all("./test_tmp_harness_roc");
}

TEST_SUITE_END();
