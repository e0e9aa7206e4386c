#include <filesystem>
#include <string>

#include "core/config.hpp"
#include "core/csvio.hpp"
#include "core/errors.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

using robggm::apply_config_key;
using robggm::EdgeRule;
using robggm::ExperimentConfig;
using robggm::GraphKind;
using robggm::GraphMethod;
using robggm::load_config_file;
using robggm::parse_config_json;
using robggm::parse_config_text;
using robggm::SelectionMode;
using robggm::validate_config;

TEST_SUITE_BEGIN("config");

TEST_CASE("text format accepts comments and sections") {
  const std::string text =
      "# campaign setup\n"
      "[model]\n"
      "graph = hub\n"
      "p = 40\n"
      "n = 150\n"
      "eps = 0.25            ; trailing comment\n"
      "scenario = sym\n"
      "contam_mean = 8\n"
      "contam_sd = 0.5\n"
      "\n"
      "[estimation]\n"
      "estimators = gamma@0.1, kendall\n"
      "graph_method = nodewise\n"
      "edge_rule = or\n"
      "selection = stars\n"
      "replicates = 5\n"
      "seed = 99\n"
      "lambda_count = 12\n"
      "lambda_ratio = 0.1\n"
      "stars_subsamples = 7\n"
      "stars_cut = 0.15\n"
      "glasso_tol = 1e-5\n"
      "zero_tol = 1e-9\n"
      "cv_symmetric = true\n"
      "threads = 2\n"
      "out = ./somewhere\n";
  const ExperimentConfig cfg = parse_config_text(text);
  CHECK(cfg.graph == GraphKind::hub);
  CHECK(cfg.p == 40);
  CHECK(cfg.n == 150);
  CHECK(cfg.eps == 0.25);
  CHECK(cfg.symmetric_contamination);
  CHECK(cfg.contam_mean == 8.0);
  CHECK(cfg.contam_sd == 0.5);
  REQUIRE(cfg.estimators.size() == 2);
  CHECK(cfg.estimators[0].tag() == "gamma@0.1");
  CHECK(cfg.estimators[1].tag() == "kendall");
  CHECK(cfg.graph_method == GraphMethod::nodewise);
  CHECK(cfg.edge_rule == EdgeRule::or_rule);
  CHECK(cfg.selection == SelectionMode::stars);
  CHECK(cfg.replicates == 5);
  CHECK(cfg.seed == 99);
  CHECK(cfg.lambda_count == 12);
  CHECK(cfg.lambda_ratio == 0.1);
  CHECK(cfg.stars_subsamples == 7);
  CHECK(cfg.stars_cut == 0.15);
  CHECK(cfg.glasso_tol == 1e-5);
  CHECK(cfg.zero_tol == 1e-9);
  CHECK(cfg.cv_symmetric);
  CHECK(cfg.threads == 2);
  CHECK(cfg.out_dir == "./somewhere");
}

TEST_CASE("json and text parses agree") {
  const std::string text =
      "graph = random\n"
      "p = 30\n"
      "eps = 0.05\n"
      "estimators = gamma@0.5\n"
      "selection = cv2\n"
      "replicates = 3\n";
  const std::string json =
      "{\"graph\": \"random\", \"p\": 30, \"eps\": 0.05,"
      " \"estimators\": \"gamma@0.5\", \"selection\": \"cv2\", \"replicates\": 3}";
  const ExperimentConfig a = parse_config_text(text);
  const ExperimentConfig b = parse_config_json(json);
  CHECK(a.graph == b.graph);
  CHECK(a.p == b.p);
  CHECK(a.eps == b.eps);
  CHECK(a.estimators[0].tag() == b.estimators[0].tag());
  CHECK(a.selection == b.selection);
  CHECK(a.replicates == b.replicates);
}

TEST_CASE("defaults survive an empty config") {
  const ExperimentConfig cfg = parse_config_text("# nothing here\n");
  CHECK(cfg.graph == GraphKind::chain);
  CHECK(cfg.p == 50);
  CHECK(cfg.n == 200);
  CHECK(cfg.eps == 0.0);
  CHECK(cfg.replicates == 20);
  CHECK(cfg.selection == SelectionMode::cv2);
  CHECK(cfg.graph_method == GraphMethod::glasso);
  REQUIRE(cfg.estimators.size() == 1);
  CHECK(cfg.estimators[0].tag() == "gamma@0.3");
  CHECK(cfg.out_dir == "results");
}

TEST_CASE("selection names parse including the roc alias") {
  ExperimentConfig cfg;
  apply_config_key(cfg, "selection", "roc");
  CHECK(cfg.selection == SelectionMode::fixed_grid_roc);
  apply_config_key(cfg, "selection", "fixed-grid-roc");
  CHECK(cfg.selection == SelectionMode::fixed_grid_roc);
  CHECK(robggm::selection_name(SelectionMode::fixed_grid_roc) == "fixed-grid-roc");
  apply_config_key(cfg, "selection", "stars");
  CHECK(cfg.selection == SelectionMode::stars);
}

TEST_CASE("scenario accepts the two contamination shapes") {
  ExperimentConfig cfg;
  apply_config_key(cfg, "scenario", "sym");
  CHECK(cfg.symmetric_contamination);
  apply_config_key(cfg, "scenario", "asym");
  CHECK_FALSE(cfg.symmetric_contamination);
  CHECK_THROWS_AS(apply_config_key(cfg, "scenario", "both"), robggm::Error);
}

TEST_CASE("unknown keys and bad values are rejected") {
  ExperimentConfig cfg;
  CHECK_THROWS_AS(apply_config_key(cfg, "bandwidth", "3"), robggm::Error);
  CHECK_THROWS_AS(apply_config_key(cfg, "p", "many"), robggm::Error);
  CHECK_THROWS_AS(apply_config_key(cfg, "eps", "0.x"), robggm::Error);
  CHECK_THROWS_AS(apply_config_key(cfg, "graph", "lattice"), robggm::Error);
  CHECK_THROWS_AS(apply_config_key(cfg, "estimators", "gamma@zero"), robggm::Error);
  CHECK_THROWS_AS(apply_config_key(cfg, "edge_rule", "xor"), robggm::Error);
  CHECK_THROWS_AS(apply_config_key(cfg, "cv_symmetric", "maybe"), robggm::Error);
  CHECK_THROWS_AS((void)parse_config_text("p\n"), robggm::Error);
  CHECK_THROWS_AS((void)parse_config_json("{\"p\": 30"), robggm::Error);
}

TEST_CASE("cross-field validation enforces method pairings") {
  ExperimentConfig cfg;
  cfg.selection = SelectionMode::cv2;
  cfg.graph_method = GraphMethod::nodewise;
  CHECK_THROWS_AS(validate_config(cfg), robggm::Error);
  cfg.selection = SelectionMode::stars;
  cfg.graph_method = GraphMethod::glasso;
  CHECK_THROWS_AS(validate_config(cfg), robggm::Error);
  cfg.graph_method = GraphMethod::nodewise;
  CHECK_NOTHROW(validate_config(cfg));
  cfg.selection = SelectionMode::fixed_grid_roc;
  cfg.graph_method = GraphMethod::glasso;
  CHECK_NOTHROW(validate_config(cfg));

  cfg.replicates = 0;
  CHECK_THROWS_AS(validate_config(cfg), robggm::Error);
  cfg.replicates = 1;
  cfg.estimators.clear();
  CHECK_THROWS_AS(validate_config(cfg), robggm::Error);
  cfg.estimators = {robggm::EstimatorSpec{}};
  cfg.eps = 1.5;
  CHECK_THROWS_AS(validate_config(cfg), robggm::Error);
}

TEST_CASE("files load with format detection") {
  const fs::path dir("./test_tmp_config");
  fs::remove_all(dir);
  fs::create_directories(dir);
  robggm::write_text_file((dir / "a.cfg").string(), "p = 25\nn = 80\n");
  robggm::write_text_file((dir / "b.json").string(), "  {\"p\": 25, \"n\": 80}");
  const ExperimentConfig a = load_config_file((dir / "a.cfg").string());
  const ExperimentConfig b = load_config_file((dir / "b.json").string());
  CHECK(a.p == 25);
  CHECK(b.p == 25);
  CHECK(a.n == b.n);
  CHECK_THROWS_AS((void)load_config_file((dir / "missing.cfg").string()), robggm::Error);
  fs::remove_all(dir);
}

TEST_SUITE_END();
