#include "core/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "core/errors.hpp"

namespace robggm {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    fail(ErrorCode::config, "config key '" + key + "': expected a number, got '" + value + "'");
  return v;
}

long long parse_int(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long long v = std::strtoll(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0')
    fail(ErrorCode::config, "config key '" + key + "': expected an integer, got '" + value + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  fail(ErrorCode::config, "config key '" + key + "': expected a boolean, got '" + value + "'");
}

}  // namespace

std::string selection_name(SelectionMode mode) {
  switch (mode) {
    case SelectionMode::cv2: return "cv2";
    case SelectionMode::stars: return "stars";
    case SelectionMode::fixed_grid_roc: return "fixed-grid-roc";
  }
  fail(ErrorCode::internal, "selection_name: unknown mode");
}

std::string graph_method_name(GraphMethod method) {
  return method == GraphMethod::glasso ? "glasso" : "nodewise";
}

void apply_config_key(ExperimentConfig& cfg, const std::string& key,
                      const std::string& value) {
  if (key == "graph") cfg.graph = parse_graph_kind(value);
  else if (key == "p") cfg.p = static_cast<int>(parse_int(key, value));
  else if (key == "n") cfg.n = static_cast<int>(parse_int(key, value));
  else if (key == "eps") cfg.eps = parse_real(key, value);
  else if (key == "scenario") {
    if (value == "asym" || value == "asymmetric") cfg.symmetric_contamination = false;
    else if (value == "sym" || value == "symmetric") cfg.symmetric_contamination = true;
    else fail(ErrorCode::config, "scenario must be 'asym' or 'sym', got '" + value + "'");
  } else if (key == "contam_mean") cfg.contam_mean = parse_real(key, value);
  else if (key == "contam_sd") cfg.contam_sd = parse_real(key, value);
  else if (key == "estimators") {
    cfg.estimators.clear();
    for (const std::string& tag : split_list(value))
      cfg.estimators.push_back(EstimatorSpec::parse(tag));
  } else if (key == "graph_method") {
    if (value == "glasso") cfg.graph_method = GraphMethod::glasso;
    else if (value == "nodewise") cfg.graph_method = GraphMethod::nodewise;
    else fail(ErrorCode::config, "graph_method must be 'glasso' or 'nodewise'");
  } else if (key == "edge_rule") {
    if (value == "and") cfg.edge_rule = EdgeRule::and_rule;
    else if (value == "or") cfg.edge_rule = EdgeRule::or_rule;
    else fail(ErrorCode::config, "edge_rule must be 'and' or 'or'");
  } else if (key == "selection") {
    if (value == "cv2") cfg.selection = SelectionMode::cv2;
    else if (value == "stars") cfg.selection = SelectionMode::stars;
    else if (value == "fixed-grid-roc" || value == "roc")
      cfg.selection = SelectionMode::fixed_grid_roc;
    else fail(ErrorCode::config, "selection must be cv2, stars, or fixed-grid-roc");
  } else if (key == "replicates") cfg.replicates = static_cast<int>(parse_int(key, value));
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "lambda_count") cfg.lambda_count = static_cast<int>(parse_int(key, value));
  else if (key == "lambda_ratio") cfg.lambda_ratio = parse_real(key, value);
  else if (key == "stars_subsamples")
    cfg.stars_subsamples = static_cast<int>(parse_int(key, value));
  else if (key == "stars_cut") cfg.stars_cut = parse_real(key, value);
  else if (key == "glasso_tol") cfg.glasso_tol = parse_real(key, value);
  else if (key == "zero_tol") cfg.zero_tol = parse_real(key, value);
  else if (key == "cv_symmetric") cfg.cv_symmetric = parse_bool(key, value);
  else if (key == "threads") cfg.threads = static_cast<int>(parse_int(key, value));
  else if (key == "out") cfg.out_dir = value;
  else fail(ErrorCode::config, "unknown config key '" + key + "'");
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.resize(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') continue;  // section header
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::config, "config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    apply_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig parse_config_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::config, std::string("JSON config: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::config, "JSON config must be an object");
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    std::string v;
    if (value.is_string()) v = value.get<std::string>();
    else if (value.is_boolean()) v = value.get<bool>() ? "true" : "false";
    else if (value.is_number_integer()) v = std::to_string(value.get<long long>());
    else if (value.is_number()) {
      std::ostringstream os;
      os.precision(17);
      os << value.get<double>();
      v = os.str();
    } else if (value.is_array() && key == "estimators") {
      std::string joined;
      for (const auto& item : value) {
        if (!item.is_string())
          fail(ErrorCode::config, "JSON config: estimators must be strings");
        if (!joined.empty()) joined += ",";
        joined += item.get<std::string>();
      }
      v = joined;
    } else {
      fail(ErrorCode::config, "JSON config: unsupported value for key '" + key + "'");
    }
    apply_config_key(cfg, key, v);
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{' ? parse_config_json(text) : parse_config_text(text);
  }
  fail(ErrorCode::config, "config '" + path + "' is empty");
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.p < 2) fail(ErrorCode::config, "p must be >= 2");
  if (cfg.n < 3) fail(ErrorCode::config, "n must be >= 3");
  if (!(cfg.eps >= 0.0 && cfg.eps <= 1.0)) fail(ErrorCode::config, "eps must lie in [0,1]");
  if (cfg.estimators.empty()) fail(ErrorCode::config, "estimator list is empty");
  if (cfg.replicates < 1) fail(ErrorCode::config, "replicates must be >= 1");
  if (cfg.lambda_count < 2) fail(ErrorCode::config, "lambda_count must be >= 2");
  if (!(cfg.lambda_ratio > 0.0 && cfg.lambda_ratio < 1.0))
    fail(ErrorCode::config, "lambda_ratio must lie in (0,1)");
  if (cfg.stars_subsamples < 2) fail(ErrorCode::config, "stars_subsamples must be >= 2");
  if (!(cfg.stars_cut > 0.0 && cfg.stars_cut < 0.5))
    fail(ErrorCode::config, "stars_cut must lie in (0,0.5)");
  if (cfg.threads < 1) fail(ErrorCode::config, "threads must be >= 1");
  if (cfg.selection == SelectionMode::cv2 && cfg.graph_method != GraphMethod::glasso)
    fail(ErrorCode::config, "cv2 selection applies to graph_method=glasso");
  if (cfg.selection == SelectionMode::stars && cfg.graph_method != GraphMethod::nodewise)
    fail(ErrorCode::config, "stars selection applies to graph_method=nodewise");
  for (const auto& est : cfg.estimators)
    if (est.method == Method::gamma && !(est.gamma > 0.0))
      fail(ErrorCode::config, "gamma estimators need gamma > 0");
}

}  // namespace robggm
