#include "core/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "core/errors.hpp"

namespace robggm {

bool EdgeSet::contains(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(i, j));
}

void EdgeSet::add(int i, int j) {
  if (i == j) fail(ErrorCode::invalid_argument, "EdgeSet: self loop");
  if (i > j) std::swap(i, j);
  if (i < 1 || j > p) fail(ErrorCode::invalid_argument, "EdgeSet: index outside 1..p");
  pairs.emplace_back(i, j);
}

void EdgeSet::sort_and_dedup() {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
}

std::string EstimatorSpec::tag() const {
  switch (method) {
    case Method::gamma: {
      char buf[48];
      std::snprintf(buf, sizeof buf, "gamma@%g", gamma);
      return buf;
    }
    case Method::kendall: return "kendall";
    case Method::spearman: return "spearman";
    case Method::gauss_rank: return "gauss_rank";
    case Method::gk_qn: return "gk_qn";
    case Method::sample: return "sample";
  }
  fail(ErrorCode::internal, "EstimatorSpec: unknown method");
}

EstimatorSpec EstimatorSpec::parse(const std::string& tag) {
  EstimatorSpec spec;
  if (tag.rfind("gamma", 0) == 0) {
    spec.method = Method::gamma;
    if (tag.size() > 5) {
      if (tag[5] != '@')
        fail(ErrorCode::parse, "estimator tag '" + tag + "': expected gamma@VALUE");
      char* end = nullptr;
      spec.gamma = std::strtod(tag.c_str() + 6, &end);
      if (end == tag.c_str() + 6 || *end != '\0' || !(spec.gamma > 0.0))
        fail(ErrorCode::parse, "estimator tag '" + tag + "': bad gamma value");
    }
    return spec;
  }
  if (tag == "kendall") spec.method = Method::kendall;
  else if (tag == "spearman") spec.method = Method::spearman;
  else if (tag == "gauss_rank") spec.method = Method::gauss_rank;
  else if (tag == "gk_qn") spec.method = Method::gk_qn;
  else if (tag == "sample") spec.method = Method::sample;
  else fail(ErrorCode::parse, "unknown estimator tag '" + tag + "'");
  return spec;
}

}  // namespace robggm
