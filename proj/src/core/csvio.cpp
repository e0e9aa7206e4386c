#include "core/csvio.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace robggm {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) fail(ErrorCode::io, "write to '" + path + "' failed");
}

void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path,
                      const std::vector<std::string>& header) {
  std::ostringstream out;
  if (!header.empty()) {
    if (static_cast<int>(header.size()) != m.cols())
      fail(ErrorCode::invalid_argument, "write_matrix_csv: header width mismatch");
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (j) out << ',';
      out << header[j];
    }
    out << '\n';
  }
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

DataMatrix read_matrix_csv(const std::string& path, bool has_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + path + "'");

  DataMatrix data;
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (has_header && line_no == 1) {
      data.column_names = fields;
      width = fields.size();
      continue;
    }
    if (width == 0) width = fields.size();
    if (fields.size() != width)
      fail(ErrorCode::parse, path + ": ragged row at line " + std::to_string(line_no));
    std::vector<double> row(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const std::string& f = fields[j];
      char* end = nullptr;
      row[j] = std::strtod(f.c_str(), &end);
      if (end == f.c_str() || *end != '\0')
        fail(ErrorCode::parse,
             path + ": non-numeric cell at line " + std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorCode::parse, path + ": no data rows");

  data.values.resize(static_cast<int>(rows.size()), static_cast<int>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j)
      data.values(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  return data;
}

void write_edges(const EdgeSet& edges, const std::string& path) {
  std::ostringstream out;
  out << "p " << edges.p << '\n';
  for (const auto& [i, j] : edges.pairs) out << i << ' ' << j << '\n';
  write_text_file(path, out.str());
}

EdgeSet read_edges(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + path + "'");
  EdgeSet edges;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line_no == 1) {
      std::string tag;
      if (!(ls >> tag >> edges.p) || tag != "p" || edges.p < 2)
        fail(ErrorCode::parse, path + ": expected 'p <dim>' header on line 1");
      continue;
    }
    int i = 0, j = 0;
    if (!(ls >> i >> j))
      fail(ErrorCode::parse, path + ": bad edge at line " + std::to_string(line_no));
    edges.add(i, j);
  }
  if (edges.p == 0) fail(ErrorCode::parse, path + ": missing 'p <dim>' header");
  edges.sort_and_dedup();
  return edges;
}

}  // namespace robggm
