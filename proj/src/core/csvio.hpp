#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace robggm {

// All emitted numbers use "%.17g" (shortest round-trippable form for IEEE
// doubles is covered by 17 significant digits), '.' decimal separator, '\n'
// line endings. Identical inputs therefore produce byte-identical files.
std::string format_double(double v);

void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path,
                      const std::vector<std::string>& header = {});

// Rectangular numeric CSV. With has_header, the first row supplies column
// names. Ragged rows or non-numeric fields raise a parse error naming the
// line.
DataMatrix read_matrix_csv(const std::string& path, bool has_header);

// Edge-list text: one "i j" pair per line, 1-based, sorted. First line is a
// "p <dim>" header so the universe is recoverable.
void write_edges(const EdgeSet& edges, const std::string& path);
EdgeSet read_edges(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace robggm
