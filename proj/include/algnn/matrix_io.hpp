#pragma once

#include "algnn/shift_operator.hpp"
#include "algnn/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace algnn {

// Plain-text matrix format: first line "N", then N rows of N
// whitespace-separated decimal scalars.
Matrix read_matrix(std::istream& in, const std::string& origin = "<stream>");
Matrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const Matrix& m);
void write_matrix_file(const std::string& path, const Matrix& m);

// Edge-list format: lines "i j w" (0-based indices, decimal weight);
// blank lines and "#" comments ignored.
std::vector<Edge> read_edge_list(std::istream& in, const std::string& origin = "<stream>");
std::vector<Edge> read_edge_list_file(const std::string& path);

// Filter format: one coefficient per line, h0 first.
std::vector<double> read_filter_coefficients(std::istream& in,
                                             const std::string& origin = "<stream>");
std::vector<double> read_filter_file(const std::string& path);
void write_filter_file(const std::string& path, const std::vector<double>& coefficients);

// Round-trip-exact decimal formatting used by every writer in the artifact.
std::string format_double(double value);

}  // namespace algnn
