#include "algnn/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace algnn {

namespace {

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  return in;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

Matrix read_matrix(std::istream& in, const std::string& origin) {
  long long n = 0;
  if (!(in >> n) || n < 1) throw ConfigError(origin + ": matrix file must start with N >= 1");
  Matrix m(n, n);
  for (long long i = 0; i < n; ++i) {
    for (long long j = 0; j < n; ++j) {
      if (!(in >> m(i, j))) {
        throw ConfigError(origin + ": matrix file truncated at row " + std::to_string(i));
      }
    }
  }
  if (!m.allFinite()) throw ConfigError(origin + ": matrix entries must be finite");
  return m;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  return read_matrix(in, path);
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(m(i, j));
    }
    out << "\n";
  }
}

void write_matrix_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write file: " + path);
  write_matrix(out, m);
}

std::vector<Edge> read_edge_list(std::istream& in, const std::string& origin) {
  std::vector<Edge> edges;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r\v\f") == std::string::npos) continue;
    std::istringstream ls(line);
    Edge e;
    if (!(ls >> e.i >> e.j >> e.weight)) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'i j w'");
    }
    edges.push_back(e);
  }
  return edges;
}

std::vector<Edge> read_edge_list_file(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  return read_edge_list(in, path);
}

std::vector<double> read_filter_coefficients(std::istream& in, const std::string& origin) {
  std::vector<double> coeffs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r\v\f") == std::string::npos) continue;
    std::istringstream ls(line);
    double h = 0.0;
    if (!(ls >> h)) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected one coefficient");
    }
    if (!std::isfinite(h)) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": coefficient must be finite");
    }
    coeffs.push_back(h);
  }
  if (coeffs.empty()) throw ConfigError(origin + ": filter file holds no coefficients");
  return coeffs;
}

std::vector<double> read_filter_file(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  return read_filter_coefficients(in, path);
}

void write_filter_file(const std::string& path, const std::vector<double>& coefficients) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write file: " + path);
  for (double h : coefficients) out << format_double(h) << "\n";
}

}  // namespace algnn
