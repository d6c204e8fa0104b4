#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace algnn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// A signal is an element of the representation space M.
using Signal = Eigen::VectorXd;

// Thrown when an eigensolver or SVD result fails its residual check.
// The CLI maps this to exit code 4.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown on malformed configs or input files. CLI exit code 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message);

bool all_finite(const Matrix& m);
bool all_finite(const Vector& v);

// Relative symmetry test: ||M - M^T||_max <= tol * max(1, ||M||_max).
bool is_symmetric(const Matrix& m, double tol = 1e-10);

}  // namespace algnn
