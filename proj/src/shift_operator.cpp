#include "algnn/shift_operator.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace algnn {

const char* to_string(ShiftKind kind) {
  switch (kind) {
    case ShiftKind::CyclicDelay: return "cyclic-delay";
    case ShiftKind::GraphAdjacency: return "graph-adjacency";
    case ShiftKind::GraphLaplacian: return "graph-laplacian";
    case ShiftKind::GraphonKernel: return "graphon-kernel";
    case ShiftKind::Custom: return "custom";
  }
  return "unknown";
}

namespace {

bool is_normal(const Matrix& m, double tol = 1e-10) {
  const Matrix lhs = m * m.transpose();
  const Matrix rhs = m.transpose() * m;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (lhs - rhs).cwiseAbs().maxCoeff() <= tol * scale * scale;
}

}  // namespace

ShiftOperator::ShiftOperator(Matrix matrix, ShiftKind kind)
    : matrix_(std::move(matrix)),
      kind_(kind),
      cache_(std::make_shared<SpectrumCache>()) {
  require(matrix_.rows() >= 1, "shift operator must have dimension >= 1");
  require(matrix_.rows() == matrix_.cols(), "shift operator matrix must be square");
  require(all_finite(matrix_), "shift operator entries must be finite");
  symmetric_ = is_symmetric(matrix_);
  normal_ = symmetric_ || is_normal(matrix_);
  norm_ = operator_norm(matrix_);
}

const Spectrum& ShiftOperator::spectrum() const {
  std::call_once(cache_->once, [this] {
    try {
      if (!symmetric_) {
        throw std::invalid_argument(
            "spectral decomposition requires a symmetric shift operator; "
            "non-symmetric shifts (complex spectra) are limited to "
            "singular-value norm paths");
      }
      Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_);
      if (solver.info() != Eigen::Success) {
        throw NumericalError("symmetric eigendecomposition did not converge");
      }
      Spectrum spec{solver.eigenvalues(), solver.eigenvectors()};
      const Matrix recon = spec.eigenvectors * spec.eigenvalues.asDiagonal() *
                           spec.eigenvectors.transpose();
      const double residual = operator_norm(matrix_ - recon);
      if (residual > 1e-8 * std::max(1.0, norm_)) {
        throw NumericalError("eigendecomposition residual breach: " + std::to_string(residual));
      }
      const Matrix gram = spec.eigenvectors.transpose() * spec.eigenvectors;
      const Eigen::Index n = matrix_.rows();
      if ((gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-8) {
        throw NumericalError("eigenvector set is not orthonormal to 1e-8");
      }
      cache_->value = std::move(spec);
      cache_->ready = true;
    } catch (...) {
      cache_->error = std::current_exception();
    }
  });
  if (!cache_->ready) std::rethrow_exception(cache_->error);
  return cache_->value;
}

bool ShiftOperator::has_cached_spectrum() const { return cache_->ready; }

ShiftOperator build_cyclic_shift(int n) {
  require(n >= 1, "cyclic shift needs n >= 1");
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m((i + 1) % n, i) = 1.0;
  return ShiftOperator(std::move(m), ShiftKind::CyclicDelay);
}

ShiftOperator build_graph_shift(const std::vector<Edge>& edges, int n, GraphVariant variant) {
  require(n >= 1, "graph shift needs n >= 1");
  Matrix a = Matrix::Zero(n, n);
  for (const Edge& e : edges) {
    require(e.i >= 0 && e.i < n && e.j >= 0 && e.j < n, "edge index out of range");
    require(std::isfinite(e.weight), "edge weight must be finite");
    a(e.i, e.j) = e.weight;
    a(e.j, e.i) = e.weight;
  }
  switch (variant) {
    case GraphVariant::Adjacency:
      return ShiftOperator(std::move(a), ShiftKind::GraphAdjacency);
    case GraphVariant::Laplacian: {
      Matrix lap = Matrix(a.rowwise().sum().asDiagonal()) - a;
      return ShiftOperator(std::move(lap), ShiftKind::GraphLaplacian);
    }
    case GraphVariant::NormalizedAdjacency: {
      Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
      const Vector& lam = solver.eigenvalues();
      const double radius = std::max(std::abs(lam(0)), std::abs(lam(n - 1)));
      require(radius > 0.0, "normalized adjacency undefined for an empty graph");
      return ShiftOperator(a / radius, ShiftKind::GraphAdjacency);
    }
  }
  throw std::invalid_argument("unknown graph variant");
}

ShiftOperator build_graphon_shift(const std::function<double(double, double)>& kernel, int n) {
  require(n >= 1, "graphon shift needs n >= 1");
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const double xi = (i + 0.5) / n;
    for (int j = i; j < n; ++j) {
      const double xj = (j + 0.5) / n;
      const double w = kernel(xi, xj);
      require(std::isfinite(w) && w >= 0.0 && w <= 1.0,
              "graphon kernel value outside [0, 1] at sampled point");
      m(i, j) = w / n;
      m(j, i) = m(i, j);
    }
  }
  return ShiftOperator(std::move(m), ShiftKind::GraphonKernel);
}

const Spectrum& spectral_decomposition(const ShiftOperator& s) { return s.spectrum(); }

Signal apply_operator(const ShiftOperator& s, const Signal& x) {
  require(x.size() == s.dim(), "signal dimension does not match shift operator");
  return s.matrix() * x;
}

double operator_norm(const Matrix& m) {
  require(all_finite(m), "operator norm needs finite entries");
  if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace algnn
