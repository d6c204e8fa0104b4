#include "algnn/polynomial_filter.hpp"

#include <algorithm>
#include <cmath>

namespace algnn {

namespace {
constexpr double kDegreeTrimTol = 1e-14;
}

PolynomialFilter::PolynomialFilter(std::vector<double> coefficients)
    : coefficients_(std::move(coefficients)) {
  require(!coefficients_.empty(), "filter needs at least one coefficient");
  for (double h : coefficients_) require(std::isfinite(h), "filter coefficients must be finite");
  int d = static_cast<int>(coefficients_.size()) - 1;
  while (d > 0 && std::abs(coefficients_[d]) <= kDegreeTrimTol) --d;
  degree_ = d;
}

double PolynomialFilter::operator()(double lambda) const {
  double acc = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
    acc = acc * lambda + *it;
  }
  return acc;
}

PolynomialFilter PolynomialFilter::derivative() const {
  if (coefficients_.size() == 1) return PolynomialFilter({0.0});
  std::vector<double> d(coefficients_.size() - 1);
  for (size_t k = 1; k < coefficients_.size(); ++k) {
    d[k - 1] = static_cast<double>(k) * coefficients_[k];
  }
  return PolynomialFilter(std::move(d));
}

PolynomialFilter PolynomialFilter::scaled(double factor) const {
  std::vector<double> c = coefficients_;
  for (double& h : c) h *= factor;
  return PolynomialFilter(std::move(c));
}

PolynomialFilter multiply(const PolynomialFilter& p, const PolynomialFilter& q) {
  const auto& a = p.coefficients();
  const auto& b = q.coefficients();
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return PolynomialFilter(std::move(c));
}

Signal apply_filter(const PolynomialFilter& p, const ShiftOperator& s, const Signal& x) {
  require(x.size() == s.dim(), "signal dimension does not match shift operator");
  const auto& h = p.coefficients();
  Signal y = Signal::Zero(x.size());
  for (auto it = h.rbegin(); it != h.rend(); ++it) {
    y = s.matrix() * y + *it * x;
  }
  return y;
}

Matrix filter_matrix(const PolynomialFilter& p, const Matrix& s) {
  require(s.rows() == s.cols(), "filter realization needs a square matrix");
  const auto& h = p.coefficients();
  const Eigen::Index n = s.rows();
  Matrix m = Matrix::Zero(n, n);
  for (auto it = h.rbegin(); it != h.rend(); ++it) {
    m = m * s + *it * Matrix::Identity(n, n);
  }
  return m;
}

Matrix filter_matrix(const PolynomialFilter& p, const ShiftOperator& s) {
  return filter_matrix(p, s.matrix());
}

std::vector<double> frequency_response(const PolynomialFilter& p,
                                       const std::vector<double>& lambdas) {
  std::vector<double> out(lambdas.size());
  for (size_t i = 0; i < lambdas.size(); ++i) {
    require(std::isfinite(lambdas[i]), "frequency response needs finite lambda");
    out[i] = p(lambdas[i]);
  }
  return out;
}

double filter_operator_norm(const PolynomialFilter& p, const ShiftOperator& s) {
  if (s.symmetric()) {
    const Spectrum& spec = s.spectrum();
    double best = 0.0;
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
      best = std::max(best, std::abs(p(spec.eigenvalues(i))));
    }
    return best;
  }
  return operator_norm(filter_matrix(p, s));
}

}  // namespace algnn
