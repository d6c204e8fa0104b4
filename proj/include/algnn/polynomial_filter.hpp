#pragma once

#include "algnn/shift_operator.hpp"
#include "algnn/types.hpp"

#include <vector>

namespace algnn {

/// Algebra element p(g) = sum_k h_k g^k held as its coefficient vector,
/// h0 first. Realized on a representation as p(S).
class PolynomialFilter {
 public:
  explicit PolynomialFilter(std::vector<double> coefficients);

  const std::vector<double>& coefficients() const { return coefficients_; }

  // Degree after trimming trailing coefficients at 1e-14.
  int degree() const { return degree_; }

  // Scalar frequency response p(lambda), Horner.
  double operator()(double lambda) const;

  // Coefficient-differentiated polynomial p'.
  PolynomialFilter derivative() const;

  PolynomialFilter scaled(double factor) const;

 private:
  std::vector<double> coefficients_;
  int degree_;
};

PolynomialFilter multiply(const PolynomialFilter& p, const PolynomialFilter& q);

// p(S) x by Horner on matrix-vector products; never forms S^k.
Signal apply_filter(const PolynomialFilter& p, const ShiftOperator& s, const Signal& x);

// Dense p(S), Horner on matrices.
Matrix filter_matrix(const PolynomialFilter& p, const Matrix& s);
Matrix filter_matrix(const PolynomialFilter& p, const ShiftOperator& s);

std::vector<double> frequency_response(const PolynomialFilter& p,
                                       const std::vector<double>& lambdas);

// ||p(S)|| — spectrally (max |p(lambda_i)|) for symmetric S, by SVD otherwise.
double filter_operator_norm(const PolynomialFilter& p, const ShiftOperator& s);

}  // namespace algnn
