#include "algnn/frechet.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace algnn {

FrechetApplication polynomial_frechet(const PolynomialFilter& p, const ShiftOperator& s,
                                      const Matrix& t) {
  const Eigen::Index n = s.dim();
  require(t.rows() == n && t.cols() == n,
          "polynomial_frechet: direction must match the shift dimension");
  require(all_finite(t), "polynomial_frechet: direction has non-finite entries");
  const int degree = p.degree();
  require(degree <= 32, "polynomial_frechet: degree above 32 is unsupported");

  FrechetApplication out;
  out.matrix = Matrix::Zero(n, n);
  if (degree >= 1) {
    // powers[r] = S^r for r = 0..K-1; left[r] = S^r * T.
    std::vector<Matrix> powers;
    powers.reserve(static_cast<std::size_t>(degree));
    powers.push_back(Matrix::Identity(n, n));
    for (int r = 1; r < degree; ++r) powers.push_back(powers.back() * s.matrix());
    std::vector<Matrix> left;
    left.reserve(powers.size());
    for (const Matrix& pw : powers) left.push_back(pw * t);

    const auto& h = p.coefficients();
    for (int k = 1; k <= degree; ++k) {
      if (h[static_cast<std::size_t>(k)] == 0.0) continue;
      Matrix term = Matrix::Zero(n, n);
      for (int r = 0; r < k; ++r)
        term += left[static_cast<std::size_t>(r)] *
                powers[static_cast<std::size_t>(k - 1 - r)];
      out.matrix += h[static_cast<std::size_t>(k)] * term;
    }
  }
  out.norm = operator_norm(out.matrix);
  return out;
}

double filter_deviation(const PolynomialFilter& p, const ShiftOperator& s,
                        const ShiftOperator& s_tilde) {
  require(s.dim() == s_tilde.dim(), "filter_deviation: dimension mismatch");
  return operator_norm(filter_matrix(p, s) - filter_matrix(p, s_tilde));
}

double taylor_remainder_budget(const PolynomialFilter& p, const ShiftOperator& s,
                               const ShiftOperator& s_tilde) {
  require(s.dim() == s_tilde.dim(), "taylor_remainder_budget: dimension mismatch");
  const double radius = std::max(s.norm(), s_tilde.norm());
  const auto& h = p.coefficients();
  double budget = 0.0;
  double radius_pow = 1.0;  // radius^{k-2}, with 0^0 = 1
  for (int k = 2; k <= p.degree(); ++k) {
    budget += std::abs(h[static_cast<std::size_t>(k)]) * 0.5 * k * (k - 1) * radius_pow;
    radius_pow *= radius;
  }
  return budget;
}

FrechetExpansionRecord frechet_expansion_check(const PolynomialFilter& p,
                                               const ShiftOperator& s,
                                               const PerturbationModel& m,
                                               double quadratic_budget) {
  require(std::isfinite(quadratic_budget) && quadratic_budget >= 0.0,
          "frechet_expansion_check: budget must be a nonnegative scalar");
  const ShiftOperator s_tilde = perturbed_shift(s, m);
  const Matrix t = perturbation_matrix(s, m);
  const double t_norm = operator_norm(t);

  FrechetExpansionRecord rec;
  rec.lhs = filter_deviation(p, s, s_tilde);
  rec.first_order = polynomial_frechet(p, s, t).norm;
  rec.passed = rec.lhs <= rec.first_order + quadratic_budget * t_norm * t_norm;
  return rec;
}

}  // namespace algnn
