#include "algnn/filter_class.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace algnn {

namespace {

double eval_poly(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<double> differentiate(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
  return d;
}

// One Newton pass against the full (untrimmed) coefficient set recovers the
// precision lost when the companion matrix is built from trimmed coefficients.
double newton_polish(const std::vector<double>& c, const std::vector<double>& dc, double x) {
  for (int iter = 0; iter < 50; ++iter) {
    const double f = eval_poly(c, x);
    const double fp = eval_poly(dc, x);
    if (fp == 0.0 || !std::isfinite(fp)) break;
    const double step = f / fp;
    if (!std::isfinite(step)) break;
    x -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(x))) break;
  }
  return x;
}

}  // namespace

Interval spectral_interval(const ShiftOperator& s, double margin_fraction) {
  const Spectrum& spec = s.spectrum();
  const double lo = spec.eigenvalues(0);
  const double hi = spec.eigenvalues(spec.eigenvalues.size() - 1);
  const double margin = margin_fraction * (hi - lo);
  return {lo - margin, hi + margin};
}

Interval spectral_interval(const std::vector<ShiftOperator>& family, double margin_fraction) {
  require(!family.empty(), "spectral interval needs a nonempty shift family");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const ShiftOperator& s : family) {
    const Spectrum& spec = s.spectrum();
    lo = std::min(lo, spec.eigenvalues(0));
    hi = std::max(hi, spec.eigenvalues(spec.eigenvalues.size() - 1));
  }
  const double margin = margin_fraction * (hi - lo);
  return {lo - margin, hi + margin};
}

std::vector<double> real_roots_in_interval(const std::vector<double>& coefficients,
                                           double lo, double hi) {
  double max_abs = 0.0;
  for (double c : coefficients) max_abs = std::max(max_abs, std::abs(c));
  if (max_abs == 0.0) return {};

  int d = static_cast<int>(coefficients.size()) - 1;
  while (d > 0 && std::abs(coefficients[d]) <= 1e-14 * max_abs) --d;
  if (d == 0) return {};

  std::vector<double> candidates;
  if (d == 1) {
    candidates.push_back(-coefficients[0] / coefficients[1]);
  } else {
    Matrix companion = Matrix::Zero(d, d);
    for (int i = 0; i + 1 < d; ++i) companion(i + 1, i) = 1.0;
    for (int i = 0; i < d; ++i) companion(i, d - 1) = -coefficients[i] / coefficients[d];
    Eigen::EigenSolver<Matrix> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("companion matrix eigenvalue computation failed");
    }
    const auto& roots = solver.eigenvalues();
    const std::vector<double> dcoeffs = differentiate(coefficients);
    for (Eigen::Index i = 0; i < roots.size(); ++i) {
      if (std::abs(roots(i).imag()) > 1e-6 * (1.0 + std::abs(roots(i).real()))) continue;
      candidates.push_back(newton_polish(coefficients, dcoeffs, roots(i).real()));
    }
  }

  const double slack = 1e-9 * (1.0 + hi - lo);
  std::vector<double> out;
  for (double x : candidates) {
    if (!std::isfinite(x) || x < lo - slack || x > hi + slack) continue;
    out.push_back(std::clamp(x, lo, hi));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) {
                          return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a));
                        }),
            out.end());
  return out;
}

FilterClassCertificate certify_class(const PolynomialFilter& p, Interval interval) {
  require(std::isfinite(interval.lo) && std::isfinite(interval.hi) && interval.lo <= interval.hi,
          "certification interval must be finite with lo <= hi");
  FilterClassCertificate cert;
  cert.interval = interval;
  if (p.degree() == 0) return cert;

  const PolynomialFilter dp = p.derivative();
  const auto& h = p.coefficients();

  // L0: |p'| maximized at endpoints or roots of p''.
  std::vector<double> points{interval.lo, interval.hi};
  for (double x : real_roots_in_interval(differentiate(dp.coefficients()), interval.lo,
                                         interval.hi)) {
    points.push_back(x);
  }
  for (double x : points) cert.l0 = std::max(cert.l0, std::abs(dp(x)));

  // L1: |lambda p'| maximized at endpoints or roots of p' + lambda p'',
  // whose coefficients are j^2 h_j.
  std::vector<double> growth(h.size() > 1 ? h.size() - 1 : 1, 0.0);
  for (size_t j = 1; j < h.size(); ++j) {
    growth[j - 1] = static_cast<double>(j) * static_cast<double>(j) * h[j];
  }
  points = {interval.lo, interval.hi};
  for (double x : real_roots_in_interval(growth, interval.lo, interval.hi)) points.push_back(x);
  for (double x : points) cert.l1 = std::max(cert.l1, std::abs(x * dp(x)));

  return cert;
}

DesignResult design_filter(const std::vector<std::pair<double, double>>& target, int degree,
                           const DesignConstraints& constraints, Interval interval) {
  require(degree >= 0 && degree <= 32, "design degree must be in [0, 32]");
  std::vector<double> lambdas;
  for (const auto& [lam, resp] : target) {
    require(std::isfinite(lam) && std::isfinite(resp), "design target must be finite");
    lambdas.push_back(lam);
  }
  std::sort(lambdas.begin(), lambdas.end());
  const auto distinct = std::unique(lambdas.begin(), lambdas.end()) - lambdas.begin();
  require(distinct >= degree + 1, "design needs at least degree+1 distinct lambda points");

  const Eigen::Index m = static_cast<Eigen::Index>(target.size());
  Matrix vand(m, degree + 1);
  Vector rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double pw = 1.0;
    for (int k = 0; k <= degree; ++k) {
      vand(i, k) = pw;
      pw *= target[i].first;
    }
    rhs(i) = target[i].second;
  }
  Eigen::BDCSVD<Matrix> svd(vand, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vector sol = svd.solve(rhs);

  DesignResult result{PolynomialFilter(std::vector<double>(sol.data(), sol.data() + sol.size())),
                      {}, true, 0};
  result.certificate = certify_class(result.filter, interval);

  const auto met = [&](const FilterClassCertificate& cert) {
    const bool ok0 = !constraints.l0_max ||
                     cert.l0 <= *constraints.l0_max + 1e-12 * (1.0 + *constraints.l0_max);
    const bool ok1 = !constraints.l1_max ||
                     cert.l1 <= *constraints.l1_max + 1e-12 * (1.0 + *constraints.l1_max);
    return ok0 && ok1;
  };

  // Uniform scaling shrinks both certified constants linearly and preserves
  // the response shape.
  while (!met(result.certificate) && result.scaling_iterations < 200) {
    result.filter = result.filter.scaled(0.9);
    result.certificate.l0 *= 0.9;
    result.certificate.l1 *= 0.9;
    ++result.scaling_iterations;
  }
  result.certificate = certify_class(result.filter, interval);
  result.constraints_met = met(result.certificate);
  return result;
}

}  // namespace algnn
