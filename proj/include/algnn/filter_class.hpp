#pragma once

#include "algnn/polynomial_filter.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace algnn {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Interval around the spectrum of S with a 5% spread margin, the default
// certification domain (perturbed spectra stay inside with margin).
Interval spectral_interval(const ShiftOperator& s, double margin_fraction = 0.05);
Interval spectral_interval(const std::vector<ShiftOperator>& family,
                           double margin_fraction = 0.05);

/// Certified Lipschitz (L0) and integral-Lipschitz (L1) constants of a
/// filter over a stated interval: L0 = max |p'|, L1 = max |lambda p'|.
struct FilterClassCertificate {
  double l0 = 0.0;
  double l1 = 0.0;
  Interval interval;
};

// Exact interval maxima via companion-matrix roots of the derivative
// polynomials (p'' for L0, p' + lambda p'' for L1), plus endpoints.
FilterClassCertificate certify_class(const PolynomialFilter& p, Interval interval);

// Real roots of the polynomial within [lo, hi], companion-matrix eigenvalues
// polished by Newton steps on the full coefficient set.
std::vector<double> real_roots_in_interval(const std::vector<double>& coefficients,
                                           double lo, double hi);

struct DesignConstraints {
  std::optional<double> l0_max;
  std::optional<double> l1_max;
};

struct DesignResult {
  PolynomialFilter filter;
  FilterClassCertificate certificate;
  bool constraints_met = true;
  int scaling_iterations = 0;
};

// Least-squares polynomial fit to (lambda, response) samples; when
// constraints are given the coefficients are shrunk by repeated 0.9 scaling
// (at most 200 rounds) until the certificate passes.
DesignResult design_filter(const std::vector<std::pair<double, double>>& target, int degree,
                           const DesignConstraints& constraints, Interval interval);

}  // namespace algnn
