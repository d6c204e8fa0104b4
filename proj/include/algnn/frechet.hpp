#pragma once

#include "algnn/perturbation.hpp"
#include "algnn/polynomial_filter.hpp"
#include "algnn/shift_operator.hpp"
#include "algnn/types.hpp"

namespace algnn {

/// D_p(S){T} together with its operator norm. Linear in T.
struct FrechetApplication {
  Matrix matrix;
  double norm = 0.0;
};

// D_p(S){T} = sum_{k>=1} h_k sum_{r=0}^{k-1} S^r T S^{k-1-r}, via a
// precomputed power list (O(K^2) products; K <= 32 keeps this cheap).
FrechetApplication polynomial_frechet(const PolynomialFilter& p, const ShiftOperator& s,
                                      const Matrix& t);

// ||p(S) - p(S~)||: the uniform worst case over unit signals, so the
// per-signal deviation inequality follows for every x.
double filter_deviation(const PolynomialFilter& p, const ShiftOperator& s,
                        const ShiftOperator& s_tilde);

// Rigorous scale factor for the second-order Taylor remainder of a matrix
// polynomial on the segment [S, S~]:
//   ||p(S~) - p(S) - D_p(S){S~-S}|| <= budget * ||S~-S||^2
// with budget = sum_k |h_k| k(k-1)/2 max(||S||,||S~||)^{k-2}.
double taylor_remainder_budget(const PolynomialFilter& p, const ShiftOperator& s,
                               const ShiftOperator& s_tilde);

/// Outcome of the first-order expansion check
///   ||p(S) - p(S~)|| <= ||D_p(S){T(S)}|| + budget*||T(S)||^2.
struct FrechetExpansionRecord {
  double lhs = 0.0;
  double first_order = 0.0;
  bool passed = false;
};

FrechetExpansionRecord frechet_expansion_check(const PolynomialFilter& p,
                                               const ShiftOperator& s,
                                               const PerturbationModel& m,
                                               double quadratic_budget);

}  // namespace algnn
