#pragma once

#include "algnn/shift_operator.hpp"
#include "algnn/types.hpp"

#include <cstdint>

namespace algnn {

/// Deformation T(S) = epsilon*I + T1*S: an absolute term plus a relative
/// term driven by a symmetric operator T1 with ||T1|| << 1.
class PerturbationModel {
 public:
  PerturbationModel(double epsilon, Matrix t1);

  static PerturbationModel zero(Eigen::Index n);

  double epsilon() const { return epsilon_; }
  const Matrix& t1() const { return t1_; }
  double t1_norm() const { return t1_norm_; }
  Eigen::Index dim() const { return t1_.rows(); }

 private:
  double epsilon_;
  Matrix t1_;
  double t1_norm_;
};

// Symmetrized i.i.d. normal draw rescaled to the exact target operator norm.
// Deterministic in the seed.
Matrix make_random_t1(int n, double norm, std::uint64_t seed);

// Random operator sharing S's eigenvectors, eigenvalues ordered so the
// descending-|mu| rank matches the descending-|lambda| rank; commutes with S
// and the pairing rule reproduces it as T_c1 (delta = 0 control case).
Matrix make_commuting_t1(const ShiftOperator& s, double norm, std::uint64_t seed);

// The applied deformation epsilon*I + T1*S; with symmetrize, the relative
// term becomes (T1*S + S*T1)/2.
Matrix perturbation_matrix(const ShiftOperator& s, const PerturbationModel& m,
                           bool symmetrize = false);

// S~ = S + T(S), kind Custom. T1*S is generally non-symmetric, so bound
// evaluations on S~ stay on singular-value norms.
ShiftOperator perturbed_shift(const ShiftOperator& s, const PerturbationModel& m,
                              bool symmetrize = false);

double perturbation_norm(const ShiftOperator& s, const PerturbationModel& m,
                         bool symmetrize = false);

// ||D_T(S)||: the perturbation map is affine in S, so its Frechet derivative
// is the fixed linear map X -> T1*X with induced norm ||T1||.
double perturbation_frechet_norm(const PerturbationModel& m);

/// Decomposition S*T1 = T_c1*S + S*P1 quantifying how far T1 is from
/// commuting with S through the factor delta = ||P1|| / ||T1||.
struct CommutationAnalysis {
  Matrix t_c1;
  Matrix p1;
  double delta = 0.0;
  double residual = 0.0;
  // Set when |lambda| ranks tie within tolerance: the mu-to-u pairing inside
  // the tied cluster is arbitrary.
  bool degenerate_pairing = false;
};

CommutationAnalysis commutation_factor(const ShiftOperator& s, const Matrix& t1);

}  // namespace algnn
