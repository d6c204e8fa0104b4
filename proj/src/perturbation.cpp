#include "algnn/perturbation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <random>
#include <vector>

namespace algnn {

namespace {

void warn(const std::string& msg) { std::cerr << "warning: " << msg << "\n"; }

// Rank indices by descending magnitude, ties broken by descending value.
// Used for both the lambda and the mu side so the pairing is reproducible.
std::vector<Eigen::Index> magnitude_order(const Vector& v) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ma = std::abs(v[a]);
    const double mb = std::abs(v[b]);
    if (ma != mb) return ma > mb;
    return v[a] > v[b];
  });
  return idx;
}

}  // namespace

PerturbationModel::PerturbationModel(double epsilon, Matrix t1)
    : epsilon_(epsilon), t1_(std::move(t1)) {
  require(std::isfinite(epsilon_) && epsilon_ >= 0.0,
          "perturbation: epsilon must be a nonnegative finite scalar");
  require(t1_.rows() == t1_.cols(), "perturbation: T1 must be square");
  require(t1_.rows() >= 1, "perturbation: T1 must be at least 1x1");
  require(all_finite(t1_), "perturbation: T1 has non-finite entries");
  require(is_symmetric(t1_), "perturbation: T1 must be symmetric");
  t1_norm_ = operator_norm(t1_);
  require(t1_norm_ < 1.0, "perturbation: ||T1|| >= 1 is outside the model");
  if (t1_norm_ >= 0.5) {
    warn("perturbation: ||T1|| = " + std::to_string(t1_norm_) +
         " >= 0.5; first-order bounds may be loose");
  }
}

PerturbationModel PerturbationModel::zero(Eigen::Index n) {
  return PerturbationModel(0.0, Matrix::Zero(n, n));
}

Matrix make_random_t1(int n, double norm, std::uint64_t seed) {
  require(n >= 1, "make_random_t1: n must be positive");
  require(std::isfinite(norm) && norm > 0.0 && norm < 1.0,
          "make_random_t1: target norm must lie in (0, 1)");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = gauss(rng);
  Matrix t1 = 0.5 * (g + g.transpose());
  double current = operator_norm(t1);
  if (current == 0.0) {  // essentially impossible, but keep the scale exact
    t1.setIdentity();
    current = 1.0;
  }
  t1 *= norm / current;
  return t1;
}

Matrix make_commuting_t1(const ShiftOperator& s, double norm, std::uint64_t seed) {
  require(std::isfinite(norm) && norm > 0.0 && norm < 1.0,
          "make_commuting_t1: target norm must lie in (0, 1)");
  const Spectrum& spec = s.spectrum();
  const Eigen::Index n = spec.eigenvalues.size();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector draw(n);
  for (Eigen::Index i = 0; i < n; ++i) draw[i] = gauss(rng);

  // Assign the largest-|mu| draw to the largest-|lambda| eigenvector, etc.
  // The pairing in commutation_factor then reconstructs exactly this
  // operator as T_c1, leaving P1 = 0 up to roundoff.
  const std::vector<Eigen::Index> lam_order = magnitude_order(spec.eigenvalues);
  const std::vector<Eigen::Index> mu_order = magnitude_order(draw);
  Vector mu(n);
  for (std::size_t r = 0; r < lam_order.size(); ++r)
    mu[lam_order[r]] = draw[mu_order[r]];

  Matrix t1 = spec.eigenvectors * mu.asDiagonal() * spec.eigenvectors.transpose();
  t1 = 0.5 * (t1 + t1.transpose()).eval();  // kill roundoff asymmetry (no aliasing)
  double current = operator_norm(t1);
  if (current == 0.0) {
    t1 = Matrix::Identity(n, n);
    current = 1.0;
  }
  t1 *= norm / current;
  return t1;
}

Matrix perturbation_matrix(const ShiftOperator& s, const PerturbationModel& m,
                           bool symmetrize) {
  require(s.dim() == m.dim(), "perturbation: dimension mismatch with shift");
  const Matrix& sm = s.matrix();
  Matrix relative = m.t1() * sm;
  // .eval() breaks the aliasing between relative and its transpose
  if (symmetrize) relative = 0.5 * (relative + relative.transpose()).eval();
  Matrix t = relative;
  t.diagonal().array() += m.epsilon();
  return t;
}

ShiftOperator perturbed_shift(const ShiftOperator& s, const PerturbationModel& m,
                              bool symmetrize) {
  return ShiftOperator(s.matrix() + perturbation_matrix(s, m, symmetrize),
                       ShiftKind::Custom);
}

double perturbation_norm(const ShiftOperator& s, const PerturbationModel& m,
                         bool symmetrize) {
  return operator_norm(perturbation_matrix(s, m, symmetrize));
}

double perturbation_frechet_norm(const PerturbationModel& m) { return m.t1_norm(); }

CommutationAnalysis commutation_factor(const ShiftOperator& s, const Matrix& t1) {
  require(t1.rows() == t1.cols() && t1.rows() == s.dim(),
          "commutation_factor: T1 must match the shift dimension");
  require(all_finite(t1), "commutation_factor: T1 has non-finite entries");
  require(is_symmetric(t1), "commutation_factor: T1 must be symmetric");

  const Eigen::Index n = s.dim();
  CommutationAnalysis out;
  out.t_c1 = Matrix::Zero(n, n);
  out.p1 = Matrix::Zero(n, n);

  const double t1_norm = operator_norm(t1);
  if (t1_norm == 0.0) return out;  // nothing to decompose, delta = 0

  const Spectrum& spec = s.spectrum();

  Eigen::SelfAdjointEigenSolver<Matrix> es(t1);
  if (es.info() != Eigen::Success)
    throw NumericalError("commutation_factor: eigendecomposition of T1 failed");
  const Vector mu = es.eigenvalues();

  const std::vector<Eigen::Index> lam_order = magnitude_order(spec.eigenvalues);
  const std::vector<Eigen::Index> mu_order = magnitude_order(mu);

  const double lam_max = std::abs(spec.eigenvalues[lam_order[0]]);
  const double tie_tol = 1e-9 * (1.0 + lam_max);
  for (std::size_t r = 0; r + 1 < lam_order.size(); ++r) {
    const double a = std::abs(spec.eigenvalues[lam_order[r]]);
    const double b = std::abs(spec.eigenvalues[lam_order[r + 1]]);
    if (a - b <= tie_tol) out.degenerate_pairing = true;
  }

  // T_c1 carries T1's eigenvalues on S's eigenvectors, rank-matched.
  for (std::size_t r = 0; r < lam_order.size(); ++r) {
    const Vector u = spec.eigenvectors.col(lam_order[r]);
    out.t_c1 += mu[mu_order[r]] * (u * u.transpose());
  }

  // Minimum-norm P1 from S*P1 = S*T1 - T_c1*S via the spectral pseudoinverse.
  const Matrix rhs = s.matrix() * t1 - out.t_c1 * s.matrix();
  const double rcond = 1e-12;
  Vector inv(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lam = spec.eigenvalues[i];
    inv[i] = std::abs(lam) > rcond * lam_max ? 1.0 / lam : 0.0;
  }
  out.p1 = spec.eigenvectors * inv.asDiagonal() * spec.eigenvectors.transpose() * rhs;

  out.residual = operator_norm(s.matrix() * out.p1 - rhs);
  const double residual_scale = s.norm() * t1_norm;
  if (out.residual > 1e-6 * residual_scale) {
    warn("commutation_factor: decomposition residual " +
         std::to_string(out.residual) + " exceeds 1e-6 * ||S|| * ||T1||; S is " +
         "rank-deficient in a direction excited by T1");
  }

  out.delta = operator_norm(out.p1) / t1_norm;
  return out;
}

}  // namespace algnn
