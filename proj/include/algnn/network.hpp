#pragma once

#include "algnn/filter_class.hpp"
#include "algnn/perturbation.hpp"
#include "algnn/polynomial_filter.hpp"
#include "algnn/shift_operator.hpp"
#include "algnn/types.hpp"

#include <vector>

namespace algnn {

enum class NonlinearityKind { ReLU, Abs, Tanh, LeakyReLU };

/// Pointwise Lipschitz map with zero as a fixed point.
class Nonlinearity {
 public:
  static Nonlinearity relu();
  static Nonlinearity abs();
  static Nonlinearity tanh();
  static Nonlinearity leaky_relu(double slope);

  NonlinearityKind kind() const { return kind_; }
  double slope() const { return slope_; }
  double lipschitz() const { return lipschitz_; }

  double operator()(double a) const;
  Signal apply(const Signal& x) const;

 private:
  Nonlinearity(NonlinearityKind kind, double slope, double lipschitz)
      : kind_(kind), slope_(slope), lipschitz_(lipschitz) {}

  NonlinearityKind kind_;
  double slope_;
  double lipschitz_;
};

/// Linear pooling stage with operator norm <= 1 after construction.
class PoolingMap {
 public:
  explicit PoolingMap(Matrix matrix);

  static PoolingMap identity(Eigen::Index n);
  // Contiguous blocks averaged with unit-Euclidean-norm rows (entries
  // 1/sqrt(block size)); disjoint supports give norm exactly 1.
  static PoolingMap block_average(const std::vector<Eigen::Index>& block_sizes);

  const Matrix& matrix() const { return matrix_; }
  double norm() const { return norm_; }
  Eigen::Index in_dim() const { return matrix_.cols(); }
  Eigen::Index out_dim() const { return matrix_.rows(); }

  Signal apply(const Signal& x) const;

 private:
  Matrix matrix_;
  double norm_;
};

// Near-equal contiguous split of n_in into n_out blocks.
std::vector<Eigen::Index> even_blocks(Eigen::Index n_in, Eigen::Index n_out);

/// One processing stage: filter bank on a shift, pointwise map, pooling.
/// c = ||P|| * Lip(eta) bounds the composed sigma; b = max_k ||p_k(S)||.
struct Layer {
  ShiftOperator shift;
  std::vector<PolynomialFilter> filters;
  std::vector<FilterClassCertificate> certificates;
  Nonlinearity nonlinearity;
  PoolingMap pooling;
  double c = 0.0;
  double b = 0.0;
};

Layer make_layer(ShiftOperator shift, std::vector<PolynomialFilter> filters,
                 Nonlinearity eta, PoolingMap pooling);
// Certify the bank over a caller-chosen interval (e.g. covering a whole
// shift family) instead of the layer shift's own default interval.
Layer make_layer(ShiftOperator shift, std::vector<PolynomialFilter> filters,
                 Nonlinearity eta, PoolingMap pooling, const Interval& cert_interval);

struct AlgNN {
  std::vector<Layer> layers;
};

AlgNN make_network(std::vector<Layer> layers);

Signal layer_forward(const Layer& layer, const Signal& x, std::size_t filter_index);

// Sequential layer application; the plan designates one filter per layer
// (the single-feature setting of the stability analysis).
Signal network_forward(const AlgNN& net, const Signal& x,
                       const std::vector<std::size_t>& filter_plan);
Signal network_forward(const AlgNN& net, const Signal& x);  // filter 0 everywhere

// Replace each S_l by S_l + T^(l)(S_l). Filters, nonlinearities, pooling,
// and the stored b are kept nominal: the bounds are stated with the
// unperturbed B_l.
AlgNN perturb_network(const AlgNN& net, const std::vector<PerturbationModel>& ms,
                      bool symmetrize = false);

// Per-unit-input-norm deviation coefficient for one stage:
// c * (1+delta) * (l0 * sup||T|| + l1 * sup||D_T||).
double layer_bound(const Layer& layer, double delta, const FilterClassCertificate& cert,
                   double sup_t_norm, double sup_dt_norm);

/// Per-layer constituents entering the whole-network bound.
struct LayerBoundInputs {
  double delta = 0.0;
  double l0 = 0.0;
  double l1 = 0.0;
  double sup_t_norm = 0.0;
  double sup_dt_norm = 0.0;
};

// sum_l Delta_l (prod_{r=l..L} C_r)(prod_{r=l+1..L} B_r)(prod_{r<l} C_r B_r)
// with Delta_l = (1+delta_l)(l0_l sup||T|| + l1_l sup||D_T||); empty
// products are 1.
double network_bound(const AlgNN& net, const std::vector<LayerBoundInputs>& per_layer);

double network_deviation(const AlgNN& net, const AlgNN& net_tilde, const Signal& x,
                         const std::vector<std::size_t>& filter_plan);
double network_deviation(const AlgNN& net, const AlgNN& net_tilde, const Signal& x);

}  // namespace algnn
