#include "algnn/network.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace algnn {

Nonlinearity Nonlinearity::relu() {
  return Nonlinearity(NonlinearityKind::ReLU, 0.0, 1.0);
}

Nonlinearity Nonlinearity::abs() { return Nonlinearity(NonlinearityKind::Abs, 0.0, 1.0); }

Nonlinearity Nonlinearity::tanh() {
  return Nonlinearity(NonlinearityKind::Tanh, 0.0, 1.0);
}

Nonlinearity Nonlinearity::leaky_relu(double slope) {
  require(std::isfinite(slope) && slope >= 0.0,
          "leaky_relu: slope must be a nonnegative finite scalar");
  return Nonlinearity(NonlinearityKind::LeakyReLU, slope, std::max(1.0, slope));
}

double Nonlinearity::operator()(double a) const {
  switch (kind_) {
    case NonlinearityKind::ReLU:
      return a > 0.0 ? a : 0.0;
    case NonlinearityKind::Abs:
      return std::abs(a);
    case NonlinearityKind::Tanh:
      return std::tanh(a);
    case NonlinearityKind::LeakyReLU:
      return a > 0.0 ? a : slope_ * a;
  }
  throw NumericalError("nonlinearity: unknown kind");
}

Signal Nonlinearity::apply(const Signal& x) const {
  return x.unaryExpr([this](double a) { return (*this)(a); });
}

PoolingMap::PoolingMap(Matrix matrix) : matrix_(std::move(matrix)) {
  require(matrix_.rows() >= 1 && matrix_.cols() >= 1, "pooling: empty matrix");
  require(all_finite(matrix_), "pooling: non-finite entries");
  norm_ = operator_norm(matrix_);
  if (norm_ > 1.0) {  // normalize so C_l accounting stays clean
    matrix_ /= norm_;
    norm_ = 1.0;
  }
}

PoolingMap PoolingMap::identity(Eigen::Index n) {
  require(n >= 1, "pooling: dimension must be positive");
  return PoolingMap(Matrix::Identity(n, n));
}

PoolingMap PoolingMap::block_average(const std::vector<Eigen::Index>& block_sizes) {
  require(!block_sizes.empty(), "pooling: no blocks given");
  Eigen::Index n_in = 0;
  for (Eigen::Index b : block_sizes) {
    require(b >= 1, "pooling: block sizes must be positive");
    n_in += b;
  }
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(block_sizes.size()), n_in);
  Eigen::Index start = 0;
  for (std::size_t r = 0; r < block_sizes.size(); ++r) {
    const Eigen::Index b = block_sizes[r];
    m.block(static_cast<Eigen::Index>(r), start, 1, b)
        .setConstant(1.0 / std::sqrt(static_cast<double>(b)));
    start += b;
  }
  return PoolingMap(std::move(m));
}

Signal PoolingMap::apply(const Signal& x) const {
  require(x.size() == matrix_.cols(), "pooling: signal dimension mismatch");
  return matrix_ * x;
}

std::vector<Eigen::Index> even_blocks(Eigen::Index n_in, Eigen::Index n_out) {
  require(n_out >= 1 && n_out <= n_in, "even_blocks: need 1 <= n_out <= n_in");
  std::vector<Eigen::Index> blocks(static_cast<std::size_t>(n_out), n_in / n_out);
  for (Eigen::Index r = 0; r < n_in % n_out; ++r) blocks[static_cast<std::size_t>(r)]++;
  return blocks;
}

namespace {

Layer build_layer(ShiftOperator shift, std::vector<PolynomialFilter> filters,
                  Nonlinearity eta, PoolingMap pooling, const Interval& cert_interval) {
  require(!filters.empty(), "layer: filter bank must be nonempty");
  require(pooling.in_dim() == shift.dim(),
          "layer: pooling input dimension must match the shift");
  std::vector<FilterClassCertificate> certs;
  certs.reserve(filters.size());
  double b = 0.0;
  for (const PolynomialFilter& p : filters) {
    certs.push_back(certify_class(p, cert_interval));
    b = std::max(b, filter_operator_norm(p, shift));
  }
  const double c = pooling.norm() * eta.lipschitz();
  return Layer{std::move(shift), std::move(filters), std::move(certs), eta,
               std::move(pooling), c, b};
}

}  // namespace

Layer make_layer(ShiftOperator shift, std::vector<PolynomialFilter> filters,
                 Nonlinearity eta, PoolingMap pooling) {
  const Interval iv = spectral_interval(shift);
  return build_layer(std::move(shift), std::move(filters), eta, std::move(pooling), iv);
}

Layer make_layer(ShiftOperator shift, std::vector<PolynomialFilter> filters,
                 Nonlinearity eta, PoolingMap pooling, const Interval& cert_interval) {
  return build_layer(std::move(shift), std::move(filters), eta, std::move(pooling),
                     cert_interval);
}

AlgNN make_network(std::vector<Layer> layers) {
  require(!layers.empty(), "network: need at least one layer");
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    require(layers[l].pooling.out_dim() == layers[l + 1].shift.dim(),
            "network: layer " + std::to_string(l + 1) +
                " output dimension does not feed layer " + std::to_string(l + 2));
  }
  return AlgNN{std::move(layers)};
}

Signal layer_forward(const Layer& layer, const Signal& x, std::size_t filter_index) {
  require(filter_index < layer.filters.size(), "layer_forward: bad filter index");
  require(x.size() == layer.shift.dim(), "layer_forward: signal dimension mismatch");
  const Signal filtered = apply_filter(layer.filters[filter_index], layer.shift, x);
  return layer.pooling.apply(layer.nonlinearity.apply(filtered));
}

Signal network_forward(const AlgNN& net, const Signal& x,
                       const std::vector<std::size_t>& filter_plan) {
  require(filter_plan.size() == net.layers.size(),
          "network_forward: plan must name one filter per layer");
  Signal cur = x;
  for (std::size_t l = 0; l < net.layers.size(); ++l)
    cur = layer_forward(net.layers[l], cur, filter_plan[l]);
  return cur;
}

Signal network_forward(const AlgNN& net, const Signal& x) {
  return network_forward(net, x, std::vector<std::size_t>(net.layers.size(), 0));
}

AlgNN perturb_network(const AlgNN& net, const std::vector<PerturbationModel>& ms,
                      bool symmetrize) {
  require(ms.size() == net.layers.size(),
          "perturb_network: need exactly one perturbation per layer");
  AlgNN out = net;
  for (std::size_t l = 0; l < out.layers.size(); ++l) {
    // Only the shift changes; certificates, c and b stay nominal.
    out.layers[l].shift = perturbed_shift(net.layers[l].shift, ms[l], symmetrize);
  }
  return out;
}

double layer_bound(const Layer& layer, double delta, const FilterClassCertificate& cert,
                   double sup_t_norm, double sup_dt_norm) {
  require(delta >= 0.0 && sup_t_norm >= 0.0 && sup_dt_norm >= 0.0,
          "layer_bound: factors must be nonnegative");
  return layer.c * (1.0 + delta) * (cert.l0 * sup_t_norm + cert.l1 * sup_dt_norm);
}

double network_bound(const AlgNN& net, const std::vector<LayerBoundInputs>& per_layer) {
  const std::size_t L = net.layers.size();
  require(per_layer.size() == L, "network_bound: need one entry per layer");

  double total = 0.0;
  for (std::size_t l = 0; l < L; ++l) {
    const LayerBoundInputs& in = per_layer[l];
    const double delta_l =
        (1.0 + in.delta) * (in.l0 * in.sup_t_norm + in.l1 * in.sup_dt_norm);
    double prod_c = 1.0;  // C_r for r = l..L-1
    for (std::size_t r = l; r < L; ++r) prod_c *= net.layers[r].c;
    double prod_b = 1.0;  // B_r for r = l+1..L-1
    for (std::size_t r = l + 1; r < L; ++r) prod_b *= net.layers[r].b;
    double prod_cb = 1.0;  // C_r B_r for r = 0..l-1
    for (std::size_t r = 0; r < l; ++r) prod_cb *= net.layers[r].c * net.layers[r].b;
    total += delta_l * prod_c * prod_b * prod_cb;
  }
  return total;
}

namespace {

void require_same_structure(const AlgNN& a, const AlgNN& b) {
  require(a.layers.size() == b.layers.size(),
          "network_deviation: depth mismatch");
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    require(a.layers[l].shift.dim() == b.layers[l].shift.dim() &&
                a.layers[l].filters.size() == b.layers[l].filters.size() &&
                a.layers[l].pooling.out_dim() == b.layers[l].pooling.out_dim(),
            "network_deviation: structure mismatch at layer " + std::to_string(l + 1));
  }
}

}  // namespace

double network_deviation(const AlgNN& net, const AlgNN& net_tilde, const Signal& x,
                         const std::vector<std::size_t>& filter_plan) {
  require_same_structure(net, net_tilde);
  return (network_forward(net, x, filter_plan) -
          network_forward(net_tilde, x, filter_plan))
      .norm();
}

double network_deviation(const AlgNN& net, const AlgNN& net_tilde, const Signal& x) {
  return network_deviation(net, net_tilde, x,
                           std::vector<std::size_t>(net.layers.size(), 0));
}

}  // namespace algnn
