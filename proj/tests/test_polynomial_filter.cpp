#include <doctest.h>

#include "algnn/config.hpp"
#include "algnn/polynomial_filter.hpp"
#include "algnn/shift_operator.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace algnn;

namespace {

Matrix explicit_powers(const std::vector<double>& h, const Matrix& s) {
  Matrix acc = Matrix::Zero(s.rows(), s.cols());
  Matrix power = Matrix::Identity(s.rows(), s.cols());
  for (double hk : h) {
    acc += hk * power;
    power = power * s;
  }
  return acc;
}

}  // namespace

TEST_SUITE("polynomial_filter") {

TEST_CASE("trailing zero coefficients do not contribute to the degree") {
  const PolynomialFilter p({1.0, 2.0, 0.0, 0.0});
  CHECK(p.degree() == 1);
  CHECK(p.coefficients().size() == 4);  // coefficients kept verbatim
  const PolynomialFilter zero({0.0, 0.0});
  CHECK(zero.degree() == 0);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(PolynomialFilter({}), std::invalid_argument);
  CHECK_THROWS_AS(PolynomialFilter({1.0, std::nan("")}), std::invalid_argument);
}

TEST_CASE("scalar evaluation matches the monomial sum") {
  const PolynomialFilter p({1.0, 2.0, 3.0});
  CHECK(p(2.0) == 17.0);
  CHECK(p(0.0) == 1.0);
  CHECK(p(-1.0) == 2.0);
}

TEST_CASE("filter_matrix equals the explicit power sum") {
  const ShiftOperator s = build_shift(parse_shift_spec("random"), 5, 21);
  const std::vector<double> h = {0.3, -1.1, 0.25, 0.0, 2.0};
  const PolynomialFilter p(h);
  const Matrix direct = explicit_powers(h, s.matrix());
  CHECK((filter_matrix(p, s) - direct).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("realization is an algebra homomorphism: (pq)(S) = p(S) q(S)") {
  const ShiftOperator s = build_shift(parse_shift_spec("random"), 6, 33);
  const PolynomialFilter p({0.5, -1.0, 0.0, 0.7});
  const PolynomialFilter q({2.0, 0.25, -0.4});
  const Matrix lhs = filter_matrix(multiply(p, q), s);
  const Matrix rhs = filter_matrix(p, s) * filter_matrix(q, s);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("apply_filter agrees with the dense realization") {
  const ShiftOperator s = build_shift(parse_shift_spec("er:0.5:laplacian"), 7, 4);
  const PolynomialFilter p({1.0, -0.5, 0.125, 0.02});
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss;
  Signal x(7);
  for (int i = 0; i < 7; ++i) x[i] = gauss(rng);
  const Signal via_matrix = filter_matrix(p, s) * x;
  CHECK((apply_filter(p, s, x) - via_matrix).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("filtering on the cyclic shift is circular convolution") {
  const int n = 8;
  const ShiftOperator s = build_cyclic_shift(n);
  const std::vector<double> h = {0.9, -0.4, 0.3, 0.0, 0.15, 0.05};
  const PolynomialFilter p(h);
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss;
  Signal x(n);
  for (int i = 0; i < n; ++i) x[i] = gauss(rng);

  // y[i] = sum_k h[k] x[(i - k) mod n]
  Signal oracle = Signal::Zero(n);
  for (int i = 0; i < n; ++i)
    for (std::size_t k = 0; k < h.size(); ++k)
      oracle[i] += h[k] * x[((i - static_cast<int>(k)) % n + n) % n];

  CHECK((apply_filter(p, s, x) - oracle).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("derivative and scaling") {
  const PolynomialFilter p({1.0, 2.0, 3.0});
  const PolynomialFilter d = p.derivative();
  CHECK(d.coefficients() == std::vector<double>{2.0, 6.0});
  CHECK(PolynomialFilter({5.0}).derivative().coefficients() == std::vector<double>{0.0});

  const PolynomialFilter half = p.scaled(0.5);
  CHECK(half.coefficients() == std::vector<double>{0.5, 1.0, 1.5});
}

TEST_CASE("frequency_response evaluates pointwise") {
  const PolynomialFilter p({0.0, 1.0, 1.0});
  const std::vector<double> lambdas = {-1.0, 0.0, 2.0};
  const std::vector<double> r = frequency_response(p, lambdas);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == p(-1.0));
  CHECK(r[1] == 0.0);
  CHECK(r[2] == 6.0);
}

TEST_CASE("filter operator norm: spectral path and SVD path agree") {
  // symmetric: max |p(lambda)| over the spectrum
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << -2.0, 0.5, 1.0;
  const ShiftOperator diag_shift{d};
  const PolynomialFilter p({0.0, 0.0, 1.0});  // p(lambda) = lambda^2
  CHECK(filter_operator_norm(p, diag_shift) == doctest::Approx(4.0).epsilon(1e-12));

  // non-symmetric path: identity filter on the cyclic shift has norm 1
  const ShiftOperator cyc = build_cyclic_shift(5);
  CHECK(filter_operator_norm(PolynomialFilter({0.0, 1.0}), cyc) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("signal dimension mismatch is rejected") {
  const ShiftOperator s = build_cyclic_shift(4);
  CHECK_THROWS_AS(apply_filter(PolynomialFilter({1.0}), s, Signal::Zero(3)),
                  std::invalid_argument);
}

}  // TEST_SUITE
