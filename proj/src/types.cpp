#include "algnn/types.hpp"

#include <cmath>

namespace algnn {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

bool all_finite(const Vector& v) { return v.allFinite(); }

bool is_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

}  // namespace algnn
