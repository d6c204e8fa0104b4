#pragma once

#include "algnn/types.hpp"

#include <functional>
#include <memory>
#include <mutex>
#include <vector>

namespace algnn {

enum class ShiftKind { CyclicDelay, GraphAdjacency, GraphLaplacian, GraphonKernel, Custom };

const char* to_string(ShiftKind kind);

// Eigendecomposition of a symmetric shift, eigenvalues ascending,
// eigenvector columns orthonormal.
struct Spectrum {
  Vector eigenvalues;
  Matrix eigenvectors;
};

/// Dense realization S = rho(g) of the algebra generator acting on M.
/// Immutable after construction; copies share the lazily computed spectrum.
class ShiftOperator {
 public:
  explicit ShiftOperator(Matrix matrix, ShiftKind kind = ShiftKind::Custom);

  const Matrix& matrix() const { return matrix_; }
  ShiftKind kind() const { return kind_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  bool normal() const { return normal_; }
  bool symmetric() const { return symmetric_; }

  // Spectral norm ||S||, cached at construction.
  double norm() const { return norm_; }

  // Lazy, compute-once eigendecomposition. Throws std::invalid_argument for
  // non-symmetric operators (complex spectra are out of the spectral path by
  // design) and NumericalError if the reconstruction residual is too large.
  const Spectrum& spectrum() const;

  bool has_cached_spectrum() const;

 private:
  Matrix matrix_;
  ShiftKind kind_;
  bool symmetric_;
  bool normal_;
  double norm_;

  struct SpectrumCache {
    std::once_flag once;
    Spectrum value;
    std::exception_ptr error;
    bool ready = false;
  };
  std::shared_ptr<SpectrumCache> cache_;
};

struct Edge {
  int i = 0;
  int j = 0;
  double weight = 0.0;
};

enum class GraphVariant { Adjacency, Laplacian, NormalizedAdjacency };

// N x N cyclic permutation matrix, entry (i+1 mod N, i) = 1.
ShiftOperator build_cyclic_shift(int n);

// Symmetrized weighted graph shift. Laplacian is D - A; NormalizedAdjacency
// divides by the spectral radius of A (rejected when it is zero).
ShiftOperator build_graph_shift(const std::vector<Edge>& edges, int n, GraphVariant variant);

// Midpoint discretization of the graphon integral operator:
// S[i][j] = W(x_i, x_j) / n with x_i = (i + 1/2) / n. Kernel values must
// lie in [0, 1]; the kernel is evaluated on the upper triangle and mirrored.
ShiftOperator build_graphon_shift(const std::function<double(double, double)>& kernel, int n);

// Eigendecomposition service used by every spectrum-dependent path.
// Same contract as ShiftOperator::spectrum().
const Spectrum& spectral_decomposition(const ShiftOperator& s);

Signal apply_operator(const ShiftOperator& s, const Signal& x);

// Largest singular value. Equals max |lambda_i| for symmetric input.
double operator_norm(const Matrix& m);

}  // namespace algnn
