#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace ksglasso {

/// Dense symmetric matrix with full storage. Construction validates symmetry
/// (inputs with relative asymmetry above 1e-8 are rejected, smaller asymmetry
/// is averaged away) so that stored values are exactly symmetric and all
/// arithmetic on SymMat stays exactly symmetric.
class SymMat {
 public:
  SymMat() = default;
  /// Zero matrix of the given dimension.
  explicit SymMat(int dim) : m_(Eigen::MatrixXd::Zero(dim, dim)) {}

  static SymMat identity(int dim);
  static SymMat diag(const Eigen::VectorXd& d);
  /// Validates finiteness and near-symmetry, then stores (A + A^T)/2.
  /// Throws std::invalid_argument otherwise.
  static SymMat from_dense(const Eigen::MatrixXd& a);
  /// Unconditionally stores (A + A^T)/2 without the asymmetry check. For
  /// internal products like Q D Q^T whose asymmetry is pure roundoff.
  static SymMat symmetrized(const Eigen::MatrixXd& a);

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  /// Sets both (i,j) and (j,i).
  void set(int i, int j, double v) { m_(i, j) = v; m_(j, i) = v; }

  const Eigen::MatrixXd& mat() const { return m_; }

  double max_abs() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }
  double frob_norm() const { return m_.norm(); }
  double trace() const { return m_.trace(); }
  double min_diag() const { return m_.diagonal().minCoeff(); }

  SymMat& operator+=(const SymMat& o) { m_ += o.m_; return *this; }
  SymMat& operator-=(const SymMat& o) { m_ -= o.m_; return *this; }
  SymMat& operator*=(double a) { m_ *= a; return *this; }

  friend SymMat operator+(SymMat a, const SymMat& b) { a += b; return a; }
  friend SymMat operator-(SymMat a, const SymMat& b) { a -= b; return a; }
  friend SymMat operator*(double a, SymMat m) { m *= a; return m; }

 private:
  Eigen::MatrixXd m_;
};

/// Frobenius inner product <A, B>.
double inner(const SymMat& a, const SymMat& b);

/// Eigendecomposition A = Q diag(eigenvalues) Q^T with Q orthogonal and
/// eigenvalues ascending.
struct SpectralDecomp {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd eigenvalues;

  /// Decomposition of the identity, built without an eigensolver call.
  static SpectralDecomp identity(int dim);
};

/// Full symmetric eigendecomposition. Deterministic for identical input bits;
/// throws std::invalid_argument on non-finite input. Every call bumps the
/// instrumentation counter read by sym_eig_count().
SpectralDecomp sym_eig(const SymMat& a);

/// Total sym_eig calls in this process (instrumentation for per-iteration
/// cost accounting).
std::uint64_t sym_eig_count();

/// Off-diagonal support pattern of a symmetric matrix.
struct SupportMask {
  int dim = 0;
  std::vector<std::uint8_t> bits;  // row-major dim*dim, diagonal always 0

  bool operator()(int i, int j) const { return bits[static_cast<std::size_t>(i) * dim + j] != 0; }
  bool operator==(const SupportMask&) const = default;
};

/// Mask of off-diagonal entries with |a_ij| > zero_tol.
SupportMask support_of(const SymMat& a, double zero_tol = 0.0);

}  // namespace ksglasso
