#include "ksglasso/symmat.hpp"

#include <atomic>
#include <stdexcept>

namespace ksglasso {

namespace {
std::atomic<std::uint64_t> g_eig_calls{0};
}

SymMat SymMat::identity(int dim) {
  SymMat r;
  r.m_ = Eigen::MatrixXd::Identity(dim, dim);
  return r;
}

SymMat SymMat::diag(const Eigen::VectorXd& d) {
  SymMat r;
  r.m_ = Eigen::MatrixXd(d.asDiagonal());
  return r;
}

SymMat SymMat::from_dense(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("SymMat: matrix is not square");
  if (!a.allFinite()) throw std::invalid_argument("SymMat: non-finite entries");
  const double scale = 1.0 + (a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff());
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * scale)
    throw std::invalid_argument("SymMat: asymmetry exceeds tolerance");
  return symmetrized(a);
}

SymMat SymMat::symmetrized(const Eigen::MatrixXd& a) {
  SymMat r;
  r.m_ = 0.5 * (a + a.transpose());
  return r;
}

double inner(const SymMat& a, const SymMat& b) {
  return a.mat().cwiseProduct(b.mat()).sum();
}

SpectralDecomp SpectralDecomp::identity(int dim) {
  return {Eigen::MatrixXd::Identity(dim, dim), Eigen::VectorXd::Ones(dim)};
}

SpectralDecomp sym_eig(const SymMat& a) {
  if (!a.mat().allFinite()) throw std::invalid_argument("sym_eig: non-finite input");
  g_eig_calls.fetch_add(1, std::memory_order_relaxed);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.mat());
  if (es.info() != Eigen::Success) throw std::runtime_error("sym_eig: eigensolver failed");
  return {es.eigenvectors(), es.eigenvalues()};
}

std::uint64_t sym_eig_count() { return g_eig_calls.load(std::memory_order_relaxed); }

SupportMask support_of(const SymMat& a, double zero_tol) {
  const int n = a.dim();
  SupportMask m;
  m.dim = n;
  m.bits.assign(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && std::abs(a(i, j)) > zero_tol)
        m.bits[static_cast<std::size_t>(i) * n + j] = 1;
  return m;
}

}  // namespace ksglasso
