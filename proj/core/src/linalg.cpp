#include "coarselab/linalg.hpp"

#include "coarselab/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace coarselab::linalg {

SymEigen sym_eigen(const Matrix& m) {
  if (m.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) fail_invariant("symmetric eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool is_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol) return false;
  return true;
}

Matrix mean_zero_basis(std::size_t n) {
  // Columns e_i - e_{i+1} orthonormalized; QR of the difference matrix keeps
  // the result deterministic.
  const auto m = static_cast<Eigen::Index>(n);
  if (m <= 1) return Matrix(m, 0);
  Matrix diff = Matrix::Zero(m, m - 1);
  for (Eigen::Index i = 0; i + 1 < m; ++i) {
    diff(i, i) = 1.0;
    diff(i + 1, i) = -1.0;
  }
  Eigen::HouseholderQR<Matrix> qr(diff);
  Matrix q = qr.householderQ() * Matrix::Identity(m, m - 1);
  return q;
}

namespace {

Vector clip(const Vector& values, double tol, double* clipped, const char* what) {
  Vector out = values;
  double mass = 0.0;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (out(i) < -tol)
      fail_precondition(std::string(what) + ": eigenvalue " + std::to_string(out(i)) +
                        " below tolerance");
    if (out(i) < 0.0) {
      mass += -out(i);
      out(i) = 0.0;
    }
  }
  if (clipped) *clipped = mass;
  return out;
}

}  // namespace

Matrix psd_factor(const Matrix& m, double tol, double* clipped) {
  auto eig = sym_eigen(m);
  Vector lam = clip(eig.values, tol, clipped, "psd_factor");
  return eig.vectors * lam.cwiseSqrt().asDiagonal();
}

Matrix psd_sqrt(const Matrix& m, double tol, double* clipped) {
  auto eig = sym_eigen(m);
  Vector lam = clip(eig.values, tol, clipped, "psd_sqrt");
  return eig.vectors * lam.cwiseSqrt().asDiagonal() * eig.vectors.transpose();
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace coarselab::linalg
