#pragma once

#include "coarselab/metric.hpp"

namespace coarselab::linalg {

struct SymEigen {
  Vector values;   ///< ascending
  Matrix vectors;  ///< columns match values
};

SymEigen sym_eigen(const Matrix& m);

/// Largest |entry|; zero for the empty matrix.
double max_abs(const Matrix& m);

bool is_symmetric(const Matrix& m, double tol);

/// Orthonormal basis of the complement of the constant vector (n x (n-1)).
Matrix mean_zero_basis(std::size_t n);

/// Factor a symmetric PSD matrix as X X^T. Eigenvalues below -tol are a
/// precondition failure; the ones in [-tol, 0) are clipped and their total
/// magnitude returned through `clipped`.
Matrix psd_factor(const Matrix& m, double tol, double* clipped = nullptr);

/// Symmetric PSD square root, with the same clipping convention.
Matrix psd_sqrt(const Matrix& m, double tol, double* clipped = nullptr);

double spectral_norm(const Matrix& m);

}  // namespace coarselab::linalg
