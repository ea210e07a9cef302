#pragma once

#include <cmath>
#include <string>

#include "pic/common.hpp"
#include "pic/completion.hpp"

namespace pic {

// Normalized affinity L = D^{-1/2} A D^{-1/2}; its spectrum lies in [-1, 1].
struct NormalizedLaplacian {
  Matrix L;
  Vector degree;
};

// Top-k eigenpairs, eigenvalues descending, columns orthonormal.
struct Subspace {
  Matrix U;
  Vector sigma;

  Index k() const { return U.cols(); }
};

inline constexpr double kZeroDegree = 1e-12;

// Vertices with degree below kZeroDegree get a zero row and column.
inline NormalizedLaplacian normalized_laplacian(const Matrix& a) {
  if (a.rows() != a.cols()) throw DataError("similarity matrix must be square");
  NormalizedLaplacian out;
  out.degree = a.rowwise().sum();
  Vector inv_sqrt(a.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    inv_sqrt(i) = out.degree(i) < kZeroDegree ? 0.0 : 1.0 / std::sqrt(out.degree(i));
  }
  out.L = inv_sqrt.asDiagonal() * a * inv_sqrt.asDiagonal();
  // Exact symmetry; the products above can differ in the last bit.
  out.L = 0.5 * (out.L + out.L.transpose()).eval();
  return out;
}

inline NormalizedLaplacian normalized_laplacian(const CompleteSimilarity& a) {
  return normalized_laplacian(a.values);
}

// Flips each column so its largest-magnitude entry (lowest index on ties) is positive.
inline void canonicalize_signs(Matrix& u) {
  for (Index c = 0; c < u.cols(); ++c) {
    Index best = 0;
    double best_abs = -1.0;
    for (Index r = 0; r < u.rows(); ++r) {
      const double v = std::abs(u(r, c));
      if (v > best_abs) {
        best_abs = v;
        best = r;
      }
    }
    if (u(best, c) < 0.0) u.col(c) *= -1.0;
  }
}

// Dense symmetric eigendecomposition (Householder tridiagonalization followed
// by implicit-shift QR) returning the k largest eigenpairs.
inline Subspace top_k_eigen(const Matrix& l, Index k) {
  const Index n = l.rows();
  if (l.cols() != n) throw DataError("matrix must be square");
  if (k < 1 || k > n) throw UsageError("k must satisfy 1 <= k <= n");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(l);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver did not converge");
  }
  const Matrix& vectors = solver.eigenvectors();
  const Vector& values = solver.eigenvalues();  // ascending

  const double residual = (l * vectors - vectors * values.asDiagonal()).norm();
  const double scale = std::max(1.0, l.norm());
  if (!(residual <= 1e-8 * double(n) * scale)) {
    throw NumericalError("eigendecomposition residual " + std::to_string(residual) +
                         " exceeds tolerance");
  }

  Subspace out{Matrix(n, k), Vector(k)};
  for (Index c = 0; c < k; ++c) {
    out.U.col(c) = vectors.col(n - 1 - c);
    out.sigma(c) = values(n - 1 - c);
  }
  canonicalize_signs(out.U);
  return out;
}

inline Subspace top_k_eigen(const NormalizedLaplacian& l, Index k) { return top_k_eigen(l.L, k); }

}  // namespace pic
