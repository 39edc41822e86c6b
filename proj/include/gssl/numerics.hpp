#pragma once

#include "gssl/error.hpp"
#include "gssl/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace gssl {

/// The p algebraically smallest eigenpairs of a symmetric matrix.
template <typename Scalar>
struct EigenPairs {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;                // ascending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;  // orthonormal columns

  Index count() const { return values.size(); }
};

namespace detail {

/// Unblocked Cholesky scan that reports the first failing pivot.
template <typename Derived>
Index first_bad_pivot(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> l = a;
  const Index n = l.rows();
  for (Index k = 0; k < n; ++k) {
    const Scalar pivot = l(k, k) - l.row(k).head(k).squaredNorm();
    if (!(pivot > Scalar(0))) return k;
    l(k, k) = std::sqrt(pivot);
    for (Index i = k + 1; i < n; ++i)
      l(i, k) = (l(i, k) - l.row(i).head(k).dot(l.row(k).head(k))) / l(k, k);
  }
  return -1;
}

/// Makes the first component of each column with magnitude above tol positive.
template <typename Derived>
void canonicalize_signs(Eigen::MatrixBase<Derived>& vectors) {
  using Scalar = typename Derived::Scalar;
  for (Index j = 0; j < vectors.cols(); ++j) {
    const Scalar tol = Scalar(1e-10) * vectors.col(j).cwiseAbs().maxCoeff();
    for (Index i = 0; i < vectors.rows(); ++i) {
      if (std::abs(vectors(i, j)) > tol) {
        if (vectors(i, j) < Scalar(0)) vectors.col(j) *= Scalar(-1);
        break;
      }
    }
  }
}

}  // namespace detail

/// Solves A X = B for symmetric positive-definite A via Cholesky.
/// Throws SingularMatrixError naming the first non-positive pivot.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> solve_spd(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (a.rows() != a.cols() || a.rows() != b.rows())
    throw ValidationError("solve_spd: dimension mismatch");
  const Dense dense_a = a;
  // Diagonal systems are divided directly so they stay exact.
  if ((dense_a - Dense(dense_a.diagonal().asDiagonal())).isZero(Scalar(0))) {
    for (Index k = 0; k < dense_a.rows(); ++k) {
      if (!(dense_a(k, k) > Scalar(0)) || !std::isfinite(dense_a(k, k))) throw SingularMatrixError(k);
    }
    Dense x = b;
    x.array().colwise() /= dense_a.diagonal().array();
    return x;
  }
  Eigen::LLT<Dense> llt(dense_a);
  if (llt.info() != Eigen::Success) throw SingularMatrixError(detail::first_bad_pivot(dense_a));
  // LLT only reads the lower triangle; a failed scan there still means no SPD factor.
  const auto diag = llt.matrixLLT().diagonal();
  for (Index k = 0; k < diag.size(); ++k) {
    if (!(diag[k] > Scalar(0)) || !std::isfinite(diag[k])) throw SingularMatrixError(k);
  }
  return llt.solve(b);
}

/// Sparse overload: simplicial LDL^T with a fill-reducing ordering.
Matrix solve_spd(const SparseMatrix& a, const Matrix& b);

/// Dense symmetric eigensolver (Householder tridiagonalization followed by
/// implicit-shift QL iteration) truncated to the p smallest eigenpairs. Signs
/// are fixed so the first nonzero component of each eigenvector is positive.
template <typename Derived>
EigenPairs<typename Derived::Scalar> smallest_eigenpairs(const Eigen::MatrixBase<Derived>& a,
                                                         Index p) {
  using Scalar = typename Derived::Scalar;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Index n = a.rows();
  if (a.cols() != n) throw ValidationError("smallest_eigenpairs: matrix must be square");
  if (p < 1 || p > n) throw ValidationError("smallest_eigenpairs: p must lie in [1, n]");
  const Dense dense = a;
  Eigen::SelfAdjointEigenSolver<Dense> solver(dense);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("symmetric eigensolver did not converge", std::nan(""));

  EigenPairs<Scalar> out;
  out.values = solver.eigenvalues().head(p);
  out.vectors = solver.eigenvectors().leftCols(p);
  detail::canonicalize_signs(out.vectors);

  Scalar scale = dense.cwiseAbs().rowwise().sum().maxCoeff();
  if (!(scale > Scalar(0))) scale = Scalar(1);
  Scalar worst = 0;
  for (Index j = 0; j < p; ++j) {
    const Scalar r = (dense * out.vectors.col(j) - out.values[j] * out.vectors.col(j)).norm();
    worst = std::max(worst, r);
  }
  const Scalar orth = (out.vectors.transpose() * out.vectors - Dense::Identity(p, p))
                          .template lpNorm<Eigen::Infinity>();
  if (worst > Scalar(1e-8) * scale || orth > Scalar(1e-8))
    throw ConvergenceError("eigenpairs failed the residual check", static_cast<double>(worst));
  return out;
}

template <typename Derived>
EigenPairs<double> smallest_eigenpairs(const Eigen::SparseMatrixBase<Derived>& a, Index p) {
  return smallest_eigenpairs(Matrix(a.derived()), p);
}

/// Minimum-norm least-squares coefficients: argmin ||targets - design * X||_F.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> least_squares(
    const Eigen::MatrixBase<DerivedA>& design, const Eigen::MatrixBase<DerivedB>& targets) {
  using Dense = Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (design.rows() < 1 || design.cols() < 1) throw ValidationError("least_squares: empty design");
  if (design.rows() != targets.rows()) throw ValidationError("least_squares: row mismatch");
  Eigen::CompleteOrthogonalDecomposition<Dense> cod(design);
  return cod.solve(targets);
}

}  // namespace gssl
