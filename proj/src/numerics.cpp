#include "gssl/numerics.hpp"

#include <Eigen/SparseCholesky>

namespace gssl {

Matrix solve_spd(const SparseMatrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || a.rows() != b.rows())
    throw ValidationError("solve_spd: dimension mismatch");
  using ColMajor = Eigen::SparseMatrix<double>;
  const ColMajor lower = ColMajor(a).triangularView<Eigen::Lower>();
  Eigen::SimplicialLDLT<ColMajor, Eigen::Lower> ldlt;
  ldlt.analyzePattern(lower);
  ldlt.factorize(lower);
  // The factorization is of P A P^T; map a failing pivot back to A's numbering.
  const auto& perm = ldlt.permutationP().indices();
  const Vector d = ldlt.vectorD();
  const auto report = [&](Index k) {
    Index original = k;
    for (Index i = 0; i < perm.size(); ++i) {
      if (perm[i] == k) original = i;
    }
    throw SingularMatrixError(original);
  };
  if (ldlt.info() != Eigen::Success) {
    for (Index k = 0; k < d.size(); ++k) {
      if (!(d[k] > 0.0)) report(k);
    }
    report(0);
  }
  for (Index k = 0; k < d.size(); ++k) {
    if (!(d[k] > 0.0)) report(k);
  }
  return ldlt.solve(b);
}

}  // namespace gssl
