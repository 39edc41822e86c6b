#include "doctest.h"
#include "gssl/error.hpp"
#include "gssl/graph.hpp"
#include "gssl/numerics.hpp"
#include "oracles.hpp"

#include <random>

using namespace gssl;

namespace {

Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> g;
  Matrix x(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) x(i, j) = g(rng);
  return x;
}

}  // namespace

TEST_CASE("spd solve on trivial systems") {
  std::mt19937_64 rng(1);
  const Matrix b = random_matrix(rng, 4, 3);
  CHECK(solve_spd(Matrix::Identity(4, 4), b) == b);
  Matrix a = Matrix::Zero(2, 2);
  a.diagonal() << 2, 4;
  Matrix rhs(2, 1);
  rhs << 2, 4;
  const Matrix x = solve_spd(a, rhs);
  CHECK(x(0, 0) == 1.0);
  CHECK(x(1, 0) == 1.0);
}

TEST_CASE("spd solve residual on random systems, dense and sparse") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const Matrix m = random_matrix(rng, 8, 8);
    const Matrix a = m.transpose() * m + Matrix::Identity(8, 8);
    const Matrix b = random_matrix(rng, 8, 2);
    const Matrix x = solve_spd(a, b);
    const Matrix xs = solve_spd(SparseMatrix(a.sparseView()), b);
    for (Index j = 0; j < 2; ++j) {
      CHECK((a * x.col(j) - b.col(j)).norm() <= 1e-8 * b.col(j).norm());
      CHECK((a * xs.col(j) - b.col(j)).norm() <= 1e-8 * b.col(j).norm());
    }
    const auto expected = oracle::gauss_solve(oracle::from_eigen(a), oracle::from_eigen(b));
    for (Index i = 0; i < 8; ++i) CHECK(std::abs(x(i, 0) - expected[i][0]) <= 1e-9);
  }
}

TEST_CASE("spd solve names the failing pivot") {
  Matrix a = Matrix::Identity(3, 3);
  a(2, 2) = -1.0;
  try {
    solve_spd(a, Matrix::Ones(3, 1));
    FAIL("expected a singular matrix error");
  } catch (const SingularMatrixError& e) {
    CHECK(e.pivot() == 2);
  }
  Matrix z = Matrix::Identity(3, 3);
  z(1, 1) = 0.0;
  try {
    solve_spd(SparseMatrix(z.sparseView()), Matrix::Ones(3, 1));
    FAIL("expected a singular matrix error");
  } catch (const SingularMatrixError& e) {
    CHECK(e.pivot() == 1);
  }
}

TEST_CASE("smallest eigenpairs of a diagonal matrix") {
  Matrix a = Matrix::Zero(3, 3);
  a.diagonal() << 3, 1, 2;
  const auto pairs = smallest_eigenpairs(a, 2);
  CHECK(pairs.count() == 2);
  CHECK(std::abs(pairs.values[0] - 1.0) < 1e-12);
  CHECK(std::abs(pairs.values[1] - 2.0) < 1e-12);
  CHECK(pairs.vectors(1, 0) > 0.0);  // sign convention
}

TEST_CASE("kernel of a two-component Laplacian") {
  oracle::Dense w = oracle::zeros(6, 6);
  const auto edge = [&](int a, int b) { w[a][b] = w[b][a] = 1.0; };
  edge(0, 1), edge(1, 2), edge(0, 2), edge(3, 4), edge(4, 5), edge(3, 5);
  const SparseMatrix l = laplacian(oracle::to_graph(w), LaplacianKind::kUnnormalized);
  const auto pairs = smallest_eigenpairs(l, 2);
  CHECK(std::abs(pairs.values[0]) <= 1e-8);
  CHECK(std::abs(pairs.values[1]) <= 1e-8);
  // Projector onto the span equals the projector onto the component indicators.
  Matrix ind = Matrix::Zero(6, 2);
  ind.block(0, 0, 3, 1).setConstant(1.0 / std::sqrt(3.0));
  ind.block(3, 1, 3, 1).setConstant(1.0 / std::sqrt(3.0));
  const Matrix proj = pairs.vectors * pairs.vectors.transpose();
  CHECK((proj - ind * ind.transpose()).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("eigenvalues match a Jacobi oracle and satisfy the invariants") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const Matrix m = random_matrix(rng, 10, 10);
    const Matrix a = (m + m.transpose()) / 2;
    const auto pairs = smallest_eigenpairs(a, 10);
    const auto expected = oracle::jacobi_eigenvalues(oracle::from_eigen(a));
    const double scale = a.cwiseAbs().rowwise().sum().maxCoeff();
    for (Index j = 0; j < 10; ++j) {
      CHECK(std::abs(pairs.values[j] - expected[j]) <= 1e-8);
      CHECK((a * pairs.vectors.col(j) - pairs.values[j] * pairs.vectors.col(j)).norm() <= 1e-8 * scale);
      if (j > 0) CHECK(pairs.values[j - 1] <= pairs.values[j]);
      Index first = 0;
      while (std::abs(pairs.vectors(first, j)) <= 1e-10) ++first;
      CHECK(pairs.vectors(first, j) > 0.0);
    }
    CHECK((pairs.vectors.transpose() * pairs.vectors - Matrix::Identity(10, 10)).cwiseAbs().maxCoeff() <= 1e-8);
  }
  CHECK_THROWS_AS(smallest_eigenpairs(Matrix::Identity(3, 3), 0), ValidationError);
  CHECK_THROWS_AS(smallest_eigenpairs(Matrix::Identity(3, 3), 4), ValidationError);
}

TEST_CASE("least squares") {
  std::mt19937_64 rng(4);
  const Matrix t = random_matrix(rng, 4, 2);
  CHECK((least_squares(Matrix::Identity(4, 4), t) - t).cwiseAbs().maxCoeff() <= 1e-12);

  Matrix ones = Matrix::Ones(2, 1);
  Matrix y(2, 1);
  y << 0, 2;
  CHECK(std::abs(least_squares(ones, y)(0, 0) - 1.0) <= 1e-12);

  for (int r = 0; r < 10; ++r) {
    const Matrix x = random_matrix(rng, 12, 3);
    const Matrix targets = random_matrix(rng, 12, 2);
    const Matrix coeffs = least_squares(x, targets);
    const auto expected = oracle::normal_equations(oracle::from_eigen(x), oracle::from_eigen(targets));
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 2; ++j) CHECK(std::abs(coeffs(i, j) - expected[i][j]) <= 1e-8);
    CHECK((x.transpose() * (targets - x * coeffs)).cwiseAbs().maxCoeff() <= 1e-8);
  }

  // Rank deficiency resolves to the minimum-norm solution.
  Matrix dup(3, 2);
  dup << 1, 1, 2, 2, 3, 3;
  Matrix rhs(3, 1);
  rhs << 1, 2, 3;
  const Matrix c = least_squares(dup, rhs);
  CHECK(std::abs(c(0, 0) - 0.5) <= 1e-10);
  CHECK(std::abs(c(1, 0) - 0.5) <= 1e-10);
}
