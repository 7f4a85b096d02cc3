#include <gtest/gtest.h>

#include <cmath>

#include "nsconic/linalg.hpp"
#include "oracles.hpp"

using namespace nsconic;
using nsconic::testing::random_matrix;
using nsconic::testing::random_vector;

TEST(CholSpd, IdentityGivesIdentityFactor) {
  auto r = chol_spd(DenseSymMatrix(Matrix::Identity(3, 3)));
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r.factor.lower().isApprox(Matrix::Identity(3, 3)));
}

TEST(CholSpd, TwoByTwoByHand) {
  Matrix m(2, 2);
  m << 4, 2, 2, 3;
  auto r = chol_spd(DenseSymMatrix(m));
  ASSERT_TRUE(r.ok());
  Matrix expect(2, 2);
  expect << 2, 0, 1, std::sqrt(2.0);
  EXPECT_LT((r.factor.lower() - expect).norm(), 1e-15);
}

TEST(CholSpd, IndefiniteIsNotPD) {
  Matrix m(2, 2);
  m << 1, 2, 2, 1;
  EXPECT_EQ(chol_spd(DenseSymMatrix(m)).status, FactorStatus::NotPD);
}

TEST(CholSpd, NonFiniteIsReported) {
  Matrix m = Matrix::Identity(2, 2);
  m(1, 1) = std::nan("");
  EXPECT_EQ(chol_spd(DenseSymMatrix(m)).status, FactorStatus::NonFinite);
}

TEST(CholSpd, ReconstructsRandomSpd) {
  Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform() * 50);
    const Matrix b = random_matrix(n, n, rng);
    const Matrix m = b.transpose() * b + Matrix::Identity(n, n);
    auto r = chol_spd(DenseSymMatrix(m));
    ASSERT_TRUE(r.ok());
    EXPECT_LE((r.factor.reconstruct() - m).norm() / m.norm(), 1e-12);
  }
}

TEST(SolveLower, ByHand) {
  Matrix l(2, 2);
  l << 2, 0, 1, std::sqrt(2.0);
  const CholeskyFactor f(l);
  Vector rhs(2);
  rhs << 2, 1 + std::sqrt(2.0);
  EXPECT_LT((solve_lower(f, rhs) - Vector::Ones(2)).norm(), 1e-15);

  const CholeskyFactor eye(Matrix::Identity(3, 3));
  Vector v(3);
  v << 1, 2, 3;
  EXPECT_EQ(solve_lower(eye, v), v);
}

TEST(SolveLower, DimensionMismatch) {
  const CholeskyFactor eye(Matrix::Identity(3, 3));
  EXPECT_THROW(solve_lower(eye, Vector::Ones(2)), Error);
  EXPECT_THROW(solve_lower_transpose(eye, Vector::Ones(4)), Error);
}

TEST(SolveSpd, ResidualSmallForModerateConditioning) {
  Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform() * 30);
    // Q diag(d) Qᵀ with d spread over [1, 1e6].
    Eigen::HouseholderQR<Matrix> qr(random_matrix(n, n, rng));
    const Matrix q = qr.householderQ();
    Vector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = std::pow(1e6, static_cast<double>(i) / (n - 1));
    const Matrix m = q * d.asDiagonal() * q.transpose();
    auto r = chol_spd(DenseSymMatrix(m));
    ASSERT_TRUE(r.ok());
    const Vector rhs = random_vector(n, rng);
    const Vector x = solve_lower_transpose(r.factor, solve_lower(r.factor, rhs));
    EXPECT_LE((m * x - rhs).norm() / rhs.norm(), 1e-10);
    EXPECT_LE((solve_spd(r.factor, rhs) - x).norm(), 1e-12 * std::max(1.0, x.norm()));
  }
}

TEST(Spmv, Examples) {
  const Triplet t[] = {{0, 0, 1.0}, {0, 1, 1.0}};
  SparseMatrix a(1, 2, t);
  EXPECT_EQ(spmv(a, Vector::Ones(2)), Vector::Constant(1, 2.0));
  EXPECT_EQ(spmv(a, Vector::Constant(1, 3.0), true), Vector::Constant(2, 3.0));
  SparseMatrix empty(0, 4);
  EXPECT_EQ(spmv(empty, Vector::Ones(4)).size(), 0);
  EXPECT_THROW(spmv(a, Vector::Ones(3)), Error);
}

TEST(Spmv, MatchesDenseReference) {
  Rng rng(21);
  for (int k = 0; k < 50; ++k) {
    const Eigen::Index r = 1 + static_cast<Eigen::Index>(rng.uniform() * 30);
    const Eigen::Index c = 1 + static_cast<Eigen::Index>(rng.uniform() * 30);
    std::vector<Triplet> entries;
    for (int e = 0; e < 3 * (r + c); ++e) {
      entries.push_back({static_cast<Eigen::Index>(rng.uniform() * r),
                         static_cast<Eigen::Index>(rng.uniform() * c), rng.uniform(-1, 1)});
    }
    SparseMatrix a(r, c, entries);
    Matrix dense = Matrix::Zero(r, c);
    for (const auto& t : entries) dense(t.row, t.col) += t.value;
    const Vector v = random_vector(c, rng), w = random_vector(r, rng);
    EXPECT_LE((spmv(a, v) - dense * v).norm(), 1e-14 * std::max(1.0, (dense * v).norm()));
    EXPECT_LE((spmv(a, w, true) - dense.transpose() * w).norm(),
              1e-14 * std::max(1.0, (dense.transpose() * w).norm()));
  }
}

TEST(SparseMatrix, RejectsBadTriplets) {
  const Triplet out[] = {{2, 0, 1.0}};
  EXPECT_THROW(SparseMatrix(2, 2, out), Error);
  const Triplet inf[] = {{0, 0, INFINITY}};
  EXPECT_THROW(SparseMatrix(2, 2, inf), Error);
}

TEST(SparseMatrix, DuplicatesAreSummed) {
  const Triplet dup[] = {{0, 1, 1.5}, {0, 1, 2.0}};
  SparseMatrix a(1, 2, dup);
  EXPECT_EQ(a.nnz(), 1);
  EXPECT_DOUBLE_EQ(a.to_dense()(0, 1), 3.5);
}
