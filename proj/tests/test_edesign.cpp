#include <gtest/gtest.h>

#include <cmath>

#include "nsconic/edesign.hpp"
#include "nsconic/solver.hpp"

using namespace nsconic;

namespace {

SolverResult solve_design(const Matrix& v, double tol) {
  const auto inst = build_edesign({v});
  SolverOptions opts;
  opts.optimTol = tol;
  return solve(inst.problem, inst.oracle, inst.x0, opts);
}

}  // namespace

TEST(BuildEDesign, Layout) {
  const auto inst = build_edesign({Matrix::Identity(2, 2)});
  EXPECT_EQ(inst.problem.n(), 3);
  EXPECT_EQ(inst.problem.m(), 1);
  EXPECT_EQ(inst.problem.c(0), -1.0);
  EXPECT_DOUBLE_EQ(inst.x0(0), 0.25);
  EXPECT_DOUBLE_EQ(inst.x0(1), 0.5);
  EXPECT_DOUBLE_EQ(inst.oracle.nu(), 4.0);
  EXPECT_THROW(build_edesign({Matrix::Ones(3, 2)}), Error);
  EXPECT_THROW(build_edesign({Matrix::Zero(2, 3)}), Error);
}

TEST(EDesign, IdentityDesign) {
  auto r = solve_design(Matrix::Identity(2, 2), 1e-8);
  ASSERT_EQ(r.status, Status::Optimal);
  EXPECT_NEAR(r.x(0), 0.5, 1e-6);
  EXPECT_NEAR(r.x(1), 0.5, 1e-6);
  EXPECT_NEAR(r.x(2), 0.5, 1e-6);
}

TEST(EDesign, DiagonalDesign) {
  Matrix v = Matrix::Zero(2, 2);
  v(0, 0) = 1;
  v(1, 1) = 2;
  auto r = solve_design(v, 1e-8);
  ASSERT_EQ(r.status, Status::Optimal);
  EXPECT_NEAR(r.x(0), 0.8, 1e-6);
  EXPECT_NEAR(r.x(1), 0.8, 1e-6);
  EXPECT_NEAR(r.x(2), 0.2, 1e-6);
}

TEST(EDesign, IdentityOfOrderNIsUniform) {
  for (Eigen::Index n : {2, 5, 10}) {
    auto r = solve_design(Matrix::Identity(n, n), 1e-8);
    ASSERT_EQ(r.status, Status::Optimal);
    const double u = 1.0 / static_cast<double>(n);
    EXPECT_NEAR(r.x(0), u, 1e-6);
    EXPECT_LE((r.x.tail(n) - Vector::Constant(n, u)).lpNorm<Eigen::Infinity>(), 1e-6);
  }
}

TEST(EDesign, MatchesGridOracle) {
  const auto data = random_edesign(3, 6, 2024);
  auto r = solve_design(data.V, 1e-8);
  ASSERT_EQ(r.status, Status::Optimal);
  EXPECT_LE(r.scaled.gap, 1e-8);
  const double grid = edesign_grid_oracle(data.V, 40);
  const double t = r.x(0);
  EXPECT_GE(t, grid - 1e-8);
  EXPECT_NEAR(t, grid, 2e-3);
  EXPECT_NEAR(t, design_lambda_min(data.V, r.x.tail(6)), 1e-6);
}

TEST(GridOracle, Examples) {
  EXPECT_NEAR(edesign_grid_oracle(Matrix::Identity(2, 2), 100), 0.5, 0.01);
  Matrix v = Matrix::Zero(2, 2);
  v(0, 0) = 1;
  v(1, 1) = 2;
  EXPECT_NEAR(edesign_grid_oracle(v, 1000), 0.8, 0.004);
  Matrix row(1, 4);
  row << 0.5, -3, 2, 1;
  EXPECT_DOUBLE_EQ(edesign_grid_oracle(row, 10), 9.0);
  EXPECT_THROW(edesign_grid_oracle(Matrix::Ones(2, 7), 5), Error);
}

TEST(RandomEDesign, Deterministic) {
  EXPECT_EQ(random_edesign(3, 6, 1).V, random_edesign(3, 6, 1).V);
  EXPECT_NE(random_edesign(3, 6, 1).V, random_edesign(3, 6, 2).V);
  EXPECT_THROW(random_edesign(4, 3, 1), Error);
}
