#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>

#include "nsconic/barriers.hpp"
#include "nsconic/error.hpp"
#include "nsconic/linalg.hpp"
#include "nsconic/problem.hpp"
#include "nsconic/random.hpp"

namespace nsconic {

/// Design matrix V (n×p); column i is the regressor vᵢ of experiment i.
struct EDesignData {
  Matrix V;

  Eigen::Index n() const { return V.rows(); }
  Eigen::Index p() const { return V.cols(); }
};

/**
 * Barrier for K_V = {(t, x) : x ≥ 0, t ≤ λ_min(V diag(x) Vᵀ)}:
 *   f(t, x) = −ln det(V diag(x) Vᵀ − tI) − Σ ln xᵢ,  ν = n + p.
 * Everything is derived from one Cholesky factor L of M = V diag(x) Vᵀ − tI
 * and W = L⁻¹V.
 */
class EDesignBarrier final : public Barrier {
 public:
  EDesignBarrier(Matrix v, Vector start) : v_(std::move(v)), start_(std::move(start)) {
    if (start_.size() != v_.cols() + 1) {
      throw Error(ErrorKind::DimensionMismatch, "e-design start point must have length p + 1");
    }
  }

  Eigen::Index dim() const override { return v_.cols() + 1; }
  double nu() const override { return static_cast<double>(v_.rows() + v_.cols()); }
  Vector initial_point() const override { return start_; }

  BarrierEval evaluate(const Vector& tx, EvalOrder order) const override {
    const Eigen::Index n = v_.rows();
    const Eigen::Index p = v_.cols();
    const double t = tx(0);
    const Vector x = tx.tail(p);
    if (!(x.minCoeff() > 0.0)) return BarrierEval::exterior();
    Matrix m = v_ * x.asDiagonal() * v_.transpose();
    m.diagonal().array() -= t;
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) return BarrierEval::exterior();
    const Matrix l = llt.matrixL();
    if ((l.diagonal().array() <= 0.0).any()) return BarrierEval::exterior();

    auto e = detail::interior(order);
    if (!includes(order, EvalOrder::Gradient)) return e;
    const Matrix l_inv = l.triangularView<Eigen::Lower>().solve(Matrix::Identity(n, n));
    const Matrix w = l.triangularView<Eigen::Lower>().solve(v_);
    e.value = -2.0 * l.diagonal().array().log().sum() - x.array().log().sum();
    e.gradient.resize(p + 1);
    e.gradient(0) = l_inv.squaredNorm();  // trace(M⁻¹)
    e.gradient.tail(p) = -w.colwise().squaredNorm().transpose() - x.cwiseInverse();
    if (!includes(order, EvalOrder::Hessian)) return e;

    const Matrix m_inv = l_inv.transpose() * l_inv;
    const Matrix minv_v = l.transpose().triangularView<Eigen::Upper>().solve(w);  // M⁻¹V
    Matrix h(p + 1, p + 1);
    h(0, 0) = m_inv.squaredNorm();
    h.col(0).tail(p) = -minv_v.colwise().squaredNorm().transpose();
    h.bottomRightCorner(p, p) = (w.transpose() * w).array().square().matrix();
    h.bottomRightCorner(p, p).diagonal() += x.array().square().inverse().matrix();
    e.hessian = DenseSymMatrix(std::move(h));
    if (includes(order, EvalOrder::Cholesky)) detail::factor_hessian(e);
    return e;
  }

  const Matrix& design() const { return v_; }

 private:
  Matrix v_;
  Vector start_;
};

/// Smallest eigenvalue of V diag(x) Vᵀ.
inline double design_lambda_min(const Matrix& v, const Vector& x) {
  const Matrix m = v * x.asDiagonal() * v.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// E-optimal design as a conic program over (t, x) ∈ ℝ^{1+p}:
/// minimize −t subject to Σxᵢ = 1, (t, x) ∈ K_V.
struct EDesignProblem {
  ProblemData problem;
  BarrierOracle oracle;
  Vector x0;
};

inline EDesignProblem build_edesign(const EDesignData& data) {
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  if (n < 1 || p < n) {
    throw Error(ErrorKind::BadInstance, "e-design needs 1 <= n <= p");
  }
  if (!data.V.allFinite()) throw Error(ErrorKind::BadInstance, "design matrix is not finite");
  const Vector x_uniform = Vector::Constant(p, 1.0 / static_cast<double>(p));
  const double lmin = design_lambda_min(data.V, x_uniform);
  if (!(lmin > 0.0)) {
    throw Error(ErrorKind::BadInstance, "V diag(x0) Vᵀ is not positive definite");
  }
  Vector start(p + 1);
  start(0) = 0.5 * lmin;
  start.tail(p) = x_uniform;

  std::vector<Triplet> row;
  for (Eigen::Index i = 0; i < p; ++i) row.push_back({0, i + 1, 1.0});
  Vector c = Vector::Zero(p + 1);
  c(0) = -1.0;
  ProblemData problem{SparseMatrix(1, p + 1, row), Vector::Ones(1), std::move(c)};

  auto oracle = make_oracle<EDesignBarrier>(data.V, start);
  if (!oracle.contains(start)) {
    throw Error(ErrorKind::BadInstance, "e-design initial point is not interior");
  }
  return {std::move(problem), std::move(oracle), std::move(start)};
}

/// Standard-normal design matrix, filled column by column.
inline EDesignData random_edesign(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
  if (n < 1 || p < n) throw Error(ErrorKind::InputError, "random_edesign needs 1 <= n <= p");
  Rng rng(seed);
  Matrix v(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) v(i, j) = rng.normal();
  }
  return {std::move(v)};
}

/**
 * Exhaustive search over the simplex grid {x : xᵢ = kᵢ/resolution, Σkᵢ =
 * resolution}, returning the best λ_min(V diag(x) Vᵀ). Independent of the
 * interior-point path; limited to p ≤ 6.
 */
inline double edesign_grid_oracle(const Matrix& v, int resolution) {
  const Eigen::Index n = v.rows();
  const Eigen::Index p = v.cols();
  if (p > 6) throw Error(ErrorKind::TooLarge, "grid oracle is limited to p <= 6");
  if (p < 1 || n < 1 || resolution < 1) {
    throw Error(ErrorKind::InputError, "grid oracle needs a nonempty design and resolution >= 1");
  }
  // Outer products vᵢvᵢᵀ / resolution, so M = Σ kᵢ·outer[i].
  std::vector<Matrix> outer;
  for (Eigen::Index i = 0; i < p; ++i) {
    outer.push_back(v.col(i) * v.col(i).transpose() / static_cast<double>(resolution));
  }
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> k(static_cast<std::size_t>(p), 0);
  Matrix acc = Matrix::Zero(n, n);
  // Depth-first enumeration of compositions of `resolution` into p parts.
  auto recurse = [&](auto&& self, Eigen::Index idx, int remaining) -> void {
    if (idx == p - 1) {
      const Matrix m = acc + remaining * outer[static_cast<std::size_t>(idx)];
      const double lmin =
          n == 1 ? m(0, 0)
                 : Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
      best = std::max(best, lmin);
      return;
    }
    for (int ki = 0; ki <= remaining; ++ki) {
      acc += ki * outer[static_cast<std::size_t>(idx)];
      self(self, idx + 1, remaining - ki);
      acc -= ki * outer[static_cast<std::size_t>(idx)];
    }
  };
  recurse(recurse, 0, resolution);
  return best;
}

}  // namespace nsconic
