#pragma once

#include <cmath>
#include <string>

#include "nsconic/barriers.hpp"
#include "nsconic/error.hpp"
#include "nsconic/linalg.hpp"
#include "nsconic/problem.hpp"

// Homogeneous self-dual embedding of
//   (P) min cᵀx  s.t. Ax = b, x ∈ K      (D) max bᵀy  s.t. Aᵀy + s = c, s ∈ K*
// in the variables z = (y, x, τ, s, κ):
//   Ax − bτ = 0,  −Aᵀy + cτ − s = 0,  bᵀy − cᵀx − κ = 0.

namespace nsconic {

struct Direction;

struct Iterate {
  Vector y;
  Vector x;
  double tau = 1.0;
  Vector s;
  double kappa = 1.0;

  Iterate stepped(const Direction& d, double alpha) const;
  Iterate scaled(double t) const { return {t * y, t * x, t * tau, t * s, t * kappa}; }
};

struct Direction {
  Vector dy;
  Vector dx;
  double dtau = 0.0;
  Vector ds;
  double dkappa = 0.0;
};

inline Iterate Iterate::stepped(const Direction& d, double alpha) const {
  return {y + alpha * d.dy, x + alpha * d.dx, tau + alpha * d.dtau, s + alpha * d.ds,
          kappa + alpha * d.dkappa};
}

/// Right-hand side (or residual) of the three linear blocks of the embedding.
struct HSDResiduals {
  Vector primal;      // Ax − bτ
  Vector dual;        // −Aᵀy + cτ − s
  double gap = 0.0;   // bᵀy − cᵀx − κ

  double norm() const {
    return std::sqrt(primal.squaredNorm() + dual.squaredNorm() + gap * gap);
  }
  HSDResiduals operator-() const { return {-primal, -dual, -gap}; }
  static HSDResiduals zero(Eigen::Index m, Eigen::Index n) {
    return {Vector::Zero(m), Vector::Zero(n), 0.0};
  }
};

/// Right-hand side of the complementarity block (Δs, Δκ) + μH(Δx, Δτ).
struct ComplementarityRhs {
  Vector x_part;
  double tau_part = 0.0;
};

namespace detail {
inline void check_iterate(const Iterate& z, const ProblemData& p) {
  if (z.y.size() != p.m() || z.x.size() != p.n() || z.s.size() != p.n()) {
    throw Error(ErrorKind::DimensionMismatch, "iterate does not match problem dimensions");
  }
}
}  // namespace detail

inline HSDResiduals residuals(const Iterate& z, const ProblemData& p) {
  detail::check_iterate(z, p);
  return {spmv(p.A, z.x) - p.b * z.tau,
          -spmv(p.A, z.y, /*transpose=*/true) + p.c * z.tau - z.s,
          p.b.dot(z.y) - p.c.dot(z.x) - z.kappa};
}

/// Complementarity gap μ = (xᵀs + τκ)/(ν + 1).
inline double gap(const Iterate& z, double nu) {
  return (z.x.dot(z.s) + z.tau * z.kappa) / (nu + 1.0);
}

/// ψ(z, t) = (s + t∇f(x), κ − t/τ).
inline ComplementarityRhs psi(const Iterate& z, double t, const Vector& grad) {
  return {z.s + t * grad, z.kappa - t / z.tau};
}

/**
 * Central-path proximity ‖diag(∇²f(x), 1/τ²)^{-1/2} ψ(z, μ)‖ / μ. The x-part
 * is measured through the lower Cholesky factor: ‖L⁻¹ψₓ‖.
 */
inline double proximity(const Iterate& z, const BarrierEval& eval, double nu) {
  if (!eval.in_interior || !includes(eval.order, EvalOrder::Cholesky)) {
    throw Error(ErrorKind::NotPD, "proximity needs a factored Hessian");
  }
  const double mu = gap(z, nu);
  const auto ps = psi(z, mu, eval.gradient);
  const Vector w = solve_lower(eval.cholesky, ps.x_part);
  const double t = z.tau * ps.tau_part;
  return std::sqrt(w.squaredNorm() + t * t) / mu;
}

/**
 * Solves the Newton system
 *   A Δx − b Δτ = r₁,   −Aᵀ Δy + c Δτ − Δs = r₂,   bᵀ Δy − cᵀ Δx − Δκ = r₃,
 *   Δs + μ∇²f(x) Δx = r₄,   Δκ + (μ/τ²) Δτ = r₅.
 * (Δs, Δκ) and Δx are eliminated, leaving the m×m core A(μH)⁻¹Aᵀ bordered by
 * one row/column for Δτ. One round of iterative refinement on the full
 * system follows.
 */
inline Direction newton_solve(const Iterate& z, double mu, const BarrierEval& eval,
                              const ProblemData& p, const HSDResiduals& top,
                              const ComplementarityRhs& bottom) {
  detail::check_iterate(z, p);
  if (!eval.in_interior || !includes(eval.order, EvalOrder::Cholesky)) {
    throw Error(ErrorKind::NotPD, "newton_solve needs a factored Hessian");
  }
  const Eigen::Index m = p.m();
  const Eigen::Index n = p.n();
  if (top.primal.size() != m || top.dual.size() != n || bottom.x_part.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "Newton right-hand side has wrong shape");
  }
  const auto& l = eval.cholesky;
  const Matrix& hess = eval.hessian.matrix();
  const double tau_weight = mu / (z.tau * z.tau);
  const auto& a = p.A.eigen();

  // W = (μH)⁻¹ applied through the factor.
  auto apply_w = [&](const Vector& v) -> Vector { return solve_spd(l, v) / mu; };

  const Matrix at_dense = Matrix(a.transpose());
  const Matrix q = solve_lower_block(l, at_dense);  // L⁻¹Aᵀ
  Matrix core = (q.transpose() * q) / mu;           // A W Aᵀ
  Eigen::LLT<Matrix> core_llt;
  if (m > 0) {
    core_llt.compute(core);
    if (core_llt.info() != Eigen::Success) {
      const double delta = 1e-12 * std::max(core.trace(), 1.0);
      core.diagonal().array() += delta;
      core_llt.compute(core);
      if (core_llt.info() != Eigen::Success) {
        throw Error(ErrorKind::SingularSystem,
                    "reduced Newton matrix is not positive definite; A may be rank "
                    "deficient (remove redundant equalities before solving)");
      }
    }
  }
  auto core_solve = [&](const Vector& v) -> Vector {
    return m > 0 ? Vector(core_llt.solve(v)) : Vector(Vector::Zero(0));
  };

  // The Δτ pivot is cᵀWc − uᵀN⁻¹u + μ/τ² + bᵀN⁻¹b with u = AWc, N the core.
  // The first difference is evaluated as ‖(I − Q(QᵀQ)⁻¹Qᵀ)L⁻¹c‖²/μ so it
  // cannot go negative through cancellation.
  const Vector lc = solve_lower(l, p.c);
  const Vector u = q.transpose() * lc / mu;  // A W c
  const Vector core_u = core_solve(u);
  const Vector lc_perp = lc - q * core_u;
  const double b_term =
      m > 0 ? Vector(core_llt.matrixL().solve(p.b)).squaredNorm() : 0.0;
  const Vector a2 = core_u + core_solve(p.b);
  const Vector bmu = p.b - u;
  const double denom = lc_perp.squaredNorm() / mu + tau_weight + b_term;
  if (!(denom > 0.0) || !std::isfinite(denom)) {
    throw Error(ErrorKind::SingularSystem, "bordered Newton system is singular");
  }

  auto reduced_solve = [&](const HSDResiduals& t, const ComplementarityRhs& bt) {
    Direction d;
    const Vector pvec = apply_w(t.dual + bt.x_part);
    const Vector rhs1 = t.primal - a * pvec;
    const double rhs2 = t.gap + bt.tau_part + p.c.dot(pvec);
    const Vector a1 = core_solve(rhs1);
    d.dtau = (rhs2 - bmu.dot(a1)) / denom;
    d.dy = a1 + a2 * d.dtau;
    d.dx = pvec + apply_w(a.transpose() * d.dy - p.c * d.dtau);
    d.ds = bt.x_part - mu * (hess * d.dx);
    d.dkappa = bt.tau_part - tau_weight * d.dtau;
    return d;
  };

  auto full_residual = [&](const Direction& d) -> std::pair<HSDResiduals, ComplementarityRhs> {
    HSDResiduals r1{top.primal - (a * d.dx - p.b * d.dtau),
                    top.dual - (-(a.transpose() * d.dy) + p.c * d.dtau - d.ds),
                    top.gap - (p.b.dot(d.dy) - p.c.dot(d.dx) - d.dkappa)};
    ComplementarityRhs r2{bottom.x_part - (d.ds + mu * (hess * d.dx)),
                          bottom.tau_part - (d.dkappa + tau_weight * d.dtau)};
    return {std::move(r1), std::move(r2)};
  };

  Direction d = reduced_solve(top, bottom);
  const auto [e_top, e_bottom] = full_residual(d);
  const Direction corr = reduced_solve(e_top, e_bottom);
  d.dy += corr.dy;
  d.dx += corr.dx;
  d.dtau += corr.dtau;
  d.ds += corr.ds;
  d.dkappa += corr.dkappa;

  if (!d.dx.allFinite() || !d.dy.allFinite() || !d.ds.allFinite() ||
      !std::isfinite(d.dtau) || !std::isfinite(d.dkappa)) {
    throw Error(ErrorKind::SingularSystem, "Newton direction is not finite");
  }
  return d;
}

}  // namespace nsconic
