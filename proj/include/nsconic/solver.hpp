#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "nsconic/barriers.hpp"
#include "nsconic/error.hpp"
#include "nsconic/hsd.hpp"
#include "nsconic/problem.hpp"

namespace nsconic {

struct SolverOptions {
  double optimTol = 1e-6;
  int maxIter = 500;
  bool verbose = false;
  double eta = 0.07;       // corrector target proximity
  double predBeta = 0.5;   // predictor neighborhood bound
  int maxCorrSteps = 8;
  double lsFactor = 0.5;
  int lsMaxSteps = 60;
  double infeasTol = 1e-8;

  void validate() const {
    if (!(0.0 < eta && eta < predBeta && predBeta < 1.0)) {
      throw Error(ErrorKind::InputError, "options need 0 < eta < predBeta < 1");
    }
    if (!(0.0 < optimTol && optimTol < 1.0)) {
      throw Error(ErrorKind::InputError, "optimTol must lie in (0, 1)");
    }
    if (!(0.0 < lsFactor && lsFactor < 1.0)) {
      throw Error(ErrorKind::InputError, "lsFactor must lie in (0, 1)");
    }
    if (maxIter < 0 || maxCorrSteps < 1 || lsMaxSteps < 1 || !(infeasTol > 0.0)) {
      throw Error(ErrorKind::InputError, "iteration limits and infeasTol must be positive");
    }
  }
};

enum class Status { Optimal, PrimalInfeasible, DualInfeasible, IterationLimit, NumericalError };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "Optimal";
    case Status::PrimalInfeasible: return "PrimalInfeasible";
    case Status::DualInfeasible: return "DualInfeasible";
    case Status::IterationLimit: return "IterationLimit";
    case Status::NumericalError: return "NumericalError";
  }
  return "Unknown";
}

inline std::string_view describe(Status s) {
  switch (s) {
    case Status::Optimal: return "approximately optimal solution found";
    case Status::PrimalInfeasible: return "primal infeasibility certificate found";
    case Status::DualInfeasible: return "dual infeasibility certificate found";
    case Status::IterationLimit: return "iteration limit reached";
    case Status::NumericalError: return "numerical difficulties";
  }
  return "";
}

struct IterationRecord {
  int iteration = 0;
  double mu = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap_residual = 0.0;
  double alpha = 0.0;
  int corrector_steps = 0;
};

struct ResidualNorms {
  double primal = 0.0;  // ‖Ax − bτ‖
  double dual = 0.0;    // ‖−Aᵀy + cτ − s‖
  double gap = 0.0;     // |bᵀy − cᵀx − κ|
  double mu = 0.0;
};

/// Scaled optimality measures on the de-homogenized point (x/τ, y/τ, s/τ).
struct ScaledMeasures {
  double primal = 0.0;  // ‖Ax − b‖∞ / (1 + ‖b‖∞)
  double dual = 0.0;    // ‖Aᵀy + s − c‖∞ / (1 + ‖c‖∞)
  double gap = 0.0;     // |cᵀx − bᵀy| / (1 + |cᵀx| + |bᵀy|)
};

struct SolverResult {
  Status status = Status::NumericalError;
  std::string statusString;
  std::string message;
  Vector x, y, s;
  double tau = 0.0;
  double kappa = 0.0;
  double pObj = 0.0;
  double dObj = 0.0;
  int iterations = 0;
  ResidualNorms residualNorms;
  ScaledMeasures scaled;
  std::vector<IterationRecord> history;
  double solveSeconds = 0.0;
};

/// Everything a step needs besides the iterate itself.
struct SolveContext {
  const ProblemData& problem;
  const BarrierOracle& oracle;
  const SolverOptions& options;
};

struct StepInfo {
  double alpha = 0.0;
  int steps = 0;
};

/// z⁰ = (0, x⁰, 1, −∇f(x⁰), 1); on the central path with μ = 1.
inline Iterate initialize(const ProblemData& p, const BarrierOracle& oracle, const Vector& x0) {
  if (x0.size() != oracle.dim() || x0.size() != p.n()) {
    throw Error(ErrorKind::InputError, "initial point has length " + std::to_string(x0.size()) +
                                           ", expected " + std::to_string(p.n()));
  }
  const auto e = oracle.eval(x0, EvalOrder::Gradient);
  if (!e.in_interior) {
    throw Error(ErrorKind::ExteriorStart, "initial point is not in the cone interior");
  }
  return {Vector::Zero(p.m()), x0, 1.0, -e.gradient, 1.0};
}

namespace detail {

struct Evaluated {
  BarrierEval eval;
  double mu = 0.0;
  double proximity = 0.0;
};

/// Full evaluation of a trial iterate; nullopt when it leaves the interior.
inline std::optional<Evaluated> evaluate_point(const Iterate& z, const SolveContext& ctx) {
  if (!(z.tau > 0.0) || !(z.kappa > 0.0)) return std::nullopt;
  auto e = ctx.oracle.eval(z.x, EvalOrder::Cholesky);
  if (!e.in_interior) return std::nullopt;
  const double mu = gap(z, ctx.oracle.nu());
  if (!(mu > 0.0)) return std::nullopt;
  const double prox = proximity(z, e, ctx.oracle.nu());
  if (!std::isfinite(prox)) return std::nullopt;
  return Evaluated{std::move(e), mu, prox};
}

inline Evaluated evaluate_current(const Iterate& z, const SolveContext& ctx) {
  auto ev = evaluate_point(z, ctx);
  if (!ev) throw Error(ErrorKind::ExteriorPoint, "current iterate left the interior");
  return std::move(*ev);
}

/// Largest α ≤ 1 keeping τ and κ at least 1% of their current values.
inline double fraction_to_boundary(const Iterate& z, const Direction& d) {
  double alpha = 1.0;
  if (d.dtau < 0.0) alpha = std::min(alpha, -0.99 * z.tau / d.dtau);
  if (d.dkappa < 0.0) alpha = std::min(alpha, -0.99 * z.kappa / d.dkappa);
  return alpha;
}

}  // namespace detail

/**
 * Predictor: Newton step on the embedding itself, followed by a backtracking
 * search from the fraction-to-boundary cap until the trial point is interior
 * and within proximity predBeta.
 */
inline Iterate predictor_step(const Iterate& z, const SolveContext& ctx, StepInfo* info = nullptr) {
  const auto cur = detail::evaluate_current(z, ctx);
  const auto dir = newton_solve(z, cur.mu, cur.eval, ctx.problem, -residuals(z, ctx.problem),
                                {-z.s, -z.kappa});
  double alpha = detail::fraction_to_boundary(z, dir);
  for (int k = 0; k < ctx.options.lsMaxSteps; ++k, alpha *= ctx.options.lsFactor) {
    Iterate trial = z.stepped(dir, alpha);
    const auto ev = detail::evaluate_point(trial, ctx);
    if (ev && ev->proximity <= ctx.options.predBeta) {
      if (info) *info = {alpha, k + 1};
      return trial;
    }
  }
  throw Error(ErrorKind::LineSearchFailure, "predictor line search found no acceptable step");
}

/**
 * Corrector phase: damped Newton steps with right-hand side −ψ(z, μ(z)) that
 * re-center the iterate without changing the embedding residuals. Stops once
 * proximity ≤ eta.
 */
inline Iterate corrector_phase(const Iterate& z_in, const SolveContext& ctx,
                               StepInfo* info = nullptr) {
  const auto& opts = ctx.options;
  Iterate z = z_in;
  auto cur = detail::evaluate_current(z, ctx);
  int taken = 0;
  double last_alpha = 0.0;
  while (cur.proximity > opts.eta) {
    if (taken == opts.maxCorrSteps) {
      throw Error(ErrorKind::CorrectorStall,
                  "proximity " + std::to_string(cur.proximity) + " still above eta after " +
                      std::to_string(taken) + " corrector steps");
    }
    const auto ps = psi(z, cur.mu, cur.eval.gradient);
    const auto dir =
        newton_solve(z, cur.mu, cur.eval, ctx.problem,
                     HSDResiduals::zero(ctx.problem.m(), ctx.problem.n()),
                     {-ps.x_part, -ps.tau_part});
    double alpha = 1.0;
    bool accepted = false;
    for (int k = 0; k < opts.lsMaxSteps; ++k, alpha *= opts.lsFactor) {
      Iterate trial = z.stepped(dir, alpha);
      auto ev = detail::evaluate_point(trial, ctx);
      if (ev && ev->proximity < cur.proximity) {
        z = std::move(trial);
        cur = std::move(*ev);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw Error(ErrorKind::CorrectorStall, "corrector line search made no progress");
    }
    last_alpha = alpha;
    ++taken;
  }
  if (info) *info = {last_alpha, taken};
  return z;
}

namespace detail {

inline ScaledMeasures scaled_measures(const ProblemData& p, const Vector& x, const Vector& y,
                                      const Vector& s) {
  ScaledMeasures out;
  const double bnorm = p.m() > 0 ? p.b.lpNorm<Eigen::Infinity>() : 0.0;
  const double cnorm = p.c.lpNorm<Eigen::Infinity>();
  const Vector rp = spmv(p.A, x) - p.b;
  const Vector rd = spmv(p.A, y, true) + s - p.c;
  out.primal = (p.m() > 0 ? rp.lpNorm<Eigen::Infinity>() : 0.0) / (1.0 + bnorm);
  out.dual = rd.lpNorm<Eigen::Infinity>() / (1.0 + cnorm);
  const double cx = p.c.dot(x);
  const double by = p.b.dot(y);
  out.gap = std::abs(cx - by) / (1.0 + std::abs(cx) + std::abs(by));
  return out;
}

}  // namespace detail

/**
 * Termination test. An ε-approximate point has μ(z) ≤ ε·μ(z⁰) and
 * ‖residuals(z)‖ ≤ ε·‖residuals(z⁰)‖; it is then read as optimal when τ
 * dominates κ and the recovered point (x, y, s)/τ has scaled measures within
 * ε, or as an infeasibility certificate when τ < infeasTol·κ.
 * Returns nullopt to continue iterating.
 */
inline std::optional<Status> classify(const Iterate& z, const Iterate& z0, const ProblemData& p,
                                      double nu, const SolverOptions& opts) {
  const double eps = opts.optimTol;
  const double r0 = residuals(z0, p).norm();
  const double r = residuals(z, p).norm();
  const bool small_gap = gap(z, nu) <= eps * gap(z0, nu);
  const bool small_res = r0 > 0.0 ? r <= eps * r0 : r <= eps;
  if (!small_gap || !small_res) return std::nullopt;

  if (z.tau >= opts.infeasTol * std::max(1.0, z.kappa) && z.tau >= z.kappa) {
    const auto m = detail::scaled_measures(p, z.x / z.tau, z.y / z.tau, z.s / z.tau);
    if (std::max({m.primal, m.dual, m.gap}) <= eps) return Status::Optimal;
    return std::nullopt;
  }
  if (z.tau < opts.infeasTol * z.kappa) {
    // Both certificates may hold at once; primal infeasibility is reported first.
    if (p.b.dot(z.y) > opts.infeasTol * std::max(1.0, z.y.norm())) return Status::PrimalInfeasible;
    if (p.c.dot(z.x) < -opts.infeasTol * std::max(1.0, z.x.norm())) return Status::DualInfeasible;
  }
  return std::nullopt;
}

namespace detail {

inline void log_iteration(const IterationRecord& r) {
  std::clog << std::setw(4) << r.iteration << ' ' << std::scientific << std::setprecision(3)
            << r.mu << ' ' << r.primal_residual << ' ' << r.dual_residual << ' '
            << r.gap_residual << ' ' << r.alpha << ' ' << r.corrector_steps << '\n'
            << std::defaultfloat;
}

}  // namespace detail

/// Predictor-corrector main loop over the embedding. Minimizes cᵀx.
inline SolverResult solve(const ProblemData& p, const BarrierOracle& oracle, const Vector& x0,
                          const SolverOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  p.validate();
  opts.validate();
  if (oracle.dim() != p.n()) {
    throw Error(ErrorKind::InputError, "cone dimension " + std::to_string(oracle.dim()) +
                                           " does not match " + std::to_string(p.n()) +
                                           " variables");
  }
  const Iterate z0 = initialize(p, oracle, x0);
  const double nu = oracle.nu();
  const SolveContext ctx{p, oracle, opts};

  SolverResult result;
  Iterate z = z0;
  std::optional<Status> status;
  if (opts.verbose) std::clog << "iter mu rP rD rG alpha corr\n";

  auto record = [&](int iter, double alpha, int corr) {
    const auto r = residuals(z, p);
    IterationRecord rec{iter, gap(z, nu), r.primal.norm(), r.dual.norm(), std::abs(r.gap),
                        alpha, corr};
    if (opts.verbose) detail::log_iteration(rec);
    result.history.push_back(rec);
  };
  record(0, 0.0, 0);

  int iter = 0;
  try {
    while (true) {
      status = classify(z, z0, p, nu, opts);
      if (status) break;
      if (iter >= opts.maxIter) {
        status = Status::IterationLimit;
        break;
      }
      StepInfo pred, corr;
      z = predictor_step(z, ctx, &pred);
      z = corrector_phase(z, ctx, &corr);
      ++iter;
      record(iter, pred.alpha, corr.steps);
    }
  } catch (const Error& err) {
    switch (err.kind()) {
      case ErrorKind::SingularSystem:
      case ErrorKind::LineSearchFailure:
      case ErrorKind::CorrectorStall:
      case ErrorKind::ExteriorPoint:
      case ErrorKind::NotPD:
        status = Status::NumericalError;
        result.message = err.what();
        break;
      default:
        throw;
    }
  }

  result.status = *status;
  result.statusString = std::string(describe(*status));
  result.iterations = iter;
  result.tau = z.tau;
  result.kappa = z.kappa;
  const auto r = residuals(z, p);
  result.residualNorms = {r.primal.norm(), r.dual.norm(), std::abs(r.gap), gap(z, nu)};
  if (*status == Status::Optimal) {
    result.x = z.x / z.tau;
    result.y = z.y / z.tau;
    result.s = z.s / z.tau;
  } else {
    result.x = z.x;
    result.y = z.y;
    result.s = z.s;
  }
  result.pObj = p.c.dot(result.x);
  result.dObj = p.b.dot(result.y);
  result.scaled = detail::scaled_measures(p, result.x, result.y, result.s);
  result.solveSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace nsconic
