#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nsconic/barriers.hpp"
#include "nsconic/error.hpp"
#include "nsconic/linalg.hpp"
#include "nsconic/problem.hpp"
#include "nsconic/solver.hpp"

namespace nsconic {

enum class ConeType { Free, Lp, Socp, Exp, Gpow };

inline std::string_view to_string(ConeType t) {
  switch (t) {
    case ConeType::Free: return "free";
    case ConeType::Lp: return "lp";
    case ConeType::Socp: return "socp";
    case ConeType::Exp: return "exp";
    case ConeType::Gpow: return "gpow";
  }
  return "";
}

/// Accepts the canonical tags plus the short aliases "l" and "soc".
inline std::optional<ConeType> parse_cone_type(std::string_view tag) {
  if (tag == "free") return ConeType::Free;
  if (tag == "lp" || tag == "l") return ConeType::Lp;
  if (tag == "socp" || tag == "soc") return ConeType::Socp;
  if (tag == "exp") return ConeType::Exp;
  if (tag == "gpow") return ConeType::Gpow;
  return std::nullopt;
}

/// One factor of a product cone, in user-visible coordinates.
struct ConeSpec {
  ConeType type = ConeType::Lp;
  Eigen::Index dim = 1;
  Vector lambda;  // signature, gpow only

  static ConeSpec lp(Eigen::Index d) { return {ConeType::Lp, d, {}}; }
  static ConeSpec socp(Eigen::Index d) { return {ConeType::Socp, d, {}}; }
  static ConeSpec free(Eigen::Index d) { return {ConeType::Free, d, {}}; }
  static ConeSpec exp() { return {ConeType::Exp, 3, {}}; }
  static ConeSpec gpow(Vector lambda) {
    const auto d = lambda.size() + 1;
    return {ConeType::Gpow, d, std::move(lambda)};
  }

  /// Empty string when valid, otherwise the reason.
  std::string problem() const {
    if (dim < 1) return "dim must be >= 1";
    switch (type) {
      case ConeType::Socp:
        if (dim < 2) return "socp cone needs dim >= 2";
        break;
      case ConeType::Exp:
        if (dim != 3) return "exp cone must have dim 3";
        break;
      case ConeType::Gpow:
        if (lambda.size() < 1) return "gpow needs a lambda vector";
        if (dim != lambda.size() + 1) return "gpow dim must equal len(lambda) + 1";
        if (!(lambda.minCoeff() > 0.0)) return "gpow lambda entries must be positive";
        if (std::abs(lambda.sum() - 1.0) > 1e-10) return "gpow lambda must sum to 1";
        break;
      default:
        if (lambda.size() != 0) return "lambda is only allowed for gpow";
        break;
    }
    return {};
  }

  /// Barrier parameter of the factor; a free block costs one SOC, ν = 2.
  double nu() const {
    switch (type) {
      case ConeType::Lp: return static_cast<double>(dim);
      case ConeType::Socp: return 2.0;
      case ConeType::Exp: return 3.0;
      case ConeType::Gpow: return static_cast<double>(dim);
      case ConeType::Free: return 2.0;
    }
    return 0.0;
  }

  Eigen::Index internal_dim() const { return type == ConeType::Free ? dim + 1 : dim; }
};

/// Layout of a product cone. Free blocks carry one dummy coordinate placed
/// first in their internal span.
struct ConeProduct {
  std::vector<ConeSpec> specs;
  Eigen::Index ambient_dim = 0;
  Eigen::Index internal_dim = 0;
  std::vector<Eigen::Index> dummy_positions;   // internal indices, ascending
  std::vector<Eigen::Index> ambient_offsets;   // per block
  std::vector<Eigen::Index> internal_offsets;  // per block
};

struct BuiltCone {
  ConeProduct product;
  BarrierOracle oracle;
};

inline BarrierOracle oracle_for(const ConeSpec& spec) {
  switch (spec.type) {
    case ConeType::Lp: return make_oracle<LpBarrier>(spec.dim);
    case ConeType::Socp: return make_oracle<SocBarrier>(spec.dim);
    case ConeType::Exp: return make_oracle<ExpBarrier>();
    case ConeType::Gpow: return make_oracle<GpowBarrier>(spec.lambda);
    case ConeType::Free: return free_embed(spec.dim);
  }
  throw Error(ErrorKind::BadSpec, "unknown cone type");
}

inline BuiltCone build(const std::vector<ConeSpec>& specs) {
  if (specs.empty()) throw Error(ErrorKind::BadSpec, "cone list is empty");
  ConeProduct cp;
  cp.specs = specs;
  std::vector<BarrierOracle> factors;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& spec = specs[i];
    if (auto why = spec.problem(); !why.empty()) {
      throw Error(ErrorKind::BadSpec, "cone " + std::to_string(i) + ": " + why);
    }
    cp.ambient_offsets.push_back(cp.ambient_dim);
    cp.internal_offsets.push_back(cp.internal_dim);
    if (spec.type == ConeType::Free) cp.dummy_positions.push_back(cp.internal_dim);
    cp.ambient_dim += spec.dim;
    cp.internal_dim += spec.internal_dim();
    factors.push_back(oracle_for(spec));
  }
  auto oracle = factors.size() == 1 ? factors.front() : product_oracle(std::move(factors));
  return {std::move(cp), std::move(oracle)};
}

/// Concatenated central points, in internal coordinates.
inline Vector default_x0(const ConeProduct& cp) {
  Vector x = Vector::Zero(cp.internal_dim);
  for (std::size_t i = 0; i < cp.specs.size(); ++i) {
    const auto& spec = cp.specs[i];
    auto block = x.segment(cp.internal_offsets[i], spec.internal_dim());
    switch (spec.type) {
      case ConeType::Lp: block.setOnes(); break;
      case ConeType::Socp:
      case ConeType::Free: block(0) = 1.0; break;
      case ConeType::Exp: block << 2.0, 1.0, 0.0; break;
      case ConeType::Gpow:
        block.setOnes();
        block(spec.dim - 1) = 0.0;
        break;
    }
  }
  if (!build(cp.specs).oracle.contains(x)) {
    throw Error(ErrorKind::BadSpec, "default point is not interior");
  }
  return x;
}

/// Drops dummy coordinates: internal → ambient.
inline Vector strip(const Vector& internal, const ConeProduct& cp) {
  if (internal.size() != cp.internal_dim) {
    throw Error(ErrorKind::DimensionMismatch, "vector is not in internal coordinates");
  }
  Vector out(cp.ambient_dim);
  Eigen::Index k = 0;
  std::size_t d = 0;
  for (Eigen::Index i = 0; i < internal.size(); ++i) {
    if (d < cp.dummy_positions.size() && cp.dummy_positions[d] == i) {
      ++d;
      continue;
    }
    out(k++) = internal(i);
  }
  return out;
}

/// Inserts the given dummy values: ambient → internal. Inverse of `strip`.
inline Vector embed(const Vector& ambient, const ConeProduct& cp, const Vector& dummies) {
  if (ambient.size() != cp.ambient_dim ||
      dummies.size() != static_cast<Eigen::Index>(cp.dummy_positions.size())) {
    throw Error(ErrorKind::DimensionMismatch, "vector is not in ambient coordinates");
  }
  Vector out(cp.internal_dim);
  Eigen::Index k = 0;
  std::size_t d = 0;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (d < cp.dummy_positions.size() && cp.dummy_positions[d] == i) {
      out(i) = dummies(static_cast<Eigen::Index>(d++));
    } else {
      out(i) = ambient(k++);
    }
  }
  return out;
}

/// Dummy values that make a user point interior: 1 + ‖free block‖.
inline Vector lift_point(const Vector& ambient, const ConeProduct& cp) {
  if (ambient.size() != cp.ambient_dim) {
    throw Error(ErrorKind::DimensionMismatch, "x0 has length " + std::to_string(ambient.size()) +
                                                  ", expected " + std::to_string(cp.ambient_dim));
  }
  Vector dummies(static_cast<Eigen::Index>(cp.dummy_positions.size()));
  Eigen::Index d = 0;
  for (std::size_t i = 0; i < cp.specs.size(); ++i) {
    if (cp.specs[i].type != ConeType::Free) continue;
    dummies(d++) = 1.0 + ambient.segment(cp.ambient_offsets[i], cp.specs[i].dim).norm();
  }
  return embed(ambient, cp, dummies);
}

/// Adds an all-zero column to A and a zero cost for every dummy coordinate.
inline ProblemData lift(const ProblemData& p, const ConeProduct& cp) {
  if (p.n() != cp.ambient_dim) {
    throw Error(ErrorKind::DimensionMismatch, "problem has " + std::to_string(p.n()) +
                                                  " variables, cones cover " +
                                                  std::to_string(cp.ambient_dim));
  }
  if (cp.dummy_positions.empty()) return p;
  std::vector<Eigen::Index> to_internal(static_cast<std::size_t>(cp.ambient_dim));
  {
    Eigen::Index k = 0;
    std::size_t d = 0;
    for (Eigen::Index i = 0; i < cp.internal_dim; ++i) {
      if (d < cp.dummy_positions.size() && cp.dummy_positions[d] == i) {
        ++d;
        continue;
      }
      to_internal[static_cast<std::size_t>(k++)] = i;
    }
  }
  auto entries = p.A.triplets();
  for (auto& t : entries) t.col = to_internal[static_cast<std::size_t>(t.col)];
  Vector zeros = Vector::Zero(static_cast<Eigen::Index>(cp.dummy_positions.size()));
  return {SparseMatrix(p.m(), cp.internal_dim, entries), p.b, embed(p.c, cp, zeros)};
}

/**
 * One-call entry point over a product of built-in cones. `x0` is in user
 * coordinates; when omitted the concatenated central points are used. The
 * returned x and s exclude dummy coordinates.
 */
inline SolverResult solve_simple(const Vector& c, const SparseMatrix& a, const Vector& b,
                                 const std::vector<ConeSpec>& specs,
                                 const std::optional<Vector>& x0 = std::nullopt,
                                 const SolverOptions& opts = {}) {
  auto [cp, oracle] = build(specs);
  const ProblemData user{a, b, c};
  user.validate();
  const ProblemData lifted = lift(user, cp);
  const Vector start = x0 ? lift_point(*x0, cp) : default_x0(cp);
  auto result = solve(lifted, oracle, start, opts);
  if (result.x.size() == cp.internal_dim) result.x = strip(result.x, cp);
  if (result.s.size() == cp.internal_dim) result.s = strip(result.s, cp);
  return result;
}

}  // namespace nsconic
