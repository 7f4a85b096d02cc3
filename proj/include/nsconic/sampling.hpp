#pragma once

#include <cmath>

#include <Eigen/Eigenvalues>

#include "nsconic/linalg.hpp"
#include "nsconic/random.hpp"
#include "nsconic/simple.hpp"

namespace nsconic {

/// Random strictly interior point of one cone factor, in internal
/// coordinates (free blocks include their dummy). Margins stay O(1).
inline Vector sample_interior(const ConeSpec& spec, Rng& rng) {
  const Eigen::Index d = spec.internal_dim();
  Vector x(d);
  switch (spec.type) {
    case ConeType::Lp:
      for (auto& v : x) v = rng.uniform(0.5, 3.0);
      break;
    case ConeType::Socp:
    case ConeType::Free: {
      for (Eigen::Index i = 1; i < d; ++i) x(i) = rng.uniform(-1.0, 1.0);
      x(0) = x.tail(d - 1).norm() + rng.uniform(0.5, 2.0);
      break;
    }
    case ConeType::Exp: {
      // Pick the slack r = x₂ ln(x₁/x₂) − x₃ > 0 and solve for x₁.
      const double x2 = rng.uniform(0.5, 2.0);
      const double x3 = rng.uniform(-1.0, 1.0);
      const double r = rng.uniform(0.5, 2.0);
      x << x2 * std::exp((r + x3) / x2), x2, x3;
      break;
    }
    case ConeType::Gpow: {
      const Eigen::Index k = spec.lambda.size();
      double geo = 1.0;
      for (Eigen::Index i = 0; i < k; ++i) {
        x(i) = rng.uniform(0.5, 2.0);
        geo *= std::pow(x(i), spec.lambda(i));
      }
      x(k) = geo * rng.uniform(-0.8, 0.8);
      break;
    }
  }
  return x;
}

/// Concatenation of per-factor samples.
inline Vector sample_interior(const ConeProduct& cp, Rng& rng) {
  Vector x(cp.internal_dim);
  for (std::size_t i = 0; i < cp.specs.size(); ++i) {
    x.segment(cp.internal_offsets[i], cp.specs[i].internal_dim()) =
        sample_interior(cp.specs[i], rng);
  }
  return x;
}

/// Random interior (t, x) for the design cone of V: x ~ U[0.5, 2] and t a
/// random fraction below λ_min(V diag(x) Vᵀ).
inline Vector sample_edesign_point(const Matrix& v, Rng& rng) {
  const Eigen::Index p = v.cols();
  Vector tx(p + 1);
  for (Eigen::Index i = 0; i < p; ++i) tx(1 + i) = rng.uniform(0.5, 2.0);
  Matrix m = v * tx.tail(p).asDiagonal() * v.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  tx(0) = es.eigenvalues()(0) * rng.uniform(-0.5, 0.8);
  return tx;
}

}  // namespace nsconic
