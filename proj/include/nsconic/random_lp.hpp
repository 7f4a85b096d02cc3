#pragma once

#include <cstdint>
#include <vector>

#include "nsconic/error.hpp"
#include "nsconic/linalg.hpp"
#include "nsconic/problem.hpp"
#include "nsconic/random.hpp"

namespace nsconic {

struct RandomLp {
  ProblemData problem;
  Vector feasible_x;  // strictly feasible primal point used to build b
};

/**
 * Standard-form LP that is primal and dual strictly feasible by construction:
 * A ~ U[-1, 1], x̂ ~ U[1, 2], b = Ax̂, ŷ ~ U[-1, 1], ŝ ~ U[1, 2], c = Aᵀŷ + ŝ.
 */
inline RandomLp random_lp(Eigen::Index m, Eigen::Index n, std::uint64_t seed) {
  if (m < 0 || n < 1 || m >= n) {
    throw Error(ErrorKind::InputError, "random_lp needs 0 <= m < n");
  }
  Rng rng(seed);
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(m * n));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) entries.push_back({i, j, rng.uniform(-1.0, 1.0)});
  }
  SparseMatrix a(m, n, entries);
  Vector xhat(n), yhat(m), shat(n);
  for (auto& v : xhat) v = rng.uniform(1.0, 2.0);
  for (auto& v : yhat) v = rng.uniform(-1.0, 1.0);
  for (auto& v : shat) v = rng.uniform(1.0, 2.0);
  Vector b = spmv(a, xhat);
  Vector c = spmv(a, yhat, /*transpose=*/true) + shat;
  return {{std::move(a), std::move(b), std::move(c)}, std::move(xhat)};
}

}  // namespace nsconic
