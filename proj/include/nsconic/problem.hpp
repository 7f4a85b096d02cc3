#pragma once

#include <string>

#include "nsconic/error.hpp"
#include "nsconic/linalg.hpp"

namespace nsconic {

/// Conic standard form: minimize cᵀx subject to Ax = b, x ∈ K.
struct ProblemData {
  SparseMatrix A;
  Vector b;
  Vector c;

  Eigen::Index m() const { return A.rows(); }
  Eigen::Index n() const { return A.cols(); }

  void validate() const {
    if (b.size() != A.rows()) {
      throw Error(ErrorKind::InputError, "b has length " + std::to_string(b.size()) +
                                             " but A has " + std::to_string(A.rows()) + " rows");
    }
    if (c.size() != A.cols()) {
      throw Error(ErrorKind::InputError, "c has length " + std::to_string(c.size()) +
                                             " but A has " + std::to_string(A.cols()) + " columns");
    }
    if (!b.allFinite() || !c.allFinite()) {
      throw Error(ErrorKind::InputError, "problem data contains non-finite values");
    }
  }
};

}  // namespace nsconic
