#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "nsconic/error.hpp"

namespace nsconic {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Triplet {
  Eigen::Index row;
  Eigen::Index col;
  double value;
};

/**
 * Sparse real matrix. Built from coordinate triplets, canonicalized once
 * (sorted, duplicates summed) into compressed-column storage.
 */
class SparseMatrix {
 public:
  SparseMatrix() = default;

  SparseMatrix(Eigen::Index rows, Eigen::Index cols,
               std::span<const Triplet> entries = {})
      : storage_(rows, cols) {
    if (rows < 0 || cols < 0) {
      throw Error(ErrorKind::DimensionMismatch, "negative matrix shape");
    }
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(entries.size());
    for (const auto& t : entries) {
      if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
        throw Error(ErrorKind::DimensionMismatch,
                    "triplet index (" + std::to_string(t.row) + ", " +
                        std::to_string(t.col) + ") outside " +
                        std::to_string(rows) + "x" + std::to_string(cols));
      }
      if (!std::isfinite(t.value)) {
        throw Error(ErrorKind::NonFinite, "non-finite matrix entry");
      }
      trips.emplace_back(t.row, t.col, t.value);
    }
    storage_.setFromTriplets(trips.begin(), trips.end());
    storage_.makeCompressed();
  }

  static SparseMatrix from_dense(const Matrix& dense) {
    std::vector<Triplet> entries;
    for (Eigen::Index j = 0; j < dense.cols(); ++j) {
      for (Eigen::Index i = 0; i < dense.rows(); ++i) {
        if (dense(i, j) != 0.0) entries.push_back({i, j, dense(i, j)});
      }
    }
    return SparseMatrix(dense.rows(), dense.cols(), entries);
  }

  static SparseMatrix identity(Eigen::Index n) {
    std::vector<Triplet> entries;
    for (Eigen::Index i = 0; i < n; ++i) entries.push_back({i, i, 1.0});
    return SparseMatrix(n, n, entries);
  }

  Eigen::Index rows() const { return storage_.rows(); }
  Eigen::Index cols() const { return storage_.cols(); }
  Eigen::Index nnz() const { return storage_.nonZeros(); }

  /// Canonical triplets in column-major order.
  std::vector<Triplet> triplets() const {
    std::vector<Triplet> out;
    out.reserve(static_cast<std::size_t>(nnz()));
    for (Eigen::Index j = 0; j < storage_.outerSize(); ++j) {
      for (Storage::InnerIterator it(storage_, j); it; ++it) {
        out.push_back({it.row(), it.col(), it.value()});
      }
    }
    return out;
  }

  Matrix to_dense() const { return Matrix(storage_); }

  using Storage = Eigen::SparseMatrix<double, Eigen::ColMajor>;
  const Storage& eigen() const { return storage_; }

 private:
  Storage storage_;
};

/// y = A v, or y = Aᵀ v when `transpose` is set.
inline Vector spmv(const SparseMatrix& a, const Vector& v, bool transpose = false) {
  const auto expected = transpose ? a.rows() : a.cols();
  if (v.size() != expected) {
    throw Error(ErrorKind::DimensionMismatch,
                "spmv operand has length " + std::to_string(v.size()) +
                    ", expected " + std::to_string(expected));
  }
  if (transpose) return a.eigen().transpose() * v;
  return a.eigen() * v;
}

/**
 * Symmetric matrix. The lower triangle is authoritative; the upper triangle is
 * mirrored from it on construction so `matrix()` is always exactly symmetric.
 */
class DenseSymMatrix {
 public:
  DenseSymMatrix() = default;
  explicit DenseSymMatrix(Matrix values) : values_(std::move(values)) {
    if (values_.rows() != values_.cols()) {
      throw Error(ErrorKind::DimensionMismatch, "symmetric matrix must be square");
    }
    values_.triangularView<Eigen::StrictlyUpper>() = values_.transpose();
  }

  static DenseSymMatrix diagonal(const Vector& d) {
    return DenseSymMatrix(Matrix(d.asDiagonal()));
  }

  Eigen::Index order() const { return values_.rows(); }
  const Matrix& matrix() const { return values_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }

 private:
  Matrix values_;
};

/// Lower-triangular L with positive diagonal such that L·Lᵀ is the factored matrix.
class CholeskyFactor {
 public:
  CholeskyFactor() = default;
  explicit CholeskyFactor(Matrix lower) : lower_(std::move(lower)) {
    lower_.triangularView<Eigen::StrictlyUpper>().setZero();
  }

  Eigen::Index order() const { return lower_.rows(); }
  const Matrix& lower() const { return lower_; }
  Matrix reconstruct() const { return lower_ * lower_.transpose(); }

 private:
  Matrix lower_;
};

enum class FactorStatus { Ok, NotPD, NonFinite };

struct FactorResult {
  FactorStatus status = FactorStatus::NotPD;
  CholeskyFactor factor;

  bool ok() const { return status == FactorStatus::Ok; }
};

/// Dense Cholesky. Failure is reported in the status, never thrown.
inline FactorResult chol_spd(const DenseSymMatrix& m) {
  if (!m.matrix().allFinite()) return {FactorStatus::NonFinite, {}};
  Eigen::LLT<Matrix, Eigen::Lower> llt(m.matrix());
  if (llt.info() != Eigen::Success) return {FactorStatus::NotPD, {}};
  Matrix lower = llt.matrixL();
  if (!lower.allFinite() || (lower.diagonal().array() <= 0.0).any()) {
    return {FactorStatus::NotPD, {}};
  }
  return {FactorStatus::Ok, CholeskyFactor(std::move(lower))};
}

namespace detail {
inline void check_solve_dims(const CholeskyFactor& l, Eigen::Index rhs_rows) {
  if (rhs_rows != l.order()) {
    throw Error(ErrorKind::DimensionMismatch,
                "triangular solve rhs has " + std::to_string(rhs_rows) +
                    " rows, factor order is " + std::to_string(l.order()));
  }
}
}  // namespace detail

/// Solves L·x = rhs.
inline Vector solve_lower(const CholeskyFactor& l, const Vector& rhs) {
  detail::check_solve_dims(l, rhs.size());
  return l.lower().triangularView<Eigen::Lower>().solve(rhs);
}

/// Solves Lᵀ·x = rhs.
inline Vector solve_lower_transpose(const CholeskyFactor& l, const Vector& rhs) {
  detail::check_solve_dims(l, rhs.size());
  return l.lower().transpose().triangularView<Eigen::Upper>().solve(rhs);
}

/// Column-wise L⁻¹·rhs for a block of right-hand sides.
inline Matrix solve_lower_block(const CholeskyFactor& l, const Matrix& rhs) {
  detail::check_solve_dims(l, rhs.rows());
  return l.lower().triangularView<Eigen::Lower>().solve(rhs);
}

/// (L·Lᵀ)⁻¹·rhs.
inline Vector solve_spd(const CholeskyFactor& l, const Vector& rhs) {
  return solve_lower_transpose(l, solve_lower(l, rhs));
}

}  // namespace nsconic
