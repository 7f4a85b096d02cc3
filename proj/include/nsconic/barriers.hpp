#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "nsconic/error.hpp"
#include "nsconic/linalg.hpp"

namespace nsconic {

/// How much of the barrier an evaluation computes. Each level includes the previous.
enum class EvalOrder : int {
  Membership = 0,
  Gradient = 1,  // value and gradient
  Hessian = 2,
  Cholesky = 3,
};

inline bool includes(EvalOrder have, EvalOrder want) {
  return static_cast<int>(have) >= static_cast<int>(want);
}

/// Result of one oracle call. Derivative fields are meaningful only when
/// `in_interior` holds and `order` covers them.
struct BarrierEval {
  bool in_interior = false;
  EvalOrder order = EvalOrder::Membership;
  double value = std::numeric_limits<double>::quiet_NaN();
  Vector gradient;
  DenseSymMatrix hessian;
  CholeskyFactor cholesky;

  static BarrierEval exterior() { return {}; }
};

/// A logarithmically homogeneous self-concordant barrier together with its
/// membership test. Implementations must be immutable after construction.
class Barrier {
 public:
  virtual ~Barrier() = default;
  virtual Eigen::Index dim() const = 0;
  virtual double nu() const = 0;
  virtual Vector initial_point() const = 0;
  /// `x` has length dim(); checked by BarrierOracle.
  virtual BarrierEval evaluate(const Vector& x, EvalOrder order) const = 0;
};

/// Shared, immutable handle to a barrier. Cheap to copy.
class BarrierOracle {
 public:
  BarrierOracle() = default;
  explicit BarrierOracle(std::shared_ptr<const Barrier> impl) : impl_(std::move(impl)) {}

  Eigen::Index dim() const { return impl_->dim(); }
  double nu() const { return impl_->nu(); }
  Vector initial_point() const { return impl_->initial_point(); }

  BarrierEval eval(const Vector& x, EvalOrder order) const {
    if (x.size() != dim()) {
      throw Error(ErrorKind::DimensionMismatch,
                  "oracle point has length " + std::to_string(x.size()) +
                      ", cone dimension is " + std::to_string(dim()));
    }
    if (!x.allFinite()) return BarrierEval::exterior();
    return impl_->evaluate(x, order);
  }

  bool contains(const Vector& x) const { return eval(x, EvalOrder::Membership).in_interior; }

  explicit operator bool() const { return static_cast<bool>(impl_); }
  const Barrier& impl() const { return *impl_; }

 private:
  std::shared_ptr<const Barrier> impl_;
};

template <typename B, typename... Args>
BarrierOracle make_oracle(Args&&... args) {
  return BarrierOracle(std::make_shared<const B>(std::forward<Args>(args)...));
}

namespace detail {

/// Fills the Cholesky slot from the Hessian; a failed factorization marks the
/// point exterior.
inline BarrierEval& factor_hessian(BarrierEval& e) {
  auto fac = chol_spd(e.hessian);
  if (!fac.ok()) {
    e = BarrierEval::exterior();
    return e;
  }
  e.cholesky = std::move(fac.factor);
  return e;
}

inline BarrierEval interior(EvalOrder order) {
  BarrierEval e;
  e.in_interior = true;
  e.order = order;
  return e;
}

}  // namespace detail

/// f(x) = −Σ ln xᵢ on the nonnegative orthant.
class LpBarrier final : public Barrier {
 public:
  explicit LpBarrier(Eigen::Index dim) : dim_(dim) {
    if (dim < 1) throw Error(ErrorKind::BadSpec, "lp cone needs dim >= 1");
  }

  Eigen::Index dim() const override { return dim_; }
  double nu() const override { return static_cast<double>(dim_); }
  Vector initial_point() const override { return Vector::Ones(dim_); }

  BarrierEval evaluate(const Vector& x, EvalOrder order) const override {
    if (!(x.minCoeff() > 0.0)) return BarrierEval::exterior();
    auto e = detail::interior(order);
    if (!includes(order, EvalOrder::Gradient)) return e;
    e.value = -x.array().log().sum();
    e.gradient = -x.cwiseInverse();
    if (!includes(order, EvalOrder::Hessian)) return e;
    e.hessian = DenseSymMatrix::diagonal(x.array().square().inverse().matrix());
    if (includes(order, EvalOrder::Cholesky)) {
      e.cholesky = CholeskyFactor(Matrix(x.cwiseInverse().asDiagonal()));
    }
    return e;
  }

 private:
  Eigen::Index dim_;
};

/// f(x) = −ln(x₀² − ‖x̄‖²) on the second-order cone; ν = 2 in every dimension.
class SocBarrier final : public Barrier {
 public:
  explicit SocBarrier(Eigen::Index dim) : dim_(dim) {
    if (dim < 2) throw Error(ErrorKind::BadSpec, "socp cone needs dim >= 2");
  }

  Eigen::Index dim() const override { return dim_; }
  double nu() const override { return 2.0; }
  Vector initial_point() const override {
    Vector x = Vector::Zero(dim_);
    x(0) = 1.0;
    return x;
  }

  BarrierEval evaluate(const Vector& x, EvalOrder order) const override {
    const double head = x(0);
    const double tail = x.tail(dim_ - 1).norm();
    if (!(head > tail)) return BarrierEval::exterior();
    // (x₀ − ‖x̄‖)(x₀ + ‖x̄‖) loses less precision than x₀² − ‖x̄‖² near the boundary.
    const double d = (head - tail) * (head + tail);
    if (!(d > 0.0)) return BarrierEval::exterior();
    auto e = detail::interior(order);
    if (!includes(order, EvalOrder::Gradient)) return e;
    Vector jx = -x;
    jx(0) = head;
    e.value = -std::log(d);
    e.gradient = (-2.0 / d) * jx;
    if (!includes(order, EvalOrder::Hessian)) return e;
    Matrix h = (4.0 / (d * d)) * jx * jx.transpose();
    h.diagonal().array() += 2.0 / d;
    h(0, 0) -= 4.0 / d;
    e.hessian = DenseSymMatrix(std::move(h));
    if (includes(order, EvalOrder::Cholesky)) detail::factor_hessian(e);
    return e;
  }

 private:
  Eigen::Index dim_;
};

/// f(x) = −ln x₁ − ln x₂ − ln(x₂ ln(x₁/x₂) − x₃) on the exponential cone.
class ExpBarrier final : public Barrier {
 public:
  Eigen::Index dim() const override { return 3; }
  double nu() const override { return 3.0; }
  Vector initial_point() const override { return Vector{{2.0, 1.0, 0.0}}; }

  BarrierEval evaluate(const Vector& x, EvalOrder order) const override {
    const double x1 = x(0), x2 = x(1), x3 = x(2);
    if (!(x1 > 0.0 && x2 > 0.0)) return BarrierEval::exterior();
    const double log_ratio = std::log(x1 / x2);
    const double r = x2 * log_ratio - x3;
    if (!(r > 0.0)) return BarrierEval::exterior();
    auto e = detail::interior(order);
    if (!includes(order, EvalOrder::Gradient)) return e;
    const Vector dr{{x2 / x1, log_ratio - 1.0, -1.0}};
    e.value = -std::log(x1) - std::log(x2) - std::log(r);
    e.gradient = Vector{{-1.0 / x1, -1.0 / x2, 0.0}} - dr / r;
    if (!includes(order, EvalOrder::Hessian)) return e;
    Matrix d2r = Matrix::Zero(3, 3);
    d2r(0, 0) = -x2 / (x1 * x1);
    d2r(0, 1) = d2r(1, 0) = 1.0 / x1;
    d2r(1, 1) = -1.0 / x2;
    Matrix h = dr * dr.transpose() / (r * r) - d2r / r;
    h(0, 0) += 1.0 / (x1 * x1);
    h(1, 1) += 1.0 / (x2 * x2);
    e.hessian = DenseSymMatrix(std::move(h));
    if (includes(order, EvalOrder::Cholesky)) detail::factor_hessian(e);
    return e;
  }
};

/**
 * Generalized power cone {(x, z) : x ≥ 0, |z| ≤ Π xᵢ^λᵢ} with barrier
 * f(x, z) = −ln(Π xᵢ^{2λᵢ} − z²) − Σ (1 − λᵢ) ln xᵢ, ν = len(λ) + 1.
 * The coordinates are ordered (x₁, …, xₙ, z).
 */
class GpowBarrier final : public Barrier {
 public:
  explicit GpowBarrier(Vector lambda) : lambda_(std::move(lambda)) {
    if (lambda_.size() < 1) throw Error(ErrorKind::BadSpec, "gpow needs a nonempty signature");
    if (!(lambda_.minCoeff() > 0.0)) {
      throw Error(ErrorKind::BadSpec, "gpow signature entries must be positive");
    }
    if (std::abs(lambda_.sum() - 1.0) > 1e-10) {
      throw Error(ErrorKind::BadSpec, "gpow signature must sum to 1");
    }
  }

  Eigen::Index dim() const override { return lambda_.size() + 1; }
  double nu() const override { return static_cast<double>(lambda_.size() + 1); }
  Vector initial_point() const override {
    Vector x = Vector::Ones(dim());
    x(dim() - 1) = 0.0;
    return x;
  }
  const Vector& lambda() const { return lambda_; }

  BarrierEval evaluate(const Vector& point, EvalOrder order) const override {
    const Eigen::Index n = lambda_.size();
    const auto x = point.head(n);
    const double z = point(n);
    if (!(x.minCoeff() > 0.0)) return BarrierEval::exterior();
    const Vector log_x = x.array().log().matrix();
    const double phi = std::exp(2.0 * lambda_.dot(log_x));
    const double d = phi - z * z;
    if (!(d > 0.0)) return BarrierEval::exterior();
    auto e = detail::interior(order);
    if (!includes(order, EvalOrder::Gradient)) return e;

    const Vector inv_x = x.cwiseInverse();
    // ∇φ w.r.t. x, scaled by 1/φ: 2λᵢ/xᵢ.
    const Vector a = 2.0 * lambda_.cwiseProduct(inv_x);
    Vector dd(n + 1);
    dd.head(n) = phi * a;
    dd(n) = -2.0 * z;

    e.value = -std::log(d) - (Vector::Ones(n) - lambda_).dot(log_x);
    e.gradient = -dd / d;
    e.gradient.head(n) -= (Vector::Ones(n) - lambda_).cwiseProduct(inv_x);
    if (!includes(order, EvalOrder::Hessian)) return e;

    Matrix d2 = Matrix::Zero(n + 1, n + 1);
    d2.topLeftCorner(n, n) = phi * a * a.transpose();
    d2.topLeftCorner(n, n).diagonal() -= phi * a.cwiseProduct(inv_x);
    d2(n, n) = -2.0;
    Matrix h = dd * dd.transpose() / (d * d) - d2 / d;
    h.topLeftCorner(n, n).diagonal() +=
        (Vector::Ones(n) - lambda_).cwiseProduct(inv_x.cwiseProduct(inv_x));
    e.hessian = DenseSymMatrix(std::move(h));
    if (includes(order, EvalOrder::Cholesky)) detail::factor_hessian(e);
    return e;
  }

 private:
  Vector lambda_;
};

/// Free variables embedded in a second-order cone: coordinate 0 is the dummy u,
/// followed by the `dim` free coordinates.
inline BarrierOracle free_embed(Eigen::Index dim) {
  if (dim < 1) throw Error(ErrorKind::BadSpec, "free block needs dim >= 1");
  return make_oracle<SocBarrier>(dim + 1);
}

/// Sum of barriers over a Cartesian product; ν adds up.
class ProductBarrier final : public Barrier {
 public:
  explicit ProductBarrier(std::vector<BarrierOracle> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw Error(ErrorKind::BadSpec, "product needs at least one factor");
    offsets_.reserve(factors_.size() + 1);
    offsets_.push_back(0);
    for (const auto& f : factors_) {
      offsets_.push_back(offsets_.back() + f.dim());
      nu_ += f.nu();
    }
  }

  Eigen::Index dim() const override { return offsets_.back(); }
  double nu() const override { return nu_; }
  Vector initial_point() const override {
    Vector x(dim());
    for (std::size_t k = 0; k < factors_.size(); ++k) {
      x.segment(offsets_[k], factors_[k].dim()) = factors_[k].initial_point();
    }
    return x;
  }

  const std::vector<BarrierOracle>& factors() const { return factors_; }
  const std::vector<Eigen::Index>& offsets() const { return offsets_; }

  BarrierEval evaluate(const Vector& x, EvalOrder order) const override {
    std::vector<BarrierEval> parts;
    parts.reserve(factors_.size());
    for (std::size_t k = 0; k < factors_.size(); ++k) {
      Vector block = x.segment(offsets_[k], factors_[k].dim());
      auto e = factors_[k].eval(block, order);
      if (!e.in_interior) return BarrierEval::exterior();
      parts.push_back(std::move(e));
    }
    auto e = detail::interior(order);
    if (!includes(order, EvalOrder::Gradient)) return e;
    const Eigen::Index n = dim();
    e.value = 0.0;
    e.gradient.resize(n);
    for (std::size_t k = 0; k < parts.size(); ++k) {
      e.value += parts[k].value;
      e.gradient.segment(offsets_[k], factors_[k].dim()) = parts[k].gradient;
    }
    if (!includes(order, EvalOrder::Hessian)) return e;
    Matrix h = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const auto nk = factors_[k].dim();
      h.block(offsets_[k], offsets_[k], nk, nk) = parts[k].hessian.matrix();
    }
    e.hessian = DenseSymMatrix(std::move(h));
    if (!includes(order, EvalOrder::Cholesky)) return e;
    Matrix l = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const auto nk = factors_[k].dim();
      l.block(offsets_[k], offsets_[k], nk, nk) = parts[k].cholesky.lower();
    }
    e.cholesky = CholeskyFactor(std::move(l));
    return e;
  }

 private:
  std::vector<BarrierOracle> factors_;
  std::vector<Eigen::Index> offsets_;
  double nu_ = 0.0;
};

inline BarrierOracle product_oracle(std::vector<BarrierOracle> factors) {
  return make_oracle<ProductBarrier>(std::move(factors));
}

/// f_C(x) = f_K(Mx) on C = {x : Mx ∈ K}. The caller supplies a point of C°,
/// checked on construction.
class PullbackBarrier final : public Barrier {
 public:
  PullbackBarrier(BarrierOracle inner, SparseMatrix map, Vector start)
      : inner_(std::move(inner)), map_(std::move(map)), dense_map_(map_.to_dense()),
        start_(std::move(start)) {
    if (map_.rows() != inner_.dim()) {
      throw Error(ErrorKind::DimensionMismatch,
                  "pullback map has " + std::to_string(map_.rows()) +
                      " rows, inner cone dimension is " + std::to_string(inner_.dim()));
    }
    if (start_.size() != map_.cols()) {
      throw Error(ErrorKind::DimensionMismatch, "pullback start point has wrong length");
    }
    if (!inner_.contains(spmv(map_, start_))) {
      throw Error(ErrorKind::RangeError, "start point maps outside the inner cone interior");
    }
  }

  Eigen::Index dim() const override { return map_.cols(); }
  double nu() const override { return inner_.nu(); }
  Vector initial_point() const override { return start_; }

  BarrierEval evaluate(const Vector& x, EvalOrder order) const override {
    const EvalOrder inner_order =
        includes(order, EvalOrder::Hessian) ? EvalOrder::Hessian : order;
    auto ie = inner_.eval(spmv(map_, x), inner_order);
    if (!ie.in_interior) return BarrierEval::exterior();
    auto e = detail::interior(order);
    if (!includes(order, EvalOrder::Gradient)) return e;
    e.value = ie.value;
    e.gradient = spmv(map_, ie.gradient, /*transpose=*/true);
    if (!includes(order, EvalOrder::Hessian)) return e;
    e.hessian = DenseSymMatrix(dense_map_.transpose() * ie.hessian.matrix() * dense_map_);
    if (includes(order, EvalOrder::Cholesky)) detail::factor_hessian(e);
    return e;
  }

 private:
  BarrierOracle inner_;
  SparseMatrix map_;
  Matrix dense_map_;
  Vector start_;
};

inline BarrierOracle pullback_oracle(BarrierOracle inner, SparseMatrix map, Vector start) {
  return make_oracle<PullbackBarrier>(std::move(inner), std::move(map), std::move(start));
}

/// Adapts a user callable `(x, order) -> BarrierEval` to the oracle interface.
class FunctionBarrier final : public Barrier {
 public:
  using Fn = std::function<BarrierEval(const Vector&, EvalOrder)>;

  FunctionBarrier(Eigen::Index dim, double nu, Vector start, Fn fn)
      : dim_(dim), nu_(nu), start_(std::move(start)), fn_(std::move(fn)) {
    if (!(nu_ > 0.0)) throw Error(ErrorKind::BadSpec, "barrier parameter must be positive");
  }

  Eigen::Index dim() const override { return dim_; }
  double nu() const override { return nu_; }
  Vector initial_point() const override { return start_; }
  BarrierEval evaluate(const Vector& x, EvalOrder order) const override {
    auto e = fn_(x, order);
    if (e.in_interior && includes(order, EvalOrder::Cholesky) &&
        e.cholesky.order() != dim_) {
      detail::factor_hessian(e);
    }
    return e;
  }

 private:
  Eigen::Index dim_;
  double nu_;
  Vector start_;
  Fn fn_;
};

struct FdReport {
  double gradient_error = 0.0;  // ‖g_fd − g‖∞ / ‖g‖∞
  double hessian_error = 0.0;   // max|H_fd − H| / max|H|
  double euler_gradient = 0.0;  // |xᵀg + ν| / ν
  double euler_hessian = 0.0;   // ‖Hx + g‖ / ‖g‖
  double homogeneity = 0.0;     // max over t of |f(tx) − f(x) + ν ln t| / (1 + |f(x)|)
};

/**
 * Central-difference check of an oracle at an interior point. Step per
 * coordinate is h = 1e-4·(1 + |xᵢ|), halved while a probe leaves the cone.
 */
inline FdReport fd_check(const BarrierOracle& oracle, const Vector& x) {
  const auto e = oracle.eval(x, EvalOrder::Hessian);
  if (!e.in_interior) throw Error(ErrorKind::ExteriorPoint, "fd_check needs an interior point");
  const Eigen::Index n = x.size();
  Vector fd_grad(n);
  Matrix fd_hess(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double h = 1e-4 * (1.0 + std::abs(x(i)));
    BarrierEval plus, minus;
    for (int tries = 0; tries < 60; ++tries, h *= 0.5) {
      Vector xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      plus = oracle.eval(xp, EvalOrder::Gradient);
      minus = oracle.eval(xm, EvalOrder::Gradient);
      if (plus.in_interior && minus.in_interior) break;
    }
    if (!plus.in_interior || !minus.in_interior) {
      throw Error(ErrorKind::ExteriorPoint, "no finite-difference step stays interior");
    }
    fd_grad(i) = (plus.value - minus.value) / (2.0 * h);
    fd_hess.col(i) = (plus.gradient - minus.gradient) / (2.0 * h);
  }
  const Matrix& h = e.hessian.matrix();
  FdReport r;
  r.gradient_error = (fd_grad - e.gradient).lpNorm<Eigen::Infinity>() /
                     e.gradient.lpNorm<Eigen::Infinity>();
  r.hessian_error = (fd_hess - h).cwiseAbs().maxCoeff() / h.cwiseAbs().maxCoeff();
  r.euler_gradient = std::abs(x.dot(e.gradient) + oracle.nu()) / oracle.nu();
  r.euler_hessian = (h * x + e.gradient).norm() / e.gradient.norm();
  for (double t : {0.5, 2.0, 10.0}) {
    const auto scaled = oracle.eval(t * x, EvalOrder::Gradient);
    if (!scaled.in_interior) throw Error(ErrorKind::ExteriorPoint, "cone is not closed under scaling");
    r.homogeneity = std::max(r.homogeneity, std::abs(scaled.value - e.value + oracle.nu() * std::log(t)) /
                                                (1.0 + std::abs(e.value)));
  }
  return r;
}

}  // namespace nsconic
