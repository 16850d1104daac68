#pragma once

#include <functional>
#include <utility>

#include "lrsplit/types.hpp"

namespace lrsplit {

// Evaluator of the non-stiff term G(t, X). The contraction hooks let
// structured problems (Lyapunov/Riccati) form G(t,X)*V and G(t,X)^T*U
// without materializing the m x m product; overrides must agree with the
// dense route to 1e-12 relative.
class Nonlinearity {
 public:
  virtual ~Nonlinearity() = default;

  virtual DenseMatrix eval(double t, const DenseMatrix& X) const = 0;

  virtual DenseMatrix eval_times(double t, const DenseMatrix& X, const DenseMatrix& V) const {
    return eval(t, X) * V;
  }

  virtual DenseMatrix eval_trans_times(double t, const DenseMatrix& X,
                                       const DenseMatrix& U) const {
    return eval(t, X).transpose() * U;
  }
};

class ZeroNonlinearity final : public Nonlinearity {
 public:
  DenseMatrix eval(double t, const DenseMatrix& X) const override {
    (void)t;
    return DenseMatrix::Zero(X.rows(), X.cols());
  }
  DenseMatrix eval_times(double t, const DenseMatrix& X, const DenseMatrix& V) const override {
    (void)t;
    return DenseMatrix::Zero(X.rows(), V.cols());
  }
  DenseMatrix eval_trans_times(double t, const DenseMatrix& X,
                               const DenseMatrix& U) const override {
    (void)t;
    return DenseMatrix::Zero(X.cols(), U.cols());
  }
};

// Adapter for ad-hoc evaluators (tests, custom problems).
class FunctionNonlinearity final : public Nonlinearity {
 public:
  using Fn = std::function<DenseMatrix(double, const DenseMatrix&)>;
  explicit FunctionNonlinearity(Fn fn) : fn_(std::move(fn)) {}
  DenseMatrix eval(double t, const DenseMatrix& X) const override { return fn_(t, X); }

 private:
  Fn fn_;
};

}  // namespace lrsplit
