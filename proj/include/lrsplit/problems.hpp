#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "lrsplit/nonlinearity.hpp"
#include "lrsplit/operator.hpp"
#include "lrsplit/types.hpp"

namespace lrsplit {

// Interior grid of the unit interval with homogeneous Dirichlet boundary:
// m inner points, spacing h = 1/(m+1).
struct GridSpec {
  Index m;
  double h;
  static GridSpec interior(Index m) { return {m, 1.0 / static_cast<double>(m + 1)}; }
};

// Second-order finite-difference Laplacian tridiag(1, -2, 1)/h^2 on the
// interior grid; symmetric negative definite.
DenseMatrix build_laplacian_1d(Index m, double h);

// Conservative discretization of d/dx(alpha(x) d/dx .) - lambda I with
// half-grid coefficients alpha((j +- 1/2) h), homogeneous Dirichlet.
// Symmetric, and negative definite for alpha > 0, lambda >= 0.
DenseMatrix build_variable_diffusion(Index m, const std::function<double(double)>& alpha,
                                     double lambda);

// q x m output matrix with rows {1, e_1..e_{(q-1)/2}, f_1..f_{(q-1)/2}},
// e_k(x) = sqrt(2) cos(2 pi k x), f_k(x) = sqrt(2) sin(2 pi k x), evaluated
// at x_j = j/(m+1). Requires odd q <= m.
DenseMatrix build_C(Index q, Index m);

// One instance of dX/dt = A X + X A^T + G(t, X), X(t0) = X0, together with
// its default integration horizon. A is held behind the operator interface
// so large problems stay matrix-free.
struct ProblemSpec {
  std::string label;
  std::shared_ptr<const LinearOperator> A;
  std::shared_ptr<const Nonlinearity> G;
  DenseMatrix X0;
  double t0 = 0.0;
  double T = 1.0;
  std::optional<DenseMatrix> Q;  // constant source term, when the problem has one

  Index dim() const { return X0.rows(); }

  // A X + X A^T, applied through the (possibly sparse) operator.
  DenseMatrix apply_linear(const DenseMatrix& X) const;

  // Full right-hand side A X + X A^T + G(t, X).
  DenseMatrix rhs(double t, const DenseMatrix& X) const;
};

// 2D reaction-diffusion problem dv/dt = alpha Lap v + v^3 on the unit square
// with homogeneous Dirichlet boundary, alpha = 1/50, discretized with m inner
// points per direction; v(0,x,y) = 16 x(1-x) y(1-y) (rank-1), T = 0.5.
ProblemSpec preset_reaction_diffusion(Index m);

// Differential Lyapunov equation dX/dt = A X + X A^T + Q with the
// variable-coefficient diffusion operator (alpha(x) = 2 + cos(2 pi x),
// lambda = 1), Q = C^T C from build_C, X0 = 0, T = 0.1.
ProblemSpec preset_dle(Index m, Index q);

// Differential Riccati equation dX/dt = A X + X A^T + C^T C - X K X with the
// same diffusion operator, K = I, X0 = 0, T = 0.1 (linear quadratic
// regulator setting).
ProblemSpec preset_dre(Index m, Index q);

// Periodic smooth compatibility problem: circulant Laplacian, a constant
// low-rank source built from trigonometric modes, smooth rank-2 initial
// value. The solution stays in a 4-dimensional mode space, so the Strang
// variant can show its full order without boundary-induced reduction.
ProblemSpec preset_periodic_smooth(Index m);

// Entrywise cube, X.^3.
class CubeNonlinearity final : public Nonlinearity {
 public:
  DenseMatrix eval(double t, const DenseMatrix& X) const override {
    (void)t;
    return X.array().cube().matrix();
  }
};

// Solution-independent source G(t, X) = Q.
class ConstantNonlinearity final : public Nonlinearity {
 public:
  explicit ConstantNonlinearity(DenseMatrix Q) : Q_(std::move(Q)) {}
  DenseMatrix eval(double, const DenseMatrix&) const override { return Q_; }
  DenseMatrix eval_times(double, const DenseMatrix&, const DenseMatrix& V) const override {
    return Q_ * V;
  }
  DenseMatrix eval_trans_times(double, const DenseMatrix&, const DenseMatrix& U) const override {
    return Q_.transpose() * U;
  }
  const DenseMatrix& Q() const { return Q_; }

 private:
  DenseMatrix Q_;
};

// Quadratic Riccati term G(t, X) = Q - X K X; an empty K means the identity.
class RiccatiNonlinearity final : public Nonlinearity {
 public:
  RiccatiNonlinearity(DenseMatrix Q, std::optional<DenseMatrix> K)
      : Q_(std::move(Q)), K_(std::move(K)) {}

  DenseMatrix eval(double, const DenseMatrix& X) const override {
    if (K_) return Q_ - X * (*K_) * X;
    return Q_ - X * X;
  }
  DenseMatrix eval_times(double, const DenseMatrix& X, const DenseMatrix& V) const override {
    if (K_) return Q_ * V - X * ((*K_) * (X * V));
    return Q_ * V - X * (X * V);
  }
  DenseMatrix eval_trans_times(double, const DenseMatrix& X,
                               const DenseMatrix& U) const override {
    // (Q - X K X)^T U with symmetric Q and K handled without transposes of
    // the quadratic term: (XKX)^T = X^T K^T X^T.
    if (K_) return Q_.transpose() * U - X.transpose() * (K_->transpose() * (X.transpose() * U));
    return Q_.transpose() * U - X.transpose() * (X.transpose() * U);
  }

 private:
  DenseMatrix Q_;
  std::optional<DenseMatrix> K_;
};

}  // namespace lrsplit
