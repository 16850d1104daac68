#include "lrsplit/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lrsplit {

namespace {
constexpr double kPi = std::numbers::pi;
}

DenseMatrix build_laplacian_1d(Index m, double h) {
  if (m < 2) throw std::invalid_argument("build_laplacian_1d: m must be >= 2");
  if (h <= 0.0) throw std::invalid_argument("build_laplacian_1d: h must be positive");
  const double w = 1.0 / (h * h);
  DenseMatrix A = DenseMatrix::Zero(m, m);
  for (Index i = 0; i < m; ++i) {
    A(i, i) = -2.0 * w;
    if (i > 0) A(i, i - 1) = w;
    if (i + 1 < m) A(i, i + 1) = w;
  }
  return A;
}

DenseMatrix build_variable_diffusion(Index m, const std::function<double(double)>& alpha,
                                     double lambda) {
  if (m < 2) throw std::invalid_argument("build_variable_diffusion: m must be >= 2");
  const double h = 1.0 / static_cast<double>(m + 1);
  const double w = 1.0 / (h * h);
  DenseMatrix A = DenseMatrix::Zero(m, m);
  for (Index j = 0; j < m; ++j) {
    // Half-grid coefficients around the j-th inner point x = (j+1) h.
    const double am = alpha((j + 0.5) * h);
    const double ap = alpha((j + 1.5) * h);
    A(j, j) = -(am + ap) * w - lambda;
    if (j > 0) A(j, j - 1) = am * w;
    if (j + 1 < m) A(j, j + 1) = ap * w;
  }
  return A;
}

DenseMatrix build_C(Index q, Index m) {
  if (q % 2 == 0) throw std::invalid_argument("build_C: q must be odd");
  if (q > m) throw std::invalid_argument("build_C: q must not exceed m");
  DenseMatrix C(q, m);
  C.row(0).setOnes();
  const Index pairs = (q - 1) / 2;
  for (Index k = 1; k <= pairs; ++k) {
    for (Index j = 0; j < m; ++j) {
      const double x = static_cast<double>(j + 1) / static_cast<double>(m + 1);
      C(k, j) = std::sqrt(2.0) * std::cos(2.0 * kPi * k * x);
      C(pairs + k, j) = std::sqrt(2.0) * std::sin(2.0 * kPi * k * x);
    }
  }
  return C;
}

DenseMatrix ProblemSpec::apply_linear(const DenseMatrix& X) const {
  // X A^T = (A X^T)^T, so both sides go through the operator's apply.
  return A->apply(X) + A->apply(X.transpose()).transpose();
}

DenseMatrix ProblemSpec::rhs(double t, const DenseMatrix& X) const {
  return apply_linear(X) + G->eval(t, X);
}

ProblemSpec preset_reaction_diffusion(Index m) {
  if (m < 4) throw std::invalid_argument("preset_reaction_diffusion: m must be >= 4");
  const GridSpec grid = GridSpec::interior(m);
  constexpr double alpha = 1.0 / 50.0;

  ProblemSpec p;
  p.label = "reaction_diffusion";
  p.A = make_operator(alpha * build_laplacian_1d(m, grid.h));

  Vector g(m);
  for (Index i = 0; i < m; ++i) {
    const double x = (i + 1) * grid.h;
    g(i) = x * (1.0 - x);
  }
  p.X0 = 16.0 * g * g.transpose();
  p.G = std::make_shared<CubeNonlinearity>();
  p.t0 = 0.0;
  p.T = 0.5;
  return p;
}

namespace {

ProblemSpec lyapunov_like(Index m, Index q, bool riccati) {
  const auto alpha = [](double x) { return 2.0 + std::cos(2.0 * kPi * x); };
  ProblemSpec p;
  p.A = make_operator(build_variable_diffusion(m, alpha, 1.0));
  const DenseMatrix C = build_C(q, m);
  DenseMatrix Q = C.transpose() * C;
  p.X0 = DenseMatrix::Zero(m, m);
  p.t0 = 0.0;
  p.T = 0.1;
  if (riccati) {
    p.label = "dre";
    p.G = std::make_shared<RiccatiNonlinearity>(Q, std::nullopt);
  } else {
    p.label = "dle";
    p.G = std::make_shared<ConstantNonlinearity>(Q);
  }
  p.Q = std::move(Q);
  return p;
}

}  // namespace

ProblemSpec preset_dle(Index m, Index q) { return lyapunov_like(m, q, false); }

ProblemSpec preset_dre(Index m, Index q) { return lyapunov_like(m, q, true); }

ProblemSpec preset_periodic_smooth(Index m) {
  if (m < 8) throw std::invalid_argument("preset_periodic_smooth: m must be >= 8");
  const double h = 1.0 / static_cast<double>(m);
  constexpr double nu = 1.0 / 50.0;
  const double w = nu / (h * h);

  DenseMatrix A = DenseMatrix::Zero(m, m);
  for (Index i = 0; i < m; ++i) {
    A(i, i) = -2.0 * w;
    A(i, (i + 1) % m) = w;
    A(i, (i + m - 1) % m) = w;
  }

  // Trigonometric grid modes; exact eigenvectors of the circulant stencil,
  // so the solution never leaves their span.
  const auto mode = [&](int k, bool sine) {
    Vector v(m);
    for (Index j = 0; j < m; ++j) {
      const double x = static_cast<double>(j) * h;
      v(j) = sine ? std::sin(2.0 * kPi * k * x) : std::cos(2.0 * kPi * k * x);
    }
    return v;
  };
  const Vector c1 = mode(1, false), s1 = mode(1, true);
  const Vector c2 = mode(2, false), s2 = mode(2, true);

  ProblemSpec p;
  p.label = "periodic_smooth";
  p.A = make_operator(A);
  p.X0 = c1 * c1.transpose() + 0.5 * s1 * s1.transpose();
  DenseMatrix Q = 0.3 * (c2 * s2.transpose() + s2 * c2.transpose());
  p.G = std::make_shared<ConstantNonlinearity>(Q);
  p.Q = std::move(Q);
  p.t0 = 0.0;
  p.T = 0.5;
  return p;
}

}  // namespace lrsplit
