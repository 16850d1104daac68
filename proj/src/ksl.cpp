#include "lrsplit/ksl.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "lrsplit/errors.hpp"
#include "lrsplit/linalg.hpp"

namespace lrsplit {

namespace {

template <typename Rhs>
DenseMatrix advance(const SubstepSolver& solver, DenseMatrix M, double t0, double tau,
                    Rhs&& f) {
  const int n = solver.substeps;
  const double h = tau / n;
  for (int i = 0; i < n; ++i) {
    const double t = t0 + i * h;
    switch (solver.kind) {
      case SubstepSolver::Kind::ExplicitEuler: {
        M += h * f(t, M);
        break;
      }
      case SubstepSolver::Kind::RK4: {
        const DenseMatrix k1 = f(t, M);
        const DenseMatrix k2 = f(t + 0.5 * h, M + (0.5 * h) * k1);
        const DenseMatrix k3 = f(t + 0.5 * h, M + (0.5 * h) * k2);
        const DenseMatrix k4 = f(t + h, M + h * k3);
        M += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        break;
      }
    }
  }
  return M;
}

void require_finite(const DenseMatrix& G, const char* where) {
  if (!G.allFinite())
    throw NonFiniteEvaluation(std::string("ksl_step: nonlinearity returned non-finite entries in ") +
                              where);
}

}  // namespace

LowRankState ksl_step(const LowRankState& Y, const Nonlinearity& G, double t0, double tau,
                      const SubstepSolver& solver) {
  if (tau <= 0.0) throw std::invalid_argument("ksl_step: tau must be positive");
  if (solver.substeps < 1) throw std::invalid_argument("ksl_step: substeps must be >= 1");

  const DenseMatrix& V0 = Y.V;

  // K-step. The QR is unchecked: with initial data of rank below r (e.g.
  // X0 = 0 in the Riccati presets) K is exactly rank-deficient in the first
  // steps; the Householder Q stays orthonormal and the discarded directions
  // carry zero weight in S.
  DenseMatrix K = advance(solver, Y.U * Y.S, t0, tau, [&](double t, const DenseMatrix& Kc) {
    DenseMatrix GV = G.eval_times(t, Kc * V0.transpose(), V0);
    require_finite(GV, "K-step");
    return GV;
  });
  QRPair ku = qr_thin_unchecked(K);
  const DenseMatrix U1 = std::move(ku.Q);

  // S-step, integrated with the reversed sign.
  DenseMatrix S = advance(solver, std::move(ku.R), t0, tau, [&](double t, const DenseMatrix& Sc) {
    DenseMatrix GV = G.eval_times(t, U1 * (Sc * V0.transpose()), V0);
    require_finite(GV, "S-step");
    return DenseMatrix(-(U1.transpose() * GV));
  });

  // L-step.
  DenseMatrix L = advance(solver, V0 * S.transpose(), t0, tau, [&](double t, const DenseMatrix& Lc) {
    DenseMatrix GtU = G.eval_trans_times(t, U1 * Lc.transpose(), U1);
    require_finite(GtU, "L-step");
    return GtU;
  });
  QRPair lv = qr_thin_unchecked(L);

  LowRankState out;
  out.U = U1;
  out.S = lv.R.transpose();
  out.V = std::move(lv.Q);
  out.t = t0 + tau;
  out.check_orthonormal();
  return out;
}

namespace detail {

long resolve_step_count(double t0, double T, double tau) {
  if (tau <= 0.0) throw std::invalid_argument("step count: tau must be positive");
  if (T <= t0) throw std::invalid_argument("step count: T must exceed t0");
  const double ratio = (T - t0) / tau;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("step count: (T - t0)/tau is not a positive integer");
  if (rounded > 1e7) throw StepCountOverflow("step count exceeds 1e7");
  return static_cast<long>(rounded);
}

}  // namespace detail

LowRankState ksl_multi(const LowRankState& Y, const Nonlinearity& G, double t0, double T,
                       double tau, const SubstepSolver& solver) {
  const long n = detail::resolve_step_count(t0, T, tau);
  LowRankState state = Y;
  state.t = t0;
  for (long k = 0; k < n; ++k) state = ksl_step(state, G, t0 + k * tau, tau, solver);
  return state;
}

}  // namespace lrsplit
