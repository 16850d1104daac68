#pragma once

#include "lrsplit/lowrank.hpp"
#include "lrsplit/nonlinearity.hpp"

namespace lrsplit {

// Fixed-step solver for the three substep ODEs. The projector-splitting
// construction fixes neither; RK4 with one substep keeps the substep error
// far below the outer splitting error, explicit Euler is exact on the
// constant-field cases and useful for exactness tests.
struct SubstepSolver {
  enum class Kind { ExplicitEuler, RK4 };
  Kind kind = Kind::RK4;
  int substeps = 1;
};

// One step of the first-order projector-splitting (KSL) integrator for
//   dY/dt = P(Y) G(t, Y)
// in factored form. The three substeps run consecutively with frozen
// co-factors:
//   K-step: K = U S,    dK/dt =  G(t, K V^T) V,        qr(K) -> (U1, S^)
//   S-step:             dS/dt = -U1^T G(t, U1 S V^T) V  from S^  -> S~
//   L-step: L = V S~^T, dL/dt =  G(t, U1 L^T)^T U1,     qr(L) -> (V1, S1^T)
// The minus sign of the S-step realizes the backward core substep of the
// split projection. Throws NonFiniteEvaluation if G produces Inf/NaN.
LowRankState ksl_step(const LowRankState& Y, const Nonlinearity& G, double t0, double tau,
                      const SubstepSolver& solver);

// n-fold composition of ksl_step over [t0, T]; (T - t0)/tau must be a
// positive integer.
LowRankState ksl_multi(const LowRankState& Y, const Nonlinearity& G, double t0, double T,
                       double tau, const SubstepSolver& solver);

namespace detail {
// Resolves (T - t0)/tau to an integer step count; throws std::invalid_argument
// when tau does not divide the interval, StepCountOverflow above 1e7 steps.
long resolve_step_count(double t0, double T, double tau);
}  // namespace detail

}  // namespace lrsplit
