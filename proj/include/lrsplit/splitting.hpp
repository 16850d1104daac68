#pragma once

#include <memory>
#include <vector>

#include "lrsplit/ksl.hpp"
#include "lrsplit/linalg.hpp"
#include "lrsplit/lowrank.hpp"
#include "lrsplit/problems.hpp"

namespace lrsplit {

enum class Scheme { LowRankLie, LowRankStrang, FullRankLie, Reference };

struct SchemeConfig {
  Scheme scheme = Scheme::LowRankLie;
  Index rank = 1;                              // ignored by the full-rank schemes
  double tau = 0.0;
  ExpmMethod expm_method = ExpmMethod::Dense;
  SubstepSolver substep;
};

// Flow of the stiff linear subproblem over a fixed step: holds the dense
// propagator e^{tau A} once (dense method) or applies it column-wise through
// the Krylov iteration. Reused across all steps of a trajectory.
class LinearPropagator {
 public:
  LinearPropagator(std::shared_ptr<const LinearOperator> A, double tau, ExpmMethod method);

  DenseMatrix apply(const DenseMatrix& B) const;  // e^{tau A} B

  // e^{tau A} X e^{tau A^T} for a dense square X.
  DenseMatrix sandwich(const DenseMatrix& X) const;

  double tau() const { return tau_; }

 private:
  std::shared_ptr<const LinearOperator> A_;
  double tau_;
  ExpmMethod method_;
  DenseMatrix propagator_;  // populated for the dense method
};

// Exact linear flow on the factored state:
//   e^{tau A} U S V^T e^{tau A^T} = (e^{tau A} U) S (e^{tau A} V)^T,
// followed by re-orthonormalization. Rank preserving; Y.t is not advanced
// (the nonlinear substep owns the clock).
LowRankState phi_A(const LowRankState& Y, const LinearPropagator& prop);
LowRankState phi_A(const LowRankState& Y, const LinearOperator& A, double tau,
                   ExpmMethod method);

// Low-rank Lie-Trotter step: projector-splitting step for G first, then the
// exact linear flow.
LowRankState lie_lowrank_step(const LowRankState& Y, const ProblemSpec& problem, double tau,
                              const SchemeConfig& cfg);

// Low-rank Strang step: half linear flow, full projector-splitting step,
// half linear flow.
LowRankState strang_lowrank_step(const LowRankState& Y, const ProblemSpec& problem, double tau,
                                 const SchemeConfig& cfg);

// Full-rank Lie-Trotter step: integrate dX/dt = G(t, X) over tau with the
// configured substep solver, then the dense exponential sandwich.
DenseMatrix lie_fullrank_step(const DenseMatrix& X, const ProblemSpec& problem, double tau,
                              const SchemeConfig& cfg, double t);

struct StepDiagnostics {
  double t;         // time at the start of the step
  double eps_hat;   // ||G(t,Y) - P(Y)G(t,Y)||_F
  Vector singvals;  // singular values of S
};

struct IntegrationResult {
  bool lowrank = false;
  LowRankState Y;       // valid when lowrank
  DenseMatrix X;        // valid otherwise
  double delta = 0.0;   // initial truncation error (low-rank schemes)
  std::vector<StepDiagnostics> steps;

  DenseMatrix final_dense() const { return lowrank ? to_dense(Y) : X; }
  double eps_hat_max() const;
};

// n-fold composition of the selected scheme over [t0, T]; (T - t0)/tau must
// be a positive integer (Scheme::Reference ignores tau and runs the adaptive
// reference solver). Throws StepCountOverflow above 1e7 steps.
IntegrationResult integrate(const ProblemSpec& problem, const SchemeConfig& cfg, double t0,
                            double T);

// Three-way split of the global error against the reference solution:
//   e_sp    = ||X(T) - L^n(X0)||          (full-rank splitting error)
//   e_delta = ||L^n(X0) - L^n(Y0)||       (propagated initial truncation)
//   e_lr    = ||L^n(Y0) - I^n(Y0)||       (full- vs low-rank splitting gap)
//   total   = ||X(T) - I^n(Y0)||
// with L the full-rank and I the low-rank Lie-Trotter map, Y0 the rank-r
// truncation of X0. Requires dimension below the dense cap.
struct ErrorDecomposition {
  double e_sp;
  double e_delta;
  double e_lr;
  double total;
};

ErrorDecomposition error_decomposition(const ProblemSpec& problem, const SchemeConfig& cfg,
                                       double t0, double T);

}  // namespace lrsplit
