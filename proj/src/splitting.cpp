#include "lrsplit/splitting.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "lrsplit/errors.hpp"
#include "lrsplit/reference.hpp"

namespace lrsplit {

LinearPropagator::LinearPropagator(std::shared_ptr<const LinearOperator> A, double tau,
                                   ExpmMethod method)
    : A_(std::move(A)), tau_(tau), method_(method) {
  if (tau_ < 0.0) throw std::invalid_argument("LinearPropagator: tau must be nonnegative");
  if (method_ == ExpmMethod::Dense && tau_ > 0.0)
    propagator_ = expm_dense(tau_ * A_->dense());
}

DenseMatrix LinearPropagator::apply(const DenseMatrix& B) const {
  if (tau_ == 0.0) return B;
  if (method_ == ExpmMethod::Dense) return propagator_ * B;
  return expm_action(*A_, tau_, B, ExpmMethod::Krylov);
}

DenseMatrix LinearPropagator::sandwich(const DenseMatrix& X) const {
  if (tau_ == 0.0) return X;
  if (method_ == ExpmMethod::Dense) return propagator_ * X * propagator_.transpose();
  return apply(apply(X).transpose()).transpose();
}

LowRankState phi_A(const LowRankState& Y, const LinearPropagator& prop) {
  if (prop.tau() == 0.0) return Y;
  LowRankState out = reorthonormalize(prop.apply(Y.U), Y.S, prop.apply(Y.V), Y.t);
  out.check_orthonormal();
  return out;
}

LowRankState phi_A(const LowRankState& Y, const LinearOperator& A, double tau,
                   ExpmMethod method) {
  if (tau == 0.0) return Y;
  LowRankState out =
      reorthonormalize(expm_action(A, tau, Y.U, method), Y.S, expm_action(A, tau, Y.V, method),
                       Y.t);
  out.check_orthonormal();
  return out;
}

namespace {

LowRankState lie_step_with(const LowRankState& Y, const ProblemSpec& problem,
                           const LinearPropagator& prop, const SchemeConfig& cfg) {
  return phi_A(ksl_step(Y, *problem.G, Y.t, prop.tau(), cfg.substep), prop);
}

LowRankState strang_step_with(const LowRankState& Y, const ProblemSpec& problem,
                              const LinearPropagator& half, double tau,
                              const SchemeConfig& cfg) {
  LowRankState out = phi_A(Y, half);
  out = ksl_step(out, *problem.G, out.t, tau, cfg.substep);
  return phi_A(out, half);
}

DenseMatrix fullrank_step_with(const DenseMatrix& X, const ProblemSpec& problem,
                               const LinearPropagator& prop, const SchemeConfig& cfg,
                               double t) {
  // Nonlinear flow with the substep solver over [t, t + tau], matching the
  // order used inside the projector-splitting step.
  const auto rhs = [&](double s, const DenseMatrix& Z) { return problem.G->eval(s, Z); };
  DenseMatrix X2 = X;
  const int n = cfg.substep.substeps;
  const double h = prop.tau() / n;
  for (int i = 0; i < n; ++i) {
    const double s = t + i * h;
    switch (cfg.substep.kind) {
      case SubstepSolver::Kind::ExplicitEuler:
        X2 += h * rhs(s, X2);
        break;
      case SubstepSolver::Kind::RK4: {
        const DenseMatrix k1 = rhs(s, X2);
        const DenseMatrix k2 = rhs(s + 0.5 * h, X2 + (0.5 * h) * k1);
        const DenseMatrix k3 = rhs(s + 0.5 * h, X2 + (0.5 * h) * k2);
        const DenseMatrix k4 = rhs(s + h, X2 + h * k3);
        X2 += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        break;
      }
    }
  }
  return prop.sandwich(X2);
}

}  // namespace

LowRankState lie_lowrank_step(const LowRankState& Y, const ProblemSpec& problem, double tau,
                              const SchemeConfig& cfg) {
  LinearPropagator prop(problem.A, tau, cfg.expm_method);
  return lie_step_with(Y, problem, prop, cfg);
}

LowRankState strang_lowrank_step(const LowRankState& Y, const ProblemSpec& problem, double tau,
                                 const SchemeConfig& cfg) {
  LinearPropagator half(problem.A, tau / 2.0, cfg.expm_method);
  return strang_step_with(Y, problem, half, tau, cfg);
}

DenseMatrix lie_fullrank_step(const DenseMatrix& X, const ProblemSpec& problem, double tau,
                              const SchemeConfig& cfg, double t) {
  if (problem.dim() > kDenseCap)
    throw std::invalid_argument("lie_fullrank_step: dimension exceeds the dense cap");
  LinearPropagator prop(problem.A, tau, cfg.expm_method);
  return fullrank_step_with(X, problem, prop, cfg, t);
}

double IntegrationResult::eps_hat_max() const {
  double m = 0.0;
  for (const StepDiagnostics& d : steps) m = std::max(m, d.eps_hat);
  return m;
}

IntegrationResult integrate(const ProblemSpec& problem, const SchemeConfig& cfg, double t0,
                            double T) {
  IntegrationResult result;

  if (cfg.scheme == Scheme::Reference) {
    result.lowrank = false;
    result.X = dopri5(problem, t0, T, ToleranceSpec{});
    return result;
  }

  const long n = detail::resolve_step_count(t0, T, cfg.tau);

  if (cfg.scheme == Scheme::FullRankLie) {
    if (problem.dim() > kDenseCap)
      throw std::invalid_argument("integrate: full-rank scheme above the dense cap");
    LinearPropagator prop(problem.A, cfg.tau, cfg.expm_method);
    result.lowrank = false;
    result.X = problem.X0;
    for (long k = 0; k < n; ++k)
      result.X = fullrank_step_with(result.X, problem, prop, cfg, t0 + k * cfg.tau);
    return result;
  }

  if (cfg.rank < 1) throw std::invalid_argument("integrate: rank must be >= 1");

  Truncation tr = truncate_to_rank(problem.X0, cfg.rank);
  result.lowrank = true;
  result.delta = tr.delta;
  LowRankState Y = std::move(tr.state);
  Y.t = t0;

  const bool strang = cfg.scheme == Scheme::LowRankStrang;
  LinearPropagator prop(problem.A, strang ? cfg.tau / 2.0 : cfg.tau, cfg.expm_method);

  result.steps.reserve(static_cast<size_t>(n));
  for (long k = 0; k < n; ++k) {
    StepDiagnostics diag;
    diag.t = Y.t;
    diag.eps_hat = tangent_residual(Y, problem.G->eval(Y.t, to_dense(Y)));
    diag.singvals = svd_full(Y.S).sigma;
    result.steps.push_back(std::move(diag));

    Y = strang ? strang_step_with(Y, problem, prop, cfg.tau, cfg)
               : lie_step_with(Y, problem, prop, cfg);
  }
  result.Y = std::move(Y);
  return result;
}

ErrorDecomposition error_decomposition(const ProblemSpec& problem, const SchemeConfig& cfg,
                                       double t0, double T) {
  if (problem.dim() > kDenseCap)
    throw std::invalid_argument("error_decomposition: dimension exceeds the dense cap");

  const long n = detail::resolve_step_count(t0, T, cfg.tau);
  const DenseMatrix X_ref = dopri5(problem, t0, T, ToleranceSpec{});

  // The decomposition is defined for the Lie-Trotter composition; the
  // configured rank, substep solver and exponential method are honored.
  LinearPropagator prop(problem.A, cfg.tau, cfg.expm_method);

  DenseMatrix XL = problem.X0;
  for (long k = 0; k < n; ++k)
    XL = fullrank_step_with(XL, problem, prop, cfg, t0 + k * cfg.tau);

  Truncation tr = truncate_to_rank(problem.X0, cfg.rank);
  DenseMatrix YL = to_dense(tr.state);
  for (long k = 0; k < n; ++k)
    YL = fullrank_step_with(YL, problem, prop, cfg, t0 + k * cfg.tau);

  LowRankState Y = std::move(tr.state);
  Y.t = t0;
  for (long k = 0; k < n; ++k) Y = lie_step_with(Y, problem, prop, cfg);
  const DenseMatrix Yd = to_dense(Y);

  ErrorDecomposition e;
  e.e_sp = (X_ref - XL).norm();
  e.e_delta = (XL - YL).norm();
  e.e_lr = (YL - Yd).norm();
  e.total = (X_ref - Yd).norm();
  return e;
}

}  // namespace lrsplit
