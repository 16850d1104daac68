#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "lrsplit/errors.hpp"
#include "lrsplit/problems.hpp"
#include "lrsplit/types.hpp"

namespace lrsplit {

struct ToleranceSpec {
  double rtol = 1e-10;
  double atol = 1e-10;
  long max_steps = 2000000;
};

// Classical fourth-order Runge-Kutta with n_steps uniform steps. Non-finite
// values propagate into the result; nothing is thrown.
template <typename Rhs>
DenseMatrix rk4_fixed(Rhs&& f, DenseMatrix X, double t0, double T, long n_steps) {
  const double h = (T - t0) / static_cast<double>(n_steps);
  for (long k = 0; k < n_steps; ++k) {
    const double t = t0 + k * h;
    const DenseMatrix k1 = f(t, X);
    const DenseMatrix k2 = f(t + 0.5 * h, X + (0.5 * h) * k1);
    const DenseMatrix k3 = f(t + 0.5 * h, X + (0.5 * h) * k2);
    const DenseMatrix k4 = f(t + h, X + h * k3);
    X += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return X;
}

// Dormand-Prince 5(4) embedded pair with standard error-per-step control:
// componentwise scale atol + rtol*max(|y0|,|y1|), safety factor 0.9, step
// ratio clipped to [0.2, 5]. Throws MaxStepsExceeded and StepUnderflow.
template <typename Rhs>
DenseMatrix dopri5_generic(Rhs&& f, DenseMatrix X, double t0, double T,
                           const ToleranceSpec& tol) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

  if (T <= t0) return X;

  double t = t0;
  double h = (T - t0) / 100.0;
  DenseMatrix k1 = f(t, X);
  long n_steps = 0;

  while (t < T) {
    if (++n_steps > tol.max_steps)
      throw MaxStepsExceeded("dopri5: exceeded " + std::to_string(tol.max_steps) + " steps");
    if (h < 1e-14 * (T - t0))
      throw StepUnderflow("dopri5: step size collapsed below 1e-14*(T - t0)");
    if (t + h > T) h = T - t;

    const DenseMatrix k2 = f(t + c2 * h, X + h * (a21 * k1));
    const DenseMatrix k3 = f(t + c3 * h, X + h * (a31 * k1 + a32 * k2));
    const DenseMatrix k4 = f(t + c4 * h, X + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const DenseMatrix k5 = f(t + c5 * h, X + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const DenseMatrix k6 =
        f(t + h, X + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const DenseMatrix X1 = X + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const DenseMatrix k7 = f(t + h, X1);

    const DenseMatrix err_mat =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const auto scale = (tol.atol + tol.rtol * X.cwiseAbs().cwiseMax(X1.cwiseAbs()).array());
    const double err = std::sqrt((err_mat.array() / scale).square().mean());

    if (!std::isfinite(err)) {
      h *= 0.2;
      continue;
    }
    if (err <= 1.0) {
      t += h;
      X = X1;
      k1 = k7;  // first-same-as-last
    }
    const double factor = 0.9 * std::pow(std::max(err, 1e-16), -0.2);
    h *= std::min(5.0, std::max(0.2, factor));
  }
  return X;
}

// Reference solve of the full problem right-hand side.
DenseMatrix dopri5(const ProblemSpec& problem, double t0, double T, const ToleranceSpec& tol);

// Reference states at increasing sample times (first entry may equal t0, for
// which X0 is returned directly).
std::vector<DenseMatrix> dopri5_samples(const ProblemSpec& problem,
                                        const std::vector<double>& times,
                                        const ToleranceSpec& tol);

}  // namespace lrsplit
