#include "lrsplit/reference.hpp"

#include <stdexcept>

namespace lrsplit {

DenseMatrix dopri5(const ProblemSpec& problem, double t0, double T, const ToleranceSpec& tol) {
  if (problem.dim() > kDenseCap)
    throw std::invalid_argument("dopri5: problem dimension exceeds the dense cap");
  return dopri5_generic([&](double t, const DenseMatrix& X) { return problem.rhs(t, X); },
                        problem.X0, t0, T, tol);
}

std::vector<DenseMatrix> dopri5_samples(const ProblemSpec& problem,
                                        const std::vector<double>& times,
                                        const ToleranceSpec& tol) {
  if (problem.dim() > kDenseCap)
    throw std::invalid_argument("dopri5: problem dimension exceeds the dense cap");
  const auto rhs = [&](double t, const DenseMatrix& X) { return problem.rhs(t, X); };

  std::vector<DenseMatrix> samples;
  samples.reserve(times.size());
  DenseMatrix X = problem.X0;
  double t = problem.t0;
  for (double target : times) {
    if (target < t - 1e-14)
      throw std::invalid_argument("dopri5_samples: times must be nondecreasing from t0");
    if (target > t + 1e-14) {
      X = dopri5_generic(rhs, X, t, target, tol);
      t = target;
    }
    samples.push_back(X);
  }
  return samples;
}

}  // namespace lrsplit
