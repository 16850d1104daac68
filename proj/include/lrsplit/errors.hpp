#pragma once

#include <stdexcept>
#include <string>

namespace lrsplit {

// A triangular factor collapsed below the rank-r working precision,
// i.e. the low-rank state lost numerical rank.
struct RankDeficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterative eigen/singular value solve exceeded its iteration cap.
struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Matrix exponential left the representable range.
struct Overflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Arnoldi residual never reached tolerance, even after substepping.
struct KrylovStagnation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A nonlinearity evaluation produced Inf/NaN entries.
struct NonFiniteEvaluation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Adaptive reference solver ran out of its step budget.
struct MaxStepsExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Adaptive step size collapsed; the explicit solver cannot resolve the
// problem at the requested tolerance (expected for very stiff systems).
struct StepUnderflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fixed-step integration would need more than the hard step-count cap.
struct StepCountOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file; carries the 1-based line number.
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, long line_number)
      : std::runtime_error(what + " (line " + std::to_string(line_number) + ")"),
        line(line_number) {}
  long line;
};

// Loaded matrix does not match the declared dimensions.
struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid experiment configuration; the message names the offending field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lrsplit
