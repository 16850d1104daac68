#pragma once

#include "lrsplit/types.hpp"

namespace lrsplit {

// Factored rank-r state Y = U S V^T with orthonormal U, V. S is square and
// kept invertible in exact arithmetic but may carry arbitrarily small (or,
// for zero initial data, exactly zero) singular values; no operation in this
// library ever divides by them.
struct LowRankState {
  DenseMatrix U;  // m x r, orthonormal columns
  DenseMatrix S;  // r x r, not necessarily diagonal
  DenseMatrix V;  // m x r, orthonormal columns
  double t = 0.0;

  Index rows() const { return U.rows(); }
  Index cols() const { return V.rows(); }
  Index rank() const { return S.rows(); }

  // Throws std::logic_error if U or V drifted from orthonormality beyond
  // 1e-10 * sqrt(r); called after every flow application.
  void check_orthonormal() const;
};

struct Truncation {
  LowRankState state;
  double delta;  // l2 norm of the discarded singular values
};

// Best Frobenius rank-r approximation via the SVD. Ranks above the numerical
// rank are permitted; trailing singular values in S are then (near) zero.
Truncation truncate_to_rank(const DenseMatrix& X, Index r);

DenseMatrix to_dense(const LowRankState& Y);

// Restores orthonormal factors after a flow has been applied to U and V:
// U_raw = Q_U R_U, V_raw = Q_V R_V, result (Q_U, R_U S R_V^T, Q_V). The
// represented matrix is unchanged. Throws RankDeficient via qr_thin.
LowRankState reorthonormalize(const DenseMatrix& U_raw, const DenseMatrix& S,
                              const DenseMatrix& V_raw, double t = 0.0);

// Same computation without the rank check. Strongly contracting exponential
// flows shrink trailing basis directions toward underflow; the corresponding
// rows of R carry the same factor into S, so the represented matrix stays
// correct and the integrator must not abort.
LowRankState reorthonormalize_unchecked(const DenseMatrix& U_raw, const DenseMatrix& S,
                                        const DenseMatrix& V_raw, double t = 0.0);

// Orthogonal projection onto the tangent space of the rank-r manifold at Y:
//   P(Y) B = U U^T B - U U^T B V V^T + B V V^T.
DenseMatrix project_tangent(const LowRankState& Y, const DenseMatrix& B);

// ||B - P(Y)B||_F, the component of B outside the tangent space. Reported as
// the eps-hat diagnostic along trajectories; never assumed small.
double tangent_residual(const LowRankState& Y, const DenseMatrix& B);

}  // namespace lrsplit
