#pragma once

#include "lrsplit/operator.hpp"
#include "lrsplit/types.hpp"

namespace lrsplit {

struct QRPair {
  DenseMatrix Q;  // m x r, orthonormal columns
  DenseMatrix R;  // r x r, upper triangular, nonnegative diagonal
};

// Thin Householder QR of an m x r matrix (m >= r) with the diagonal of R
// fixed nonnegative so factorizations are reproducible across runs.
// Throws RankDeficient when a diagonal entry of R falls below
// 1e-14 * ||M||_F, signalling that the state collapsed below rank r.
QRPair qr_thin(const DenseMatrix& M);

// Same factorization without the rank check. The orthonormality of Q and
// Q*R = M hold for rank-deficient input as well; exactly rank-deficient
// states legitimately pass through the projector-splitting substeps when
// the initial value has rank below r (e.g. X0 = 0).
QRPair qr_thin_unchecked(const DenseMatrix& M);

struct SingularValueDecomposition {
  DenseMatrix U;  // m x k, k = min(m, n)
  Vector sigma;   // nonincreasing, nonnegative
  DenseMatrix V;  // n x k
};

// Thin SVD, singular values sorted descending. Throws NoConvergence if the
// iterative solve fails.
SingularValueDecomposition svd_full(const DenseMatrix& M);

// Dense matrix exponential by order-13 Pade approximation with norm-based
// scaling and squaring. Requires n <= kDenseCap. Throws Overflow when the
// result leaves the representable range.
DenseMatrix expm_dense(const DenseMatrix& A);

enum class ExpmMethod { Dense, Krylov };

// Action e^{tau A} B on a tall-skinny block, tau >= 0. The Krylov variant
// runs a per-column Arnoldi iteration with relative residual tolerance
// 1e-10, adaptively substepping tau; it needs A only through apply().
// Throws KrylovStagnation if the tolerance is unreachable at the basis-size
// cap even at the substepping limit.
DenseMatrix expm_action(const LinearOperator& A, double tau, const DenseMatrix& B,
                        ExpmMethod method);

namespace detail {
// Basis-size cap and substep limit of the Krylov exponential.
inline constexpr int kKrylovBasisCap = 60;
inline constexpr int kKrylovMaxSubsteps = 1024;
}  // namespace detail

}  // namespace lrsplit
