#include "lrsplit/lowrank.hpp"

#include <cmath>
#include <stdexcept>

#include "lrsplit/errors.hpp"
#include "lrsplit/linalg.hpp"

namespace lrsplit {

void LowRankState::check_orthonormal() const {
  const Index r = rank();
  const DenseMatrix I = DenseMatrix::Identity(r, r);
  const double tol = 1e-10 * std::sqrt(static_cast<double>(r));
  if ((U.transpose() * U - I).norm() > tol)
    throw std::logic_error("LowRankState: U lost orthonormality");
  if ((V.transpose() * V - I).norm() > tol)
    throw std::logic_error("LowRankState: V lost orthonormality");
}

Truncation truncate_to_rank(const DenseMatrix& X, Index r) {
  if (r < 1 || r > std::min(X.rows(), X.cols()))
    throw std::invalid_argument("truncate_to_rank: rank out of range");

  SingularValueDecomposition svd = svd_full(X);
  LowRankState Y;
  Y.U = svd.U.leftCols(r);
  Y.S = svd.sigma.head(r).asDiagonal();
  Y.V = svd.V.leftCols(r);
  Y.t = 0.0;

  const Index tail = svd.sigma.size() - r;
  const double delta = tail > 0 ? svd.sigma.tail(tail).norm() : 0.0;
  return {std::move(Y), delta};
}

DenseMatrix to_dense(const LowRankState& Y) { return Y.U * Y.S * Y.V.transpose(); }

namespace {

LowRankState assemble(QRPair qu, const DenseMatrix& S, QRPair qv, double t) {
  LowRankState out;
  out.U = std::move(qu.Q);
  out.S = qu.R * S * qv.R.transpose();
  out.V = std::move(qv.Q);
  out.t = t;
  return out;
}

}  // namespace

LowRankState reorthonormalize(const DenseMatrix& U_raw, const DenseMatrix& S,
                              const DenseMatrix& V_raw, double t) {
  return assemble(qr_thin(U_raw), S, qr_thin(V_raw), t);
}

LowRankState reorthonormalize_unchecked(const DenseMatrix& U_raw, const DenseMatrix& S,
                                        const DenseMatrix& V_raw, double t) {
  return assemble(qr_thin_unchecked(U_raw), S, qr_thin_unchecked(V_raw), t);
}

DenseMatrix project_tangent(const LowRankState& Y, const DenseMatrix& B) {
  if (B.rows() != Y.rows() || B.cols() != Y.cols())
    throw std::invalid_argument("project_tangent: shape mismatch");
  const DenseMatrix UtB = Y.U.transpose() * B;         // r x m
  const DenseMatrix BV = B * Y.V;                      // m x r
  const DenseMatrix UtBV = Y.U.transpose() * BV;       // r x r
  return Y.U * UtB + (BV - Y.U * UtBV) * Y.V.transpose();
}

double tangent_residual(const LowRankState& Y, const DenseMatrix& B) {
  return (B - project_tangent(Y, B)).norm();
}

}  // namespace lrsplit
