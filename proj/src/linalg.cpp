#include "lrsplit/linalg.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "lrsplit/errors.hpp"

namespace lrsplit {

namespace {

QRPair householder_qr(const DenseMatrix& M) {
  const Index m = M.rows();
  const Index r = M.cols();
  if (m < r) throw std::invalid_argument("qr_thin: matrix must have at least as many rows as columns");

  Eigen::HouseholderQR<DenseMatrix> qr(M);
  DenseMatrix Q = qr.householderQ() * DenseMatrix::Identity(m, r);
  DenseMatrix R = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();

  // Sign convention: nonnegative diagonal of R.
  for (Index i = 0; i < r; ++i) {
    if (R(i, i) < 0.0) {
      R.row(i) = -R.row(i);
      Q.col(i) = -Q.col(i);
    }
  }
  return {std::move(Q), std::move(R)};
}

}  // namespace

QRPair qr_thin(const DenseMatrix& M) {
  QRPair f = householder_qr(M);
  const double scale = 1e-14 * M.norm();
  for (Index i = 0; i < f.R.rows(); ++i) {
    if (f.R(i, i) < scale)
      throw RankDeficient("qr_thin: diagonal of R below 1e-14*||M||_F at column " +
                          std::to_string(i));
  }
  return f;
}

QRPair qr_thin_unchecked(const DenseMatrix& M) { return householder_qr(M); }

SingularValueDecomposition svd_full(const DenseMatrix& M) {
  Eigen::BDCSVD<DenseMatrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw NoConvergence("svd_full: iterative bidiagonal solve did not converge");
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

DenseMatrix expm_dense(const DenseMatrix& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("expm_dense: matrix must be square");
  if (A.rows() > kDenseCap)
    throw std::invalid_argument("expm_dense: dimension exceeds the dense cap");
  if (!A.allFinite()) throw Overflow("expm_dense: non-finite input");

  const Index n = A.rows();
  // theta_13 from Higham's scaling analysis of the [13/13] Pade approximant.
  constexpr double theta13 = 5.371920351148152;
  static constexpr double b[] = {64764752532480000.0,
                                 32382376266240000.0,
                                 7771770303897600.0,
                                 1187353796428800.0,
                                 129060195264000.0,
                                 10559470521600.0,
                                 670442572800.0,
                                 33522128640.0,
                                 1323241920.0,
                                 40840800.0,
                                 960960.0,
                                 16380.0,
                                 182.0,
                                 1.0};

  const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  DenseMatrix As = A;
  if (norm1 > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    As /= std::ldexp(1.0, squarings);
  }

  const DenseMatrix I = DenseMatrix::Identity(n, n);
  const DenseMatrix A2 = As * As;
  const DenseMatrix A4 = A2 * A2;
  const DenseMatrix A6 = A2 * A4;
  const DenseMatrix U =
      As * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 +
            b[1] * I);
  const DenseMatrix V =
      A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;

  DenseMatrix P = (V - U).partialPivLu().solve(V + U);
  for (int s = 0; s < squarings; ++s) P = P * P;

  if (!P.allFinite()) throw Overflow("expm_dense: overflow in matrix exponential");
  return P;
}

namespace {

// One Arnoldi sweep for w ~ e^{t A} b. Fills w and returns true once the
// residual estimate beta*h_{k+1,k}*|(e^{tH})_{k,1}| drops below tol_abs.
bool arnoldi_expv(const LinearOperator& A, double t, const Vector& b, double tol_abs,
                  Vector& w) {
  const double beta = b.norm();
  if (beta == 0.0 || t == 0.0) {
    w = b;
    return true;
  }

  const Index n = b.size();
  const int kmax = static_cast<int>(std::min<Index>(detail::kKrylovBasisCap, n));
  DenseMatrix V(n, kmax + 1);
  DenseMatrix H = DenseMatrix::Zero(kmax + 1, kmax);
  V.col(0) = b / beta;

  for (int k = 0; k < kmax; ++k) {
    Vector v = A.apply(V.col(k));
    // Modified Gram-Schmidt with one reorthogonalization pass.
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j <= k; ++j) {
        const double hjk = V.col(j).dot(v);
        v -= hjk * V.col(j);
        H(j, k) += hjk;
      }
    }
    const double hk1 = v.norm();
    H(k + 1, k) = hk1;

    // The small-Hessenberg exponential is O(k^3); probe the residual only
    // every few iterations, on breakdown, and at the cap.
    const bool breakdown = hk1 <= 1e-14 * beta;
    if (breakdown || k % 3 == 2 || k == kmax - 1) {
      const DenseMatrix E = expm_dense(t * H.topLeftCorner(k + 1, k + 1));
      const double err = beta * hk1 * std::abs(E(k, 0));
      if (breakdown || err <= tol_abs) {
        w = beta * (V.leftCols(k + 1) * E.col(0));
        return true;
      }
    }
    V.col(k + 1) = v / hk1;
  }
  return false;
}

// Crude lower bound on ||A||_2 from two fixed probe vectors, used only to
// pick a sensible starting substep count.
double probe_norm(const LinearOperator& A) {
  const Index n = A.dim();
  Vector ones = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  Vector alt(n);
  for (Index i = 0; i < n; ++i) alt(i) = (i % 2 == 0) ? 1.0 : -1.0;
  alt /= alt.norm();
  return std::max(A.apply(ones).norm(), A.apply(alt).norm());
}

Vector krylov_expv(const LinearOperator& A, double tau, const Vector& b, double tol_rel,
                   int start_substeps) {
  const double target = tol_rel * b.norm();
  if (target == 0.0 || tau == 0.0) return b;

  int nsub = start_substeps;
  while (true) {
    Vector w = b;
    bool ok = true;
    const double h = tau / nsub;
    for (int i = 0; i < nsub && ok; ++i) {
      const double tol_abs = std::max(target / nsub, 5e-14 * w.norm());
      Vector next;
      ok = arnoldi_expv(A, h, w, tol_abs, next);
      if (ok) w = std::move(next);
    }
    if (ok) return w;
    if (nsub >= detail::kKrylovMaxSubsteps)
      throw KrylovStagnation("expm_action: Arnoldi residual stagnated at basis cap " +
                             std::to_string(detail::kKrylovBasisCap) + " with " +
                             std::to_string(nsub) + " substeps");
    nsub *= 2;
  }
}

}  // namespace

DenseMatrix expm_action(const LinearOperator& A, double tau, const DenseMatrix& B,
                        ExpmMethod method) {
  if (tau < 0.0) throw std::invalid_argument("expm_action: tau must be nonnegative");
  if (A.dim() != B.rows()) throw std::invalid_argument("expm_action: dimension mismatch");
  if (!B.allFinite()) throw std::invalid_argument("expm_action: non-finite input block");
  if (tau == 0.0) return B;

  if (method == ExpmMethod::Dense) return expm_dense(tau * A.dense()) * B;

  const double rough_norm = probe_norm(A);
  int nsub = 1;
  while (nsub < detail::kKrylovMaxSubsteps && tau * rough_norm / nsub > 8.0) nsub *= 2;

  DenseMatrix W(B.rows(), B.cols());
  for (Index j = 0; j < B.cols(); ++j)
    W.col(j) = krylov_expv(A, tau, B.col(j), 1e-10, nsub);
  return W;
}

std::shared_ptr<const LinearOperator> make_operator(const DenseMatrix& A) {
  Eigen::SparseMatrix<double> S = A.sparseView();
  S.makeCompressed();
  return std::make_shared<SparseOperator>(std::move(S));
}

}  // namespace lrsplit
