#pragma once

#include <Eigen/SparseCore>
#include <memory>
#include <utility>

#include "lrsplit/types.hpp"

namespace lrsplit {

// Square linear operator A acting on blocks of column vectors. Both a
// matrix-free apply and (below the dense cap) a materialized matrix are
// available; the Krylov exponential path only ever uses apply().
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual Index dim() const = 0;

  // Returns A * X for an n x k block X.
  virtual DenseMatrix apply(const DenseMatrix& X) const = 0;

  // Materialized matrix; throws std::logic_error above the dense cap.
  virtual const DenseMatrix& dense() const = 0;
};

class DenseOperator final : public LinearOperator {
 public:
  explicit DenseOperator(DenseMatrix A) : A_(std::move(A)) {}

  Index dim() const override { return A_.rows(); }
  DenseMatrix apply(const DenseMatrix& X) const override { return A_ * X; }
  const DenseMatrix& dense() const override { return A_; }

 private:
  DenseMatrix A_;
};

// Sparse-backed operator. The dense image is materialized eagerly when the
// dimension permits, so concurrent read-only use needs no synchronization.
class SparseOperator final : public LinearOperator {
 public:
  explicit SparseOperator(Eigen::SparseMatrix<double> A) : A_(std::move(A)) {
    if (A_.rows() <= kDenseCap) dense_ = DenseMatrix(A_);
  }

  Index dim() const override { return A_.rows(); }
  DenseMatrix apply(const DenseMatrix& X) const override { return A_ * X; }

  const DenseMatrix& dense() const override {
    if (dense_.size() == 0 && A_.rows() > 0)
      throw std::logic_error("SparseOperator: dimension exceeds the dense cap");
    return dense_;
  }

  const Eigen::SparseMatrix<double>& sparse() const { return A_; }

 private:
  Eigen::SparseMatrix<double> A_;
  DenseMatrix dense_;
};

// Wraps a dense matrix, pruning exact zeros into a sparse applier. Banded
// stencil matrices get O(m) applies this way without a separate builder.
std::shared_ptr<const LinearOperator> make_operator(const DenseMatrix& A);

}  // namespace lrsplit
