#pragma once

#include <Eigen/SparseCore>
#include <string>

#include "lrsplit/types.hpp"

namespace lrsplit {

// Parsed Matrix Market content (coordinate or array, real, general or
// symmetric). Symmetric storage is expanded to the full matrix.
struct MatrixMarketData {
  Eigen::SparseMatrix<double> matrix;
  bool symmetric = false;

  Index rows() const { return matrix.rows(); }
  Index cols() const { return matrix.cols(); }
  DenseMatrix dense() const { return DenseMatrix(matrix); }
};

// Throws ParseError (with line number) on malformed input.
MatrixMarketData load_matrix_market(const std::string& path);

// Writes the nonzero entries in coordinate real general format with full
// double precision, so a load reproduces M exactly.
void save_matrix_market(const std::string& path, const DenseMatrix& M);

}  // namespace lrsplit
