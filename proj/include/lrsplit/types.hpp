#pragma once

#include <Eigen/Core>

namespace lrsplit {

using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Largest dimension for which dense exponentials and dense reference
// trajectories are attempted. Larger problems must go through the
// matrix-free Krylov path.
inline constexpr Index kDenseCap = 2048;

}  // namespace lrsplit
