#pragma once

#include <Eigen/Dense>

namespace scca {

// Dense matrices are column-major (Eigen default): entry (i, j) lives at
// data()[i + j * rows()]. Data matrices hold one sample per column.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kDefaultRankTol = 1e-10;

}  // namespace scca
