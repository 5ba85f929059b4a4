#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace polarcs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Sorted, 0-based coordinate indices.
using IndexSet = std::vector<std::size_t>;

/// Relative singular-value threshold for every rank decision in the library.
inline constexpr double kRankTolerance = 1e-10;

}  // namespace polarcs
