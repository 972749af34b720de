#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace ksynth {

using Real = double;
using Complex = std::complex<double>;

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Coefficients with absolute value at or below this are dropped after
/// every bracket or linear combination.
inline constexpr Real kPruneTol = 1e-12;

}  // namespace ksynth
