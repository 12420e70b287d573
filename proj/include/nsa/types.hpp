#pragma once

#include <complex>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

namespace nsa {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr cplx kI{0.0, 1.0};

}  // namespace nsa
