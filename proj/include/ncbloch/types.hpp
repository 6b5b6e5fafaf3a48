#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace ncbloch {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using LatticeVector = std::vector<int>;

inline constexpr cplx I_unit{0.0, 1.0};

// Largest absolute entry, 0 for an empty matrix.
double max_abs(const Matrix& m);

}  // namespace ncbloch
