#pragma once

#include <Eigen/Dense>
#include <complex>

namespace symcrit {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline Vec vec1(double v) { return Vec::Constant(1, v); }

inline bool all_finite(const Vec& v) { return v.allFinite(); }

}  // namespace symcrit
