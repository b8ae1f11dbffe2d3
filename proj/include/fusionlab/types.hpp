#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <complex>

namespace fusionlab {

using Cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline Mat dag(const Mat& a) { return a.adjoint(); }

// Conjugate-linear in the first argument, matching the (x,y) -> phi(y*x)
// convention used for all inner products in this library.
inline Cx vdot(const Vec& a, const Vec& b) { return a.dot(b); }

inline Mat kron(const Mat& a, const Mat& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

inline Mat eye(Eigen::Index n) { return Mat::Identity(n, n); }
inline Mat zeros(Eigen::Index r, Eigen::Index c) { return Mat::Zero(r, c); }

inline Vec basis_vec(Eigen::Index n, Eigen::Index i) {
  Vec v = Vec::Zero(n);
  v(i) = 1.0;
  return v;
}

}  // namespace fusionlab
