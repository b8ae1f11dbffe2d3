#pragma once

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fusionlab/algebra.hpp"
#include "fusionlab/errors.hpp"
#include "fusionlab/numeric.hpp"
#include "fusionlab/random.hpp"
#include "fusionlab/types.hpp"

namespace fusionlab::testing {

inline double diff(const Mat& a, const Mat& b) { return (a - b).norm(); }
inline double from_identity(const Mat& a) {
  return (a - Mat::Identity(a.rows(), a.cols())).norm();
}
inline bool is_isometry(const Mat& a, double tol = 1e-10) {
  return from_identity(a.adjoint() * a) <= tol;
}

inline Mat diag2(double a, double b) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace fusionlab::testing
