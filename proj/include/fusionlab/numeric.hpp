#pragma once

#include <utility>

#include "fusionlab/types.hpp"

namespace fusionlab {

// Relative rank cutoff measured against the largest singular (or eigen) value.
struct RankTolerance {
  double relative_epsilon = 1e-9;
};

// Eigenvalues descending, eigenvectors as matching columns of a unitary.
// Throws NotHermitian when the relative deviation from A* exceeds 1e-12,
// NonConvergence when the solver fails.
std::pair<RVec, Mat> hermitian_eig(const Mat& a);

// A^p for p in {1/2, -1/2, -1} on a Hermitian positive-definite A.
// Throws NotPositiveDefinite when min eig <= relative_epsilon * max eig.
Mat psd_power(const Mat& a, double p, RankTolerance tol = {});

// Orthonormal basis of the numerical kernel; zero columns is a valid result.
Mat nullspace(const Mat& a, RankTolerance tol = {});

// Orthonormal basis of the numerical column span, singular values descending,
// each column's first entry of modulus > 1e-8 rotated real positive.
Mat orthonormal_range(const Mat& a, RankTolerance tol = {});

int matrix_rank(const Mat& a, RankTolerance tol = {});

// Kernel basis for stacked intertwiner systems: the cutoff floor is
// max(s_max, 1) because the rows are built from unit-scaled actions, so an
// all-tiny spectrum means "everything is a solution", not "rank deficient".
Mat solve_nullspace(const Mat& a, double rel = 1e-9);

double operator_norm(const Mat& a);

inline Mat hermitize(const Mat& a) { return 0.5 * (a + a.adjoint()); }

// First entry of modulus > cut made real positive; in-place column fix.
void fix_column_phases(Mat& v, double cut = 1e-8);

}  // namespace fusionlab
