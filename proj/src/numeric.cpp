#include "fusionlab/numeric.hpp"

#include <algorithm>
#include <cmath>

#include "fusionlab/errors.hpp"

namespace fusionlab {

void fix_column_phases(Mat& v, double cut) {
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      Cx e = v(i, j);
      if (std::abs(e) > cut) {
        v.col(j) *= std::abs(e) / e;
        break;
      }
    }
  }
}

std::pair<RVec, Mat> hermitian_eig(const Mat& a) {
  if (a.rows() != a.cols()) throw NotHermitian("matrix is not square");
  double scale = std::max(1.0, a.norm());
  if ((a - a.adjoint()).norm() > 1e-12 * scale)
    throw NotHermitian("relative deviation from the adjoint exceeds 1e-12");
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.info() != Eigen::Success) throw NonConvergence("hermitian eigensolver failed");
  RVec w = es.eigenvalues().reverse();
  Mat v = es.eigenvectors().rowwise().reverse();
  return {std::move(w), std::move(v)};
}

Mat psd_power(const Mat& a, double p, RankTolerance tol) {
  auto [w, v] = hermitian_eig(a);
  const Eigen::Index n = w.size();
  double wmax = n ? w(0) : 0.0;
  double wmin = n ? w(n - 1) : 0.0;
  if (wmin <= tol.relative_epsilon * wmax || wmax <= 0.0)
    throw NotPositiveDefinite("min eigenvalue below relative cutoff");
  RVec wp(n);
  for (Eigen::Index i = 0; i < n; ++i) wp(i) = std::pow(w(i), p);
  return v * wp.cast<Cx>().asDiagonal() * v.adjoint();
}

namespace {

// Columns of V past the numerical rank.  smax is the cutoff reference.
Mat kernel_from_svd(const Eigen::JacobiSVD<Mat>& svd, double rel, double smax) {
  const auto& s = svd.singularValues();
  const Mat& v = svd.matrixV();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < v.cols(); ++i)
    if (i >= s.size() || s(i) <= rel * smax) keep.push_back(i);
  Mat out(v.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) out.col(j) = v.col(keep[j]);
  fix_column_phases(out);
  return out;
}

}  // namespace

Mat nullspace(const Mat& a, RankTolerance tol) {
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  return kernel_from_svd(svd, tol.relative_epsilon, smax);
}

Mat solve_nullspace(const Mat& a, double rel) {
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double smax = std::max(s.size() ? s(0) : 0.0, 1.0);
  return kernel_from_svd(svd, rel, smax);
}

Mat orthonormal_range(const Mat& a, RankTolerance tol) {
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol.relative_epsilon * smax) ++rank;
  if (smax == 0.0) rank = 0;
  Mat out = svd.matrixU().leftCols(rank);
  fix_column_phases(out);
  return out;
}

int matrix_rank(const Mat& a, RankTolerance tol) {
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  if (smax == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol.relative_epsilon * smax) ++rank;
  return rank;
}

double operator_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace fusionlab
