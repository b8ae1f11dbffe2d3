#include "fusionlab/random.hpp"

#include <cmath>

#include "fusionlab/numeric.hpp"

namespace fusionlab {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 1.0 - uniform();  // (0, 1]
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double t = 2.0 * M_PI * u2;
  spare_ = r * std::sin(t);
  have_spare_ = true;
  return r * std::cos(t);
}

Cx Rng::cnormal() {
  double re = normal();
  double im = normal();
  return {re, im};
}

Mat gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Mat a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = rng.cnormal();
  return a;
}

Mat random_unitary(Rng& rng, Eigen::Index n) {
  return orthonormal_range(gaussian_matrix(rng, n, n));
}

Mat random_hermitian(Rng& rng, Eigen::Index n) {
  Mat a = gaussian_matrix(rng, n, n);
  return 0.5 * (a + a.adjoint());
}

AlgElem random_element(const Algebra& alg, Rng& rng) {
  AlgElem x = alg.zero();
  for (int k = 0; k < alg.nblocks(); ++k)
    x.b[k] = gaussian_matrix(rng, alg.block_size(k), alg.block_size(k));
  return x;
}

State random_state(const Algebra& alg, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Mat> rho;
  double tr = 0.0;
  for (int k = 0; k < alg.nblocks(); ++k) {
    int n = alg.block_size(k);
    Mat x = gaussian_matrix(rng, n, n);
    Mat r = x * x.adjoint() + 0.1 * Mat::Identity(n, n);
    tr += r.trace().real();
    rho.push_back(std::move(r));
  }
  for (auto& r : rho) r /= tr;
  return State{std::move(rho)};
}

}  // namespace fusionlab
