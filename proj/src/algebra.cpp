#include "fusionlab/algebra.hpp"

#include <cmath>
#include <utility>

#include "fusionlab/errors.hpp"
#include "fusionlab/numeric.hpp"

namespace fusionlab {

Algebra::Algebra(std::vector<int> block_sizes) : ns_(std::move(block_sizes)) {
  if (ns_.empty()) throw InputError("algebra needs at least one block");
  off_.reserve(ns_.size());
  for (int n : ns_) {
    if (n < 1) throw InputError("block sizes must be positive");
    off_.push_back(dim_);
    dim_ += n * n;
  }
}

void Algebra::require_same(const Algebra& o) const {
  if (!same(o)) throw AlgebraMismatch("elements belong to different algebras");
}

void Algebra::require_element(const AlgElem& x) const {
  if (static_cast<int>(x.b.size()) != nblocks())
    throw AlgebraMismatch("block count does not match the algebra");
  for (int k = 0; k < nblocks(); ++k)
    if (x.b[k].rows() != ns_[k] || x.b[k].cols() != ns_[k])
      throw AlgebraMismatch("block shape does not match the algebra");
}

AlgElem Algebra::zero() const {
  AlgElem x;
  x.b.reserve(ns_.size());
  for (int n : ns_) x.b.push_back(Mat::Zero(n, n));
  return x;
}

AlgElem Algebra::unit() const {
  AlgElem x;
  x.b.reserve(ns_.size());
  for (int n : ns_) x.b.push_back(Mat::Identity(n, n));
  return x;
}

AlgElem Algebra::matrix_unit(int k, int i, int j) const {
  AlgElem x = zero();
  x.b[k](i, j) = 1.0;
  return x;
}

std::vector<AlgElem> Algebra::matrix_unit_basis() const {
  std::vector<AlgElem> out;
  out.reserve(dim_);
  for (int k = 0; k < nblocks(); ++k)
    for (int i = 0; i < ns_[k]; ++i)
      for (int j = 0; j < ns_[k]; ++j) out.push_back(matrix_unit(k, i, j));
  return out;
}

AlgElem Algebra::central_projection(int k) const {
  AlgElem x = zero();
  x.b[k] = Mat::Identity(ns_[k], ns_[k]);
  return x;
}

Vec Algebra::coords(const AlgElem& x) const {
  require_element(x);
  Vec v(dim_);
  int p = 0;
  for (int k = 0; k < nblocks(); ++k)
    for (int i = 0; i < ns_[k]; ++i)
      for (int j = 0; j < ns_[k]; ++j) v(p++) = x.b[k](i, j);
  return v;
}

AlgElem Algebra::from_coords(const Vec& v) const {
  if (v.size() != dim_) throw AlgebraMismatch("coordinate length mismatch");
  AlgElem x = zero();
  int p = 0;
  for (int k = 0; k < nblocks(); ++k)
    for (int i = 0; i < ns_[k]; ++i)
      for (int j = 0; j < ns_[k]; ++j) x.b[k](i, j) = v(p++);
  return x;
}

AlgElem Algebra::add(const AlgElem& x, const AlgElem& y) const {
  require_element(x);
  require_element(y);
  AlgElem z = x;
  for (int k = 0; k < nblocks(); ++k) z.b[k] += y.b[k];
  return z;
}

AlgElem Algebra::sub(const AlgElem& x, const AlgElem& y) const {
  require_element(x);
  require_element(y);
  AlgElem z = x;
  for (int k = 0; k < nblocks(); ++k) z.b[k] -= y.b[k];
  return z;
}

AlgElem Algebra::mul(const AlgElem& x, const AlgElem& y) const {
  require_element(x);
  require_element(y);
  AlgElem z = zero();
  for (int k = 0; k < nblocks(); ++k) z.b[k] = x.b[k] * y.b[k];
  return z;
}

AlgElem Algebra::star(const AlgElem& x) const {
  require_element(x);
  AlgElem z = zero();
  for (int k = 0; k < nblocks(); ++k) z.b[k] = x.b[k].adjoint();
  return z;
}

AlgElem Algebra::scale(Cx c, const AlgElem& x) const {
  require_element(x);
  AlgElem z = x;
  for (int k = 0; k < nblocks(); ++k) z.b[k] *= c;
  return z;
}

double Algebra::norm(const AlgElem& x) const { return coords(x).norm(); }

State make_state(const Algebra& alg, std::vector<Mat> densities,
                 RankTolerance tol) {
  State phi{std::move(densities)};
  CheckReport rep = check_faithful_state(alg, phi, tol);
  if (!rep.pass()) {
    for (const auto& r : rep.records)
      if (!r.pass) {
        if (r.name == "normalization")
          throw InputError("state densities do not sum to unit trace");
        throw NotPositiveDefinite("state is not faithful: " + r.name);
      }
  }
  return phi;
}

Cx state_eval(const Algebra& alg, const State& phi, const AlgElem& x) {
  alg.require_element(x);
  if (phi.rho.size() != x.b.size())
    throw AlgebraMismatch("state and element block counts differ");
  Cx s = 0.0;
  for (int k = 0; k < alg.nblocks(); ++k) s += (phi.rho[k] * x.b[k]).trace();
  return s;
}

CheckReport check_faithful_state(const Algebra& alg, const State& phi,
                                 RankTolerance tol) {
  CheckReport rep;
  if (static_cast<int>(phi.rho.size()) != alg.nblocks()) {
    rep.add_flag("block_count", false);
    return rep;
  }
  double herm = 0.0;
  double tr = 0.0;
  double worst_margin = 0.0;  // most negative (min eig - cutoff) over blocks
  bool first = true;
  for (int k = 0; k < alg.nblocks(); ++k) {
    const Mat& r = phi.rho[k];
    if (r.rows() != alg.block_size(k) || r.cols() != alg.block_size(k)) {
      rep.add_flag("density_shape", false);
      return rep;
    }
    herm = std::max(herm, (r - r.adjoint()).norm());
    tr += r.trace().real();
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(r));
    double wmin = es.eigenvalues().minCoeff();
    double wmax = es.eigenvalues().maxCoeff();
    double margin = wmin - tol.relative_epsilon * std::max(wmax, 0.0);
    if (first || margin < worst_margin) worst_margin = margin;
    first = false;
  }
  rep.add("hermitian", herm, 1e-12);
  rep.add("normalization", std::abs(tr - 1.0), 1e-12);
  // Faithfulness margin: min eig must clear the relative cutoff on every
  // block; residual is the (signed) violation so the margin stays visible.
  rep.add("faithful", -worst_margin, 0.0);
  return rep;
}

}  // namespace fusionlab
