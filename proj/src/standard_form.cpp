#include "fusionlab/standard_form.hpp"

#include <stdexcept>
#include <utility>

#include "fusionlab/errors.hpp"
#include "fusionlab/numeric.hpp"

namespace fusionlab {

namespace {

void internal_check(bool ok, const char* what) {
  if (!ok) throw std::logic_error(std::string("internal check failed: ") + what);
}

}  // namespace

StandardForm::StandardForm(Algebra alg, State phi)
    : alg_(std::move(alg)), phi_(std::move(phi)) {
  const int d = alg_.dim();
  auto units = alg_.matrix_unit_basis();

  // Gram in the matrix-unit basis: G[p,q] = <g_q, g_p> = phi(g_p* g_q)
  Mat gram(d, d);
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q)
      gram(p, q) = state_eval(alg_, phi_, alg_.mul(alg_.star(units[p]), units[q]));
  Eigen::LLT<Mat> llt(hermitize(gram));
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("GNS Gram matrix is not positive definite");
  Mat c = llt.matrixL();
  binv_ = c.adjoint();
  b_ = Mat::Identity(d, d);
  binv_.triangularView<Eigen::Upper>().solveInPlace(b_);

  basis_.reserve(d);
  for (int j = 0; j < d; ++j) basis_.push_back(alg_.from_coords(b_.col(j)));
  omega_ = hat(alg_.unit());

  // orthonormality of the stored basis under <x,y> = phi(y*x)
  Mat gb = b_.adjoint() * gram * b_;
  internal_check((gb - Mat::Identity(d, d)).norm() < 1e-10, "basis Gram");

  rho_half_.reserve(alg_.nblocks());
  rho_mhalf_.reserve(alg_.nblocks());
  std::vector<Mat> rho_inv;
  for (int k = 0; k < alg_.nblocks(); ++k) {
    rho_half_.push_back(psd_power(hermitize(phi_.rho[k]), 0.5));
    rho_mhalf_.push_back(psd_power(hermitize(phi_.rho[k]), -0.5));
    rho_inv.push_back(psd_power(hermitize(phi_.rho[k]), -1.0));
  }

  delta_.resize(d, d);
  jmat_.resize(d, d);
  for (int a = 0; a < d; ++a) {
    const AlgElem& g = basis_[a];
    AlgElem dg = alg_.zero(), jg = alg_.zero();
    for (int k = 0; k < alg_.nblocks(); ++k) {
      dg.b[k] = phi_.rho[k] * g.b[k] * rho_inv[k];
      jg.b[k] = rho_half_[k] * g.b[k].adjoint() * rho_mhalf_[k];
    }
    delta_.col(a) = hat(dg);
    jmat_.col(a) = hat(jg);
  }

  lu_.reserve(d);
  ru_.reserve(d);
  for (int u = 0; u < d; ++u) {
    Mat lm(d, d), rm(d, d);
    AlgElem su = sigma(units[u]);
    for (int j = 0; j < d; ++j) {
      lm.col(j) = hat(alg_.mul(units[u], basis_[j]));
      rm.col(j) = hat(alg_.mul(basis_[j], su));
    }
    lu_.push_back(std::move(lm));
    ru_.push_back(std::move(rm));
  }

  l2_ = HilbertBimodule{alg_, d, lu_, ru_};

  // defining properties, not the construction formulas, are the contract
  Mat id = Mat::Identity(d, d);
  internal_check((jmat_ * jmat_.conjugate() - id).norm() < 1e-10, "J squares to one");
  internal_check((jmat_.adjoint() * jmat_ - id).norm() < 1e-10, "J isometry");
  internal_check((delta_ - delta_.adjoint()).norm() < 1e-10 * std::max(1.0, delta_.norm()),
                 "Delta hermitian");
  Mat dhalf = psd_power(hermitize(delta_), 0.5);
  Mat s_def(d, d);
  for (int a = 0; a < d; ++a) s_def.col(a) = hat(alg_.star(basis_[a]));
  internal_check((jmat_ * dhalf.conjugate() - s_def).norm() < 1e-10,
                 "S = J Delta^{1/2}");
  internal_check((delta_ * omega_ - omega_).norm() < 1e-10, "Delta omega");
  internal_check((J(omega_) - omega_).norm() < 1e-10, "J omega");
  // right action via J agrees with right multiplication by sigma
  for (int u = 0; u < d; ++u) {
    int us = star_index(alg_, u);
    Mat via_j = jmat_ * lu_[us].conjugate() * jmat_.conjugate();
    internal_check((via_j - ru_[u]).norm() < 1e-9, "right action via J");
  }
}

Vec StandardForm::hat(const AlgElem& x) const { return binv_ * alg_.coords(x); }

AlgElem StandardForm::unhat(const Vec& v) const {
  return alg_.from_coords(b_ * v);
}

Mat StandardForm::lact(const AlgElem& x) const { return l2_.lact(x); }
Mat StandardForm::ract(const AlgElem& x) const { return l2_.ract(x); }

AlgElem StandardForm::sigma(const AlgElem& b) const {
  AlgElem out = alg_.zero();
  for (int k = 0; k < alg_.nblocks(); ++k)
    out.b[k] = rho_half_[k] * b.b[k] * rho_mhalf_[k];
  return out;
}

AlgElem StandardForm::sigma_inv(const AlgElem& b) const {
  AlgElem out = alg_.zero();
  for (int k = 0; k < alg_.nblocks(); ++k)
    out.b[k] = rho_mhalf_[k] * b.b[k] * rho_half_[k];
  return out;
}

AlgElem alpha(const StandardForm& sf, const Mat& t, double tol) {
  double scale = std::max(1.0, t.norm());
  for (int u = 0; u < sf.dim(); ++u) {
    double r = (t * sf.runit(u) - sf.runit(u) * t).norm();
    if (r > tol * scale)
      throw NotIntertwiner("does not commute with the right action");
  }
  AlgElem m = sf.unhat(t * sf.omega());
  if ((sf.lact(m) - t).norm() > tol * scale)
    throw NotIntertwiner("not reproduced by a left multiplication");
  return m;
}

AlgElem alpha_prime(const StandardForm& sf, const Mat& t, double tol) {
  double scale = std::max(1.0, t.norm());
  for (int u = 0; u < sf.dim(); ++u) {
    double r = (t * sf.lunit(u) - sf.lunit(u) * t).norm();
    if (r > tol * scale)
      throw NotIntertwiner("does not commute with the left action");
  }
  AlgElem m0 = sf.unhat(t * sf.omega());
  AlgElem m = sf.algebra().zero();
  for (int k = 0; k < sf.algebra().nblocks(); ++k)
    m.b[k] = sf.rho_mhalf(k) * m0.b[k] * sf.rho_half(k);
  if ((sf.ract(m) - t).norm() > tol * scale)
    throw NotIntertwiner("not reproduced by a right multiplication");
  return m;
}

Mat beta_morphism(const StandardForm& sf) { return sf.Jmat().conjugate(); }

Mat iso_bounded_conj(const StandardForm& sf, const HomSpace& from,
                     const HomSpace& to) {
  Mat map(to.dim(), from.dim());
  for (int f = 0; f < from.dim(); ++f)
    map.col(f) = to.coeffs(sf.Jmat() * from.basis[f].transpose());
  return map;
}

}  // namespace fusionlab
