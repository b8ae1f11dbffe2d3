#pragma once

#include <vector>

#include "fusionlab/bimodule.hpp"

namespace fusionlab {

// GNS space of (M, phi) in an orthonormal basis obtained from the matrix
// units in enumeration order.  J is stored as (matrix, conjugation):
// J v = Jmat * conj(v).
class StandardForm {
 public:
  StandardForm(Algebra alg, State phi);

  const Algebra& algebra() const { return alg_; }
  const State& state() const { return phi_; }
  int dim() const { return alg_.dim(); }

  const std::vector<AlgElem>& gns_basis() const { return basis_; }
  const Vec& omega() const { return omega_; }
  const Mat& Jmat() const { return jmat_; }
  const Mat& Delta() const { return delta_; }
  Vec J(const Vec& v) const { return jmat_ * v.conjugate(); }

  // orthonormal coordinates of an algebra element and back
  Vec hat(const AlgElem& x) const;
  AlgElem unhat(const Vec& v) const;

  const Mat& lunit(int u) const { return lu_[u]; }
  const Mat& runit(int u) const { return ru_[u]; }
  Mat lact(const AlgElem& x) const;
  Mat ract(const AlgElem& x) const;

  // rho^{1/2} b rho^{-1/2}; the right action is plain right multiplication
  // by sigma(b), which is what the J-formula xi <| b = J(b* |> J xi) gives.
  AlgElem sigma(const AlgElem& b) const;
  AlgElem sigma_inv(const AlgElem& b) const;

  const Mat& rho_half(int k) const { return rho_half_[k]; }
  const Mat& rho_mhalf(int k) const { return rho_mhalf_[k]; }

  const HilbertBimodule& l2() const { return l2_; }

 private:
  Algebra alg_;
  State phi_;
  Mat b_, binv_;  // unit coords of the basis / inverse
  std::vector<AlgElem> basis_;
  Vec omega_;
  Mat jmat_, delta_;
  std::vector<Mat> lu_, ru_;
  std::vector<Mat> rho_half_, rho_mhalf_;
  HilbertBimodule l2_;
};

inline StandardForm gns_standard_form(const Algebra& alg, const State& phi) {
  return StandardForm(alg, phi);
}

// T a right-module endomorphism of L2: returns m with T = m |> . , solved
// from T omega and verified on the whole basis.  Throws NotIntertwiner.
AlgElem alpha(const StandardForm& sf, const Mat& t, double tol = 1e-8);

// T a left-module endomorphism: returns m with T = . <| m.
AlgElem alpha_prime(const StandardForm& sf, const Mat& t, double tol = 1e-8);

// Unitary bimodule map L2 -> conjugate(L2), v |-> conj-coords of J v.
Mat beta_morphism(const StandardForm& sf);

// Coefficient-space map hom_{-M}(L2,H) -> hom_{M-}(conjugate(H), L2),
// elementwise x |-> (Jmat x^T in conjugate coordinates).
Mat iso_bounded_conj(const StandardForm& sf, const HomSpace& from,
                     const HomSpace& to);

}  // namespace fusionlab
