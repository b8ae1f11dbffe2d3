#include "fusionlab/bounded.hpp"

#include <stdexcept>
#include <string>

#include "fusionlab/errors.hpp"
#include "fusionlab/numeric.hpp"

namespace fusionlab {

namespace {

void internal_check(bool ok, const char* what) {
  if (!ok) throw std::logic_error(std::string("internal check failed: ") + what);
}

// Block-diagonal matrix picture of an algebra element.
Mat rep(const Algebra& alg, const AlgElem& x) {
  int n = 0;
  for (int k = 0; k < alg.nblocks(); ++k) n += alg.block_size(k);
  Mat m = zeros(n, n);
  int off = 0;
  for (int k = 0; k < alg.nblocks(); ++k) {
    int nk = alg.block_size(k);
    m.block(off, off, nk, nk) = x.b[k];
    off += nk;
  }
  return m;
}

}  // namespace

AlgElem BoundedVectorSpace::inner(const Vec& u, const Vec& v) const {
  const Algebra& alg = parent.alg;
  AlgElem acc = alg.zero();
  for (int p = 0; p < dim(); ++p)
    for (int q = 0; q < dim(); ++q)
      acc = alg.add(acc, alg.scale(u(p) * std::conj(v(q)), minner[p][q]));
  return acc;
}

BoundedVectorSpace bounded_vectors(const StandardForm& sf,
                                   const HilbertBimodule& h) {
  sf.algebra().require_same(h.alg);
  const Algebra& alg = h.alg;

  BoundedVectorSpace d;
  d.parent = h;
  d.hom = hom_space(sf.l2(), h, Side::right_module_maps);
  const int r = d.hom.dim();

  d.minner.assign(r, {});
  for (int p = 0; p < r; ++p)
    for (int q = 0; q < r; ++q)
      d.minner[p].push_back(
          alpha(sf, adjoint_morphism(d.hom.basis[q]) * d.hom.basis[p]));

  double scale = 1.0;
  for (int p = 0; p < r; ++p) scale = std::max(scale, alg.norm(d.minner[p][p]));

  // (x,y) = (y,x)*
  for (int p = 0; p < r; ++p)
    for (int q = 0; q < r; ++q)
      internal_check(alg.norm(alg.sub(d.minner[p][q],
                                      alg.star(d.minner[q][p]))) <
                         1e-10 * scale,
                     "inner product hermitian symmetry");

  // (x,x) >= 0 for every x: the operator-valued Gram is one positive
  // semidefinite matrix after expanding each entry to its block picture.
  // Block (p,q) holds alpha(x_p* x_q) = minner[q][p]; with the product
  // linear in the first variable that order, not its swap, is the
  // positive arrangement.
  if (r > 0) {
    int n = 0;
    for (int k = 0; k < alg.nblocks(); ++k) n += alg.block_size(k);
    Mat big = zeros(r * n, r * n);
    for (int p = 0; p < r; ++p)
      for (int q = 0; q < r; ++q)
        big.block(p * n, q * n, n, n) = rep(alg, d.minner[q][p]);
    auto [w, v] = hermitian_eig(hermitize(big));
    internal_check(w(w.size() - 1) > -1e-10 * std::max(1.0, w(0)),
                   "inner product positivity");
  }

  // (x<|b, y) = (x,y)b on matrix units
  auto units = alg.matrix_unit_basis();
  for (int u = 0; u < static_cast<int>(units.size()); ++u) {
    Mat lb = sf.lact(units[u]);
    for (int p = 0; p < r; ++p)
      for (int q = 0; q < r; ++q) {
        AlgElem lhs = alpha(sf, adjoint_morphism(d.hom.basis[q]) *
                                    d.hom.basis[p] * lb);
        AlgElem rhs = alg.mul(d.minner[p][q], units[u]);
        internal_check(alg.norm(alg.sub(lhs, rhs)) < 1e-8 * scale,
                       "inner product right compatibility");
      }
  }
  return d;
}

Mat eval_at_omega(const StandardForm& sf, const BoundedVectorSpace& d) {
  sf.algebra().require_same(d.parent.alg);
  Mat e(d.parent.dim, d.dim());
  for (int p = 0; p < d.dim(); ++p) e.col(p) = d.hom.basis[p] * sf.omega();

  // Omega is cyclic and separating, so evaluation is a bijection
  // intertwining the left actions.
  internal_check(d.dim() == d.parent.dim, "bounded vectors square count");
  if (d.dim() > 0)
    internal_check(matrix_rank(e) == d.parent.dim, "evaluation bijective");
  for (int u = 0; u < sf.algebra().dim(); ++u)
    internal_check((d.parent.lunit(u) * e - e * d.hom.L[u]).norm() <
                       1e-9 * std::max(1.0, e.norm()),
                   "evaluation left intertwining");
  return e;
}

}  // namespace fusionlab
