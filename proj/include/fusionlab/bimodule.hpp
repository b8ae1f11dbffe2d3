#pragma once

#include <cstdint>
#include <vector>

#include "fusionlab/algebra.hpp"
#include "fusionlab/report.hpp"

namespace fusionlab {

// Hilbert bimodule over M in a fixed orthonormal basis: one matrix per
// matrix unit for each action.  The left action is a unital *-homomorphism,
// the right action one of M^op, and the two commute.
struct HilbertBimodule {
  Algebra alg{std::vector<int>{1}};
  int dim = 0;
  std::vector<Mat> L;
  std::vector<Mat> R;

  Mat lact(const AlgElem& x) const;
  Mat ract(const AlgElem& x) const;
  const Mat& lunit(int u) const { return L[u]; }
  const Mat& runit(int u) const { return R[u]; }
};

enum class MorphKind { bimodule, left_only, right_only };

enum class Side { right_module_maps, left_module_maps };

// Intertwiner space with the induced bimodule structure: for right-module
// maps b|>x = b|>x(.) and x<|b = x(b|>.); for left-module maps b|>x = x(.<|b)
// and x<|b = x(.)<|b.  Basis is Hilbert-Schmidt orthonormal.
struct HomSpace {
  Side side = Side::right_module_maps;
  std::vector<Mat> basis;
  std::vector<Mat> L;
  std::vector<Mat> R;

  int dim() const { return static_cast<int>(basis.size()); }
  Vec coeffs(const Mat& x) const;
  Mat materialize(const Vec& c) const;
  HilbertBimodule as_bimodule(const Algebra& alg) const;
};

// Index of the matrix unit adjoint: (k,i,j) -> (k,j,i).
int star_index(const Algebra& alg, int u);

CheckReport check_bimodule(const HilbertBimodule& h);

// Validates every type invariant; throws NotHomomorphism or
// ActionsDoNotCommute.  An optional non-identity Gram is canonicalized by a
// positive square-root change of basis before validation.
HilbertBimodule make_bimodule(const Algebra& alg, std::vector<Mat> left,
                              std::vector<Mat> right);
HilbertBimodule make_bimodule(const Algebra& alg, std::vector<Mat> left,
                              std::vector<Mat> right, const Mat& gram);

struct DirectSum {
  HilbertBimodule sum;
  Mat inj1, inj2;   // isometric bimodule maps into the sum
  Mat proj1, proj2;
};
DirectSum direct_sum(const HilbertBimodule& h, const HilbertBimodule& k);

HilbertBimodule conjugate(const HilbertBimodule& h);

// Carrier rotation by a unitary q: actions become q A q*.
HilbertBimodule conjugate_by_unitary(const HilbertBimodule& h, const Mat& q);

HomSpace hom_space(const HilbertBimodule& src, const HilbertBimodule& tgt,
                   Side side);

// Maps intertwining both actions (no induced bimodule structure on these).
std::vector<Mat> hom_both(const HilbertBimodule& src,
                          const HilbertBimodule& tgt);

double intertwining_residual(const HilbertBimodule& src,
                             const HilbertBimodule& tgt, const Mat& x,
                             MorphKind kind);
void require_intertwiner(const HilbertBimodule& src,
                         const HilbertBimodule& tgt, const Mat& x,
                         MorphKind kind, double tol = 1e-8);

// Adjoint w.r.t. the orthonormal bases; satisfies (b|>x)* = x*<|b*.
inline Mat adjoint_morphism(const Mat& x) { return x.adjoint(); }

// x |-> conjugate-image of x*, as a coefficient-space matrix from the basis
// of `from` = hom(K,H) to conjugated coefficients in `to` = hom(H,K).
Mat iso_conj_hom(const HomSpace& from, const HomSpace& to);

// x |-> x-dagger with x-dagger(conj(v)) = conj(x(v)); coefficient-space
// matrix from `from` = left-module maps H -> K to conjugated coefficients in
// `to` = right-module maps conjugate(H) -> conjugate(K).
Mat iso_dagger(const HomSpace& from, const HomSpace& to);

// Minimal bimodule supported on block pair (k,l): carrier = n_k x n_l
// matrices, row-major, with matrix multiplication actions.
HilbertBimodule model_bimodule(const Algebra& alg, int k, int l);

HilbertBimodule direct_sum_list(const Algebra& alg,
                                const std::vector<HilbertBimodule>& parts);

// Direct sum of models with the given multiplicities, rotated by a seeded
// random unitary so nothing is accidentally axis-aligned.
HilbertBimodule random_multiplicity_bimodule(
    const Algebra& alg, const std::vector<std::vector<int>>& mult,
    std::uint64_t seed);

struct MultiplicityTable {
  std::vector<std::vector<int>> counts;  // counts[k][l] = copies of model (k,l)
  int remainder = 0;                     // dim H minus the accounted total
};
MultiplicityTable multiplicity_table(const HilbertBimodule& h);

}  // namespace fusionlab
