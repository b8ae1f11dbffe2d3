#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "fusionlab/bounded.hpp"

namespace fusionlab {

// Bimodule carrier with no distinguished scalar product and an optional
// M-valued inner product, linear in the first slot: w[u](i, j) is
// coordinate u of (e_i, e_j)_M.
struct AlgebraicBimodule {
  Algebra alg{std::vector<int>{1}};
  int dim = 0;
  std::vector<Mat> L;
  std::vector<Mat> R;
  std::vector<Mat> w;  // empty when no inner product is attached

  bool has_inner() const { return !w.empty(); }
  Mat lact(const AlgElem& x) const;
  Mat ract(const AlgElem& x) const;
  const Mat& lunit(int u) const { return L[u]; }
  const Mat& runit(int u) const { return R[u]; }
  Vec minner(const Vec& x, const Vec& y) const;  // coords of (x, y)_M
  AlgElem minner_elem(const Vec& x, const Vec& y) const;
};

// Validates unitality, the homomorphism laws, and commutation of the two
// actions (no adjoint conditions; there is no scalar product to take
// adjoints in).  The variant with w additionally verifies Hermitian
// symmetry, both compatibility laws, positivity of the operator-valued
// Gram, and nondegeneracy of the induced norm.
AlgebraicBimodule make_algebraic(const Algebra& alg, std::vector<Mat> left,
                                 std::vector<Mat> right);
AlgebraicBimodule make_algebraic(const Algebra& alg, std::vector<Mat> left,
                                 std::vector<Mat> right, std::vector<Mat> w);

// M over itself by plain multiplication, in matrix-unit coordinates.
AlgebraicBimodule regular_bimodule(const Algebra& alg);

// D(H) as an algebraic bimodule: the hom coefficient space with its induced
// actions and the inner product (x, y) = alpha(y* x).
AlgebraicBimodule bounded_as_algebraic(const BoundedVectorSpace& d);

// The actions alone, packaged for the intertwiner solvers.
HilbertBimodule actions_of(const AlgebraicBimodule& a);

// Decomposition of the right module as p |> M^n: slot s collects, per
// block l, the rows listed in slots[s] as (l, r, t) with t indexing the
// multiplicity frame of that block.
struct ExinnPacking {
  int n = 0;
  std::vector<int> multiplicities;  // per block
  std::vector<AlgElem> p;           // slot projections, length n
  Mat xi;                           // dim x (n * alg.dim())
  std::vector<Mat> frames;          // per block, dim x multiplicity
  std::vector<std::vector<std::array<int, 3>>> slots;
};

// Deterministic packing; a mix seed rotates the multiplicity frames to
// exercise the freedom in the choice.  When the module carries an inner
// product the frames are normalized against it and xi is an isometry onto
// the image; the closed-form inner product of the packing then reproduces
// the module's own.
ExinnPacking exinn_packing(const AlgebraicBimodule& a,
                           std::optional<std::uint64_t> mix_seed = {});

// Attaches the canonical M-valued inner product pulled back from the
// packing (any existing table is ignored and recomputed).
AlgebraicBimodule exinn_inner_product(const AlgebraicBimodule& a);

// hom_{-M}(A, M) with (b |> phi <| b')(h) = b phi(b' |> h).  basis[i] maps
// carrier coordinates to coordinates of M.  When A has an inner product,
// psi is the coefficient matrix of the isomorphism conjugate(A) -> dual,
// kbar |-> (h |-> (h, k)_A); otherwise psi is empty.
struct DualModule {
  AlgebraicBimodule dual;
  std::vector<Mat> basis;
  Mat psi;
};
DualModule dual_module(const AlgebraicBimodule& a);

// Relative tensor product over M: the quotient of the plain tensor product
// by (h <| b) (x) k - h (x) (b |> k).  The carrier is the orthogonal
// complement of the relation span in coordinates; section lifts carrier
// coordinates to the pre-space (pair (i, j) flattened as i * dim K + j) and
// null_basis spans the relations.  product carries the induced actions and,
// when both operands have one, the induced inner product
// (h (x) k, h' (x) k') = ((h, h')_H |> k, k')_K.
struct AlgebraicTensor {
  AlgebraicBimodule left;
  AlgebraicBimodule right;
  AlgebraicBimodule product;
  Mat section;
  Mat null_basis;

  int dim() const { return product.dim; }
};
AlgebraicTensor relative_tensor(const AlgebraicBimodule& h,
                                const AlgebraicBimodule& k);

// Canonical unitors and associator on the algebraic side.  The unitors
// require the corresponding operand to be the regular module.
Mat algebraic_left_unitor(const AlgebraicTensor& t);   // M (x)_M H -> H
Mat algebraic_right_unitor(const AlgebraicTensor& t);  // H (x)_M M -> H
// carrier((H (x) K) (x) L) -> carrier(H (x) (K (x) L)); arguments are the
// four tensors built from the same operands.
Mat algebraic_associator(const AlgebraicTensor& hk, const AlgebraicTensor& hk_l,
                         const AlgebraicTensor& kl, const AlgebraicTensor& h_kl);

// Standard right-dual data of a module with inner product: eta evaluates
// the pairing on carrier(dual (x) module); eps_one is the carrier vector of
// the canonical central element eps(1) in module (x) dual.  Zigzag
// identities, centrality, and the corner homomorphism gamma are verified
// at construction.
struct AlgebraicDuality {
  AlgebraicBimodule module;
  DualModule dual;
  AlgebraicTensor eval_tensor;    // dual (x)_M module
  AlgebraicTensor coeval_tensor;  // module (x)_M dual
  Mat eta;                        // alg.dim() x eval_tensor.dim()
  Vec eps_one;
  int n = 0;
  std::vector<AlgElem> p;
  std::vector<Vec> xi;   // generator coordinates, length n
  std::vector<Vec> phi;  // dual coefficients of the paired generators
};
AlgebraicDuality algebraic_duality(const AlgebraicBimodule& a);

// Explicit unitary H ~ L2^n <| p (right side) or p |> L2^n mirrored through
// the conjugate (left side).  u is H.dim x (n * sf.dim()) with u u* = 1 and
// u* u the block diagonal action of the slot projections.
struct FiniteGenerationWitness {
  int n = 0;
  std::vector<AlgElem> p;
  Mat u;
};
FiniteGenerationWitness finite_generation_witness(const StandardForm& sf,
                                                  const HilbertBimodule& h,
                                                  Side side);

}  // namespace fusionlab
