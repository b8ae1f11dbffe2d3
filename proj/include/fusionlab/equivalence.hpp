#pragma once

// The two functors between Hilbert bimodules and algebraic bimodules, the
// unit and counit isomorphisms witnessing that they are mutually inverse,
// and the structure maps that make the pair monoidal. check_equivalence
// bundles every comparison into one report.

#include <vector>

#include "fusionlab/algebraic.hpp"
#include "fusionlab/bounded.hpp"
#include "fusionlab/duality.hpp"
#include "fusionlab/fusion.hpp"
#include "fusionlab/report.hpp"
#include "fusionlab/standard_form.hpp"
#include "fusionlab/types.hpp"

namespace fusionlab {

enum class FunctorDirection { hilbert_to_algebraic, algebraic_to_hilbert };

// Image of an object together with images of selected endomorphisms.
// Exactly one of the object fields is populated, per direction.
struct FunctorImage {
  FunctorDirection direction = FunctorDirection::hilbert_to_algebraic;
  AlgebraicBimodule algebraic;
  HilbertBimodule hilbert;
  std::vector<Mat> morphisms;
};

// Bounded vectors of h as an algebraic bimodule, plus images of the given
// bimodule endomorphisms under post-composition.
FunctorImage functor_D(FusionContext& fc, const HilbertBimodule& h,
                       const std::vector<Mat>& endomorphisms = {});

// Image of a bimodule map f: from -> to under the bounded-vector functor,
// as a matrix in the coefficient bases. Throws NotIntertwiner when f is
// not a bimodule map.
Mat d_morphism(FusionContext& fc, const HilbertBimodule& from,
               const HilbertBimodule& to, const Mat& f, double tol = 1e-8);

// Completion of an algebraic bimodule to a Hilbert bimodule. The carrier
// is an orthonormalization of a (x) L2 under <x (x) xi, y (x) eta> =
// <lact((x,y)_M) xi, eta>; q maps pre coordinates onto the carrier,
// section embeds it back, and null_basis spans the degenerate directions.
struct L2Pack {
  AlgebraicBimodule source;
  HilbertBimodule image;
  int l2_dim = 0;
  Mat q;
  Mat section;
  Mat null_basis;
};

// Throws DegenerateInnerProduct when the form fails to be positive
// semidefinite, and InputError when the source has no inner product.
L2Pack functor_L2_pack(const StandardForm& sf, const AlgebraicBimodule& a);

// f (x) id on the completions, for a bimodule map f between the sources.
Mat functor_L2_map(const L2Pack& from, const L2Pack& to, const Mat& f,
                   double tol = 1e-8);

// Completion functor on an object plus selected endomorphisms.
FunctorImage functor_L2(const StandardForm& sf, const AlgebraicBimodule& a,
                        const std::vector<Mat>& endomorphisms = {});

// Evaluation L2(D(h)) -> h, class of x (x) xi |-> x(xi). Unitary bimodule
// isomorphism; residuals of the construction checks are kept for reports.
struct UnitIso {
  L2Pack pack;  // completion of the bounded vectors of h
  Mat matrix;   // carrier of the completion -> h
  double unitary_residual = 0.0;
  double intertwine_residual = 0.0;
};

UnitIso unit_iso(FusionContext& fc, const HilbertBimodule& h);

// Coefficient map a -> D(L2(a)), e_i |-> (xi |-> class of e_i (x) xi).
// columns[i] is that bounded vector as a matrix L2 -> carrier; matrix
// collects their coefficients and is invertible. The construction verifies
// that the pairing of columns reproduces the inner product table of the
// source and that adjoints act by lact of the starred inner product.
struct CounitIso {
  L2Pack pack;
  std::vector<Mat> columns;
  Mat matrix;
  double inner_residual = 0.0;
  double adjoint_residual = 0.0;
};

CounitIso counit_iso(FusionContext& fc, const AlgebraicBimodule& a);
CounitIso counit_iso(FusionContext& fc, const L2Pack& pack);

// Multiplication D(k) (x)_M D(h) -> D(k (x)hat h), class of x (x) y |->
// (xi |-> class of x (x) y(xi)). Invertible bimodule map preserving the
// inner products of the two sides.
struct MonoidalD {
  AlgebraicTensor tensor;  // D(k) (x)_M D(h)
  Mat matrix;              // tensor carrier -> bounded vectors of the fusion
  double inner_residual = 0.0;
};

MonoidalD monoidal_structure_D(FusionContext& fc, const HilbertBimodule& k,
                               const HilbertBimodule& h);

// Unitary L2(k (x)_M h) -> L2(k) (x)hat L2(h) for algebraic operands,
// class of (k (x) h) (x) xi |-> class of k (x) class of (h (x) xi).
struct MonoidalL2 {
  AlgebraicTensor tensor;  // k (x)_M h
  L2Pack pack;             // completion of the tensor product
  L2Pack left_pack;        // completion of k
  L2Pack right_pack;       // completion of h
  Mat matrix;              // pack carrier -> fused carrier
  double unitary_residual = 0.0;
};

MonoidalL2 monoidal_structure_L2(FusionContext& fc, const AlgebraicBimodule& k,
                                 const AlgebraicBimodule& h);

// Exchange conj(D(h)) -> D(conj(h)): the dagger of a bounded vector lands
// in the left bounded vectors of the conjugate, and the left/right
// comparison pulls it back to a right bounded vector. Bimodule map for the
// conjugate structure on the source.
struct ConjugacyPreservation {
  DualityData dd;               // duality data of h
  LeftRightComparison exchange;  // on the conjugate module
  Mat matrix;
};

ConjugacyPreservation conjugacy_preservation(FusionContext& fc,
                                             const HilbertBimodule& h);

// Runs the whole comparison suite over the fixtures: unit and counit
// (unitarity, intertwining, naturality, triangle identities), the monoidal
// structure maps on consecutive pairs (compatibility with associators and
// unitors, completion of the multiplication), conjugacy and duality
// preservation, and fusion tables computed on both sides.
CheckReport check_equivalence(FusionContext& fc,
                              const std::vector<HilbertBimodule>& fixtures);

}  // namespace fusionlab
