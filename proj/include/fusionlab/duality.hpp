#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fusionlab/fusion.hpp"

namespace fusionlab {

// One irreducible constituent of a decomposed bimodule: embed is an
// isometric bimodule map from the minimal module on block pair (k,l).
struct IrreduciblePart {
  int k = 0;
  int l = 0;
  Mat embed;
};

// Orthogonal decomposition into minimal bimodules by iterated splitting
// along seeded random Hermitian endomorphisms; deterministic for one seed.
std::vector<IrreduciblePart> irreducible_parts(const HilbertBimodule& h,
                                               std::uint64_t seed = 977);

// conj(model(k,l)) -> model(l,k): row-major transpose of the carrier.
Mat transpose_identification(const Algebra& alg, int k, int l);

// Duality solutions for every minimal module, normalized so all zigzag
// composites are the identity and coherent under conjugation; memoized on
// the context.
const DualityTable& model_duality_table(FusionContext& fc);

// Unit and counit of the duality between H and conjugate(H).
struct DualityData {
  HilbertBimodule module;  // H
  HilbertBimodule dual;    // conjugate(H)
  Mat eta;                 // carrier(H (x) dual) -> L2
  Mat eps;                 // L2 -> carrier(dual (x) H)
};

// Canonical duality data, assembled from the model table along the
// irreducible decomposition.  Zigzag identities and the self-duality
// relations (the data of the conjugate is the adjoint data) are verified
// at construction.
DualityData duality_data(FusionContext& fc, const HilbertBimodule& h);

// The two zigzag composites, Z1: H -> H and Z2: dual -> dual; both are the
// identity exactly when the data is a valid duality.
std::pair<Mat, Mat> zigzag_maps(FusionContext& fc, const DualityData& dd);

// Exchange of right bounded vectors for left ones through the duality:
// x |-> (right unitor) o (id (x) conjugate-flip of x) o eta.
struct LeftRightComparison {
  HomSpace from;  // hom_{-M}(L2, H)
  HomSpace to;    // hom_{M-}(L2, H)
  Mat matrix;     // invertible; intertwines the two hom bimodule structures
};
LeftRightComparison bounded_left_right_iso(FusionContext& fc,
                                           const HilbertBimodule& h,
                                           const DualityData& dd);

}  // namespace fusionlab
