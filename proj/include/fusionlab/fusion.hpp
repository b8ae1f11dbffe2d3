#pragma once

#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fusionlab/bounded.hpp"

namespace fusionlab {

// Fused module H (x)hat K.  The canonical carrier comes from the pairing on
// D(H) (x) K; the other two pictures are isometries into it.
//
// Pre-space coordinates flatten D(H)-index i and K-index a as i*dim K + a.
struct FusionResult {
  BoundedVectorSpace dh;  // D(H); its parent is the left operand
  HilbertBimodule right_operand;
  HilbertBimodule carrier;

  Mat gram_cs;       // pre-inner product on D(H) (x) K
  Mat quotient_map;  // q: pre-space coords -> carrier coords, q sec = I
  Mat section;
  Mat null_basis;    // spans ker q = null directions of gram_cs

  // From D(H) (x) D(K), x (x) y -> x (x) y(Omega); pullback of the carrier
  // inner product is the state-pairing Gram on pairs of bounded vectors.
  Mat iso_from_bounded_pairs;
  // From D(H) (x) hom_{M-}(L2, K) via the four-point pairing.
  Mat iso_from_fourpoint;

  const HilbertBimodule& left_operand() const { return dh.parent; }
  int rank() const { return carrier.dim; }
  int pre_dim() const { return static_cast<int>(gram_cs.rows()); }

  // Pre-space coordinates of x (x) xi.
  Vec pre(const Vec& xcoef, const Vec& xi) const { return kron(xcoef, xi); }
};

// Left-module maps L2 -> K with the data the four-point picture needs.
struct LeftBoundedData {
  HomSpace hom;
  std::vector<std::vector<AlgElem>> mprime;  // mprime[a][b] = alpha'(W_b* W_a)
  Mat eval;                                  // columns W_a(Omega)
};

// Duality solutions for the minimal bimodules, keyed block-pair (k,l).
// Orientation here: eta: L2 -> carrier(model, conj model) and
// eps: carrier(conj model, model) -> L2.
struct DualityTable {
  bool built = false;
  std::map<std::pair<int, int>, Mat> eta, eps;
};

// Owns the standard form and memoizes fusions and hom-space data, keyed by
// the exact action bytes of the operands, so structurally equal modules
// (e.g. a conjugate computed twice) share one carrier.
class FusionContext {
 public:
  explicit FusionContext(StandardForm sf) : sf_(std::move(sf)) {}

  const StandardForm& sf() const { return sf_; }
  const Algebra& algebra() const { return sf_.algebra(); }
  const HilbertBimodule& l2() const { return sf_.l2(); }

  const FusionResult& fuse(const HilbertBimodule& h, const HilbertBimodule& k);
  const BoundedVectorSpace& bounded(const HilbertBimodule& h);
  const LeftBoundedData& left_bounded(const HilbertBimodule& k);

  DualityTable& duality_table() { return table_; }

 private:
  StandardForm sf_;
  std::unordered_map<std::string, std::unique_ptr<FusionResult>> fusions_;
  std::unordered_map<std::string, std::unique_ptr<BoundedVectorSpace>>
      bounded_;
  std::unordered_map<std::string, std::unique_ptr<LeftBoundedData>> lefts_;
  DualityTable table_;
};

// Content key of a bimodule (exact bytes); equal keys mean equal modules.
std::string bimodule_key(const HilbertBimodule& h);

// Unitary bimodule isomorphisms L2 (x)hat H -> H and H (x)hat L2 -> H.
Mat left_unitor(FusionContext& fc, const HilbertBimodule& h);
Mat right_unitor(FusionContext& fc, const HilbertBimodule& h);

// f (x)hat g on carriers, for f: from.left -> to.left and g: from.right ->
// to.right bimodule maps.  Throws NotIntertwiner when the pair does not
// descend to the quotients.
Mat fuse_morphism(FusionContext& fc, const FusionResult& from,
                  const FusionResult& to, const Mat& f, const Mat& g,
                  double tol = 1e-8);

// Coordinates of the multiplication map D(H) (x) D(K) -> D(H (x)hat K),
// x (x) y -> q (x (x) y(.)), over the hom basis z of the carrier.
Mat mu_matrix(FusionContext& fc, const FusionResult& fus, const HomSpace& z);

// Unitary bimodule map (H (x) K) (x) L -> H (x) (K (x) L).
Mat associator(FusionContext& fc, const HilbertBimodule& h,
               const HilbertBimodule& k, const HilbertBimodule& l);

// Coherence defects (norm distance of the two composite routes).
double triangle_defect(FusionContext& fc, const HilbertBimodule& h,
                       const HilbertBimodule& k);
double pentagon_defect(FusionContext& fc, const HilbertBimodule& h,
                       const HilbertBimodule& k, const HilbertBimodule& l,
                       const HilbertBimodule& p);

// Both distributivity displays: (H + K) (x) L against the sum of fusions,
// and H (x) (K + L) likewise.  The unitaries are the canonical block maps.
struct DistributivityReport {
  Mat left_unitary;   // (H (x) L) + (K (x) L) -> (H + K) (x) L
  Mat right_unitary;  // (H (x) K) + (H (x) L) -> H (x) (K + L)
  CheckReport report;
};
DistributivityReport distributivity_check(FusionContext& fc,
                                          const HilbertBimodule& h,
                                          const HilbertBimodule& k,
                                          const HilbertBimodule& l);

}  // namespace fusionlab
