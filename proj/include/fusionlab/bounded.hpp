#pragma once

#include <vector>

#include "fusionlab/bimodule.hpp"
#include "fusionlab/standard_form.hpp"

namespace fusionlab {

// Left-bounded vectors of H: the right-module maps L2 -> H, carrying an
// M-valued inner product (x, y) = alpha(y* x), complex linear in the first
// variable.
struct BoundedVectorSpace {
  HilbertBimodule parent;
  HomSpace hom;                              // right-module maps L2 -> parent
  std::vector<std::vector<AlgElem>> minner;  // minner[p][q] = (x_p, x_q)

  int dim() const { return hom.dim(); }

  // Sesquilinear extension to coefficient vectors over the hom basis.
  AlgElem inner(const Vec& u, const Vec& v) const;
};

// Builds the space and tabulates the inner product on basis pairs.  The
// defining identities ((x,y) = (y,x)*, positivity of the operator-valued
// Gram, (x<|b, y) = (x,y)b) are verified during construction.
BoundedVectorSpace bounded_vectors(const StandardForm& sf,
                                   const HilbertBimodule& h);

// Evaluation x -> x(Omega) as a (dim H) x (dim D) matrix over the bases.
// A linear bijection intertwining the left actions; it is not a right-module
// map unless the state is tracial.
Mat eval_at_omega(const StandardForm& sf, const BoundedVectorSpace& d);

}  // namespace fusionlab
