#pragma once

#include <string>
#include <vector>

#include "fusionlab/report.hpp"
#include "fusionlab/types.hpp"

namespace fusionlab {

// Element of a multi-matrix algebra: one square block per summand.
struct AlgElem {
  std::vector<Mat> b;
};

// M = M_{n_1} + ... + M_{n_K}.  Matrix units are enumerated block-major,
// then row-major within a block; coords/from_coords use the same order.
class Algebra {
 public:
  explicit Algebra(std::vector<int> block_sizes);

  const std::vector<int>& block_sizes() const { return ns_; }
  int nblocks() const { return static_cast<int>(ns_.size()); }
  int block_size(int k) const { return ns_[k]; }
  int dim() const { return dim_; }
  int offset(int k) const { return off_[k]; }
  int unit_index(int k, int i, int j) const { return off_[k] + i * ns_[k] + j; }

  bool same(const Algebra& o) const { return ns_ == o.ns_; }
  void require_same(const Algebra& o) const;

  AlgElem zero() const;
  AlgElem unit() const;
  AlgElem matrix_unit(int k, int i, int j) const;
  std::vector<AlgElem> matrix_unit_basis() const;
  AlgElem central_projection(int k) const;

  Vec coords(const AlgElem& x) const;
  AlgElem from_coords(const Vec& v) const;

  AlgElem add(const AlgElem& x, const AlgElem& y) const;
  AlgElem sub(const AlgElem& x, const AlgElem& y) const;
  AlgElem mul(const AlgElem& x, const AlgElem& y) const;
  AlgElem star(const AlgElem& x) const;
  AlgElem scale(Cx c, const AlgElem& x) const;

  double norm(const AlgElem& x) const;
  void require_element(const AlgElem& x) const;

 private:
  std::vector<int> ns_;
  std::vector<int> off_;
  int dim_ = 0;
};

// Faithful normal state phi(x) = sum_k Tr(rho_k x_k), stored by densities.
struct State {
  std::vector<Mat> rho;
};

// Validates shapes, hermiticity, normalization, and faithfulness; throws.
State make_state(const Algebra& alg, std::vector<Mat> densities,
                 RankTolerance tol = {});

Cx state_eval(const Algebra& alg, const State& phi, const AlgElem& x);

// Non-throwing diagnostic: positivity, faithfulness margin, normalization.
CheckReport check_faithful_state(const Algebra& alg, const State& phi,
                                 RankTolerance tol = {});

}  // namespace fusionlab
