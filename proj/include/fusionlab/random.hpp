#pragma once

#include <cstdint>
#include <random>

#include "fusionlab/algebra.hpp"
#include "fusionlab/types.hpp"

namespace fusionlab {

// Deterministic stream: distributions are hand-rolled on top of mt19937_64
// so identical seeds give identical fixtures on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double normal();
  Cx cnormal();
  int below(int n) { return static_cast<int>(gen_() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

Mat gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols);
Mat random_unitary(Rng& rng, Eigen::Index n);
Mat random_hermitian(Rng& rng, Eigen::Index n);

AlgElem random_element(const Algebra& alg, Rng& rng);

// Random faithful state: normalized X X* + 0.1 per block.
State random_state(const Algebra& alg, std::uint64_t seed);

}  // namespace fusionlab
