#pragma once

#include <cstdint>

#include "fockforge/types.hpp"

namespace fockforge {

// Counter-based generator: the k-th draw is a SplitMix64 hash of
// (seed, stream, k), so any draw can be reproduced from its counter alone.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double normal();   // standard normal, Box-Muller
  Complex complex_normal();  // E|z|^2 = 1
  Index uniform_index(Index lo, Index hi);  // [lo, hi]

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

CVector random_vector(CounterRng& rng, Index n);
CMatrix random_matrix(CounterRng& rng, Index rows, Index cols);
CMatrix random_hermitian(CounterRng& rng, Index n, double scale = 1.0);
// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
CMatrix random_unitary(CounterRng& rng, Index n);
// Orthogonal projection of the given rank onto a random subspace.
CMatrix random_projection(CounterRng& rng, Index n, Index rank);
// Hermitian matrix with spectrum bounded below by min_eig.
CMatrix random_positive(CounterRng& rng, Index n, double min_eig);

}  // namespace fockforge
