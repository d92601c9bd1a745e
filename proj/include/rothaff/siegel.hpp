#pragma once

#include <vector>

#include "rothaff/numbers.hpp"

namespace rothaff {

using IntMatrix = std::vector<std::vector<BigInt>>;

struct KernelVector {
  std::vector<BigInt> v;  // primitive, A v = 0
  double log_height = 0;  // log max |v_i|
  std::size_t kernel_dim = 0;
  std::size_t candidates = 0;
};

// Nonzero primitive integer solution of A v = 0 for an M x N matrix with
// M < N. Candidates are the primitive kernel basis vectors and their
// pairwise sums and differences; the one with the least max |v_i| wins,
// earliest on ties.
KernelVector siegel_kernel(const IntMatrix& a, std::size_t ncols);

}  // namespace rothaff
