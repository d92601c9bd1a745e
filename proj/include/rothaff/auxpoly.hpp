#pragma once

#include <string>
#include <vector>

#include "rothaff/multipoly.hpp"
#include "rothaff/siegel.hpp"

namespace rothaff {

struct AuxPolyResult {
  MultiPoly p;
  std::size_t equations = 0;  // q J_d(tau)
  std::size_t unknowns = 0;   // prod (d_i + 1)
  std::size_t kernel_dim = 0;
  double coefficient_log_height = 0;  // log max |integer coefficient|
  double entry_log_max = 0;           // log max |entry| before clearing denominators
  double entry_log_bound = 0;         // sum d_i (log 2 + log+ max |alpha|)
};

// Nonzero P with deg_{x_i} P <= d_i vanishing to index >= tau at every
// diagonal point (alpha_j, ..., alpha_j): the kernel of the linear system
// d_k P(alpha_j, ..., alpha_j) = 0 for sum k_i/d_i < tau.
AuxPolyResult build_aux_poly(const std::vector<BigRat>& alphas, int n, const BigRat& tau, const IndexWeights& d);

struct DysonResult {
  std::vector<BigRat> t;  // index at each point
  BigRat lhs;             // sum Vol_n(t_j)
  BigRat rhs;             // prod (1 + max(M-2, 0) sum_{l>i} d_l/d_i)
  bool holds = false;
};

// Requires d non-increasing, pairwise distinct coordinates across points, and
// P within the degree bounds d. A failing inequality indicates a bug.
DysonResult dyson_check(const MultiPoly& p, const std::vector<std::vector<BigRat>>& zeta, const IndexWeights& d);

std::string dyson_to_json(const DysonResult& r, const std::vector<std::vector<BigRat>>& zeta, const IndexWeights& d);
std::string auxpoly_to_json(const AuxPolyResult& r, const std::vector<BigRat>& alphas, const BigRat& tau,
                            const IndexWeights& d);

}  // namespace rothaff
