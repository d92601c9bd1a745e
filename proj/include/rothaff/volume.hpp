#pragma once

#include "rothaff/multipoly.hpp"
#include "rothaff/numbers.hpp"

namespace rothaff {

// Lebesgue measure of {x in [0,1]^n : sum x_i < tau}, exactly.
BigRat vol_n(int n, const BigRat& tau);

// #{k : 0 <= k_i <= d_i, sum k_i/d_i < tau}.
BigInt count_j(const IndexWeights& d, const BigRat& tau);

struct ChosenParams {
  int q = 2;
  double eps_prime = 1;
  int n0 = 0;
  BigRat tau;  // dyadic, q Vol(tau) within the residual of 1 - 1/(2 n0!)
  int sigma = 1;
  double residual = 0;  // |q Vol(tau) - (1 - 1/(2 n0!))|
  bool volume_ok = false;  // q Vol(tau) < 1 < q Vol(tau) + Vol(sigma), exactly
  bool gap_ok = false;     // (2 + eps')(tau - sigma) > n0, exactly
};

// Left side of the n0 criterion sqrt((log q - log(1 - 1/(2 n!)))/(6n)) + 1/n.
long double params_lhs(int q, int n);

// n0 is the least n >= 2 with params_lhs(q, n) < 1/2 - 1/(2 + eps').
ChosenParams choose_params(int q, double eps_prime);

}  // namespace rothaff
