#pragma once

#include <vector>

#include "rothaff/int_poly.hpp"

namespace rothaff {

struct PolyFactor {
  IntPoly factor;  // primitive, irreducible over Q, positive leading coefficient
  int multiplicity = 0;
};

struct Factorization {
  BigInt content;  // signed: f = content * prod factor^multiplicity
  std::vector<PolyFactor> factors;

  IntPoly expand() const;
};

// Complete factorization over Q of a nonzero integer polynomial. Factors are
// sorted by (degree, coefficients). Constants give an empty factor list.
Factorization factor_q(const IntPoly& f);

// Squarefree primitive part of f: the product of its distinct irreducible factors.
IntPoly squarefree_part(const IntPoly& f);

}  // namespace rothaff
