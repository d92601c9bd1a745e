#pragma once

#include "rothaff/places.hpp"
#include "rothaff/quadrature.hpp"
#include "rothaff/rat_func.hpp"

namespace rothaff {

struct Estimate {
  double value = 0;
  double error_bound = 0;
};

// log|lead f| + sum over complex roots a of f of (1/2) log(1 + |a|^2), which
// equals the FS integral of log|f|.
double fs_log_mahler(const IntPoly& f);

// Archimedean integral of log|xi| in closed form (Q(t)) or log|xi| (Q).
double arch_log_integral(const RatFunc& xi, Polarization pol);

// Zeros, poles and (when the degrees differ) infinity of xi.
std::vector<SingularPoint> singular_points(const RatFunc& xi);

// h_K(xi) = int log+ |xi| d mu_inf + sum_Y max(0, -ord_Y xi) h_M(Y).
Estimate naive_height(const RatFunc& xi, Polarization pol, const QuadOptions& opts = {});

enum class DefectMode { ClosedForm, Quadrature };

// int log ||xi||_v d mu(v); zero by the product formula. xi != 0.
Estimate product_formula_defect(const RatFunc& xi, Polarization pol, DefectMode mode,
                                const QuadOptions& opts = {});

// max(deg num, deg den) over Q(t), 0 over Q. xi != 0.
int deg_m(const RatFunc& xi, Polarization pol);

// Exact multiplicative height max(|a|, |b|) of a/b != 0 over Q, computed as
// the product over all places of max(1, |x|_v).
BigInt height_q_exact(const BigRat& x);

// Exact product of |x|_v over the archimedean place and every prime.
BigRat product_formula_q_exact(const BigRat& x);

}  // namespace rothaff
