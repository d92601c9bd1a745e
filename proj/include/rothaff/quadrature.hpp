#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "rothaff/places.hpp"

namespace rothaff {

// A point of P^1(C) where the integrand may have a logarithmic singularity.
struct SingularPoint {
  std::complex<double> z;
  bool at_infinity = false;

  static SingularPoint infinity() { return {{0.0, 0.0}, true}; }
};

struct QuadOptions {
  double tol = 1e-3;
  std::int64_t budget = 10'000'000;  // integrand evaluations
  std::vector<SingularPoint> singular_points;
};

struct QuadResult {
  double value = 0;
  double error_bound = 0;
  std::int64_t evaluations = 0;
};

// Integrand evaluated at an archimedean sample given in chart coordinates.
using ArchIntegrand = std::function<double(const ArchSample&)>;

/// Adaptive quadrature of f against the Fubini-Study measure over the given
/// cells. Each cell receives tolerance and budget in proportion to its
/// measure; cells run in parallel and are summed in input order, so the
/// result does not depend on the worker count. Throws QuadratureError when a
/// cell exhausts its budget.
QuadResult integrate_arch(const ArchIntegrand& f, const std::vector<Cell>& cells,
                          const QuadOptions& opts = {});

// Integral over the archimedean part of S.
QuadResult integrate_arch(const ArchIntegrand& f, const SetS& region, const QuadOptions& opts = {});

}  // namespace rothaff
