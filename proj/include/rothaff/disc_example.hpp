#pragma once

#include <string>
#include <vector>

#include "rothaff/places.hpp"
#include "rothaff/quadrature.hpp"

namespace rothaff {

/// Mean of -log|u| over the square [-1/2, 1/2]^2: (1/2) log 2 + 3/2 - pi/4.
double unit_square_mean_neg_log();

/// One disc S_n approximated by annular-sector cells, with the choice
/// beta_v = nearest point of 2^-k Z[i] to v - n. That choice is constant on
/// each lattice square, and on S_n it gives
/// -log|beta_v + n - v| >= (k + 1/2) log 2 >= threshold.
struct DiscPart {
  int n = 1;
  double height = 0;     // h_K(n) = log n
  double measure = 0;    // mu(S_n), sum of the cell measures
  double threshold = 0;  // strength * h_K(n) / mu(S_n)
  long lattice_exponent = 0;
  std::vector<Cell> cells;

  double integral = 0;  // int_{S_n} -log^-|n - v + beta_v| d mu
  double error_bound = 0;
  double certified_lower_bound = 0;  // mu(S_n) (k + 1/2) log 2
  int samples_checked = 0;
  bool pointwise_ok = false;
  bool holds = false;  // integral >= 3 h_K(n) - tol

  // -log^-|n - v + beta_v| at v; the local average over one lattice square
  // when k > 0.
  double weil_value(const ArchSample& v) const;
};

struct DiscExample {
  int n_max = 0;
  double strength = 3;
  double tol = 1e-3;
  std::vector<DiscPart> parts;

  bool all_hold() const;
};

// Builds S_1..S_{n_max}, picks beta, and verifies the inequality.
DiscExample build_disc_example(int n_max, double strength = 3, double tol = 1e-3);

// Recomputes every derived quantity of a (possibly reloaded) construction
// from its cells and lattice exponents.
void verify_disc_example(DiscExample& ex);

std::string disc_example_to_json(const DiscExample& ex);
DiscExample disc_example_from_json(const std::string& text);

}  // namespace rothaff
