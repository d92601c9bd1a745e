#pragma once

#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rothaff/int_poly.hpp"
#include "rothaff/rat_func.hpp"

namespace rothaff {

/// The two supported polarizations: K = Q over Spec Z, and K = Q(t) over
/// P^1_Z with O(1) carrying the Fubini-Study metric.
enum class Polarization { NumberFieldQ, FunctionFieldQt };

Polarization parse_polarization(const std::string& s);  // "q" or "qt"
std::string to_string(Polarization pol);

// Coordinate chart of P^1(C): standard is z, inverted is w = 1/z.
enum class Chart { Standard, Inverted };

struct VerticalPrime {
  BigInt p;
  friend bool operator==(const VerticalPrime&, const VerticalPrime&) = default;
};
struct HorizontalFinite {
  IntPoly f;  // primitive, irreducible, positive leading coefficient
  friend bool operator==(const HorizontalFinite&, const HorizontalFinite&) = default;
};
struct HorizontalInfinity {
  friend bool operator==(const HorizontalInfinity&, const HorizontalInfinity&) = default;
};
struct ArchSample {
  std::complex<double> z;
  Chart chart = Chart::Standard;
  friend bool operator==(const ArchSample&, const ArchSample&) = default;

  // Point of C (or infinity) represented by this sample.
  std::complex<double> point() const;
};

using Place = std::variant<VerticalPrime, HorizontalFinite, HorizontalInfinity, ArchSample>;

Place make_vertical(const BigInt& p);     // checks primality
Place make_horizontal(const IntPoly& f);  // checks primitive + irreducible
bool is_archimedean(const Place& v);

// "p:<prime>", "f:<poly>", "inf"
std::string place_to_string(const Place& v);
Place parse_place(const std::string& s);

/// Annular sector {r1 <= |z| <= r2, theta1 <= arg z <= theta2} of a chart.
class Cell {
 public:
  // Throws DomainError unless 0 <= r1 < r2 <= 1 and 0 <= theta1 < theta2 <= 2 pi.
  Cell(Chart chart, double r1, double r2, double theta1, double theta2);

  static Cell full_disc(Chart chart);

  Chart chart() const { return chart_; }
  double r1() const { return r1_; }
  double r2() const { return r2_; }
  double theta1() const { return theta1_; }
  double theta2() const { return theta2_; }

  // Interiors intersect.
  bool overlaps(const Cell& other) const;
  bool contains(const ArchSample& s) const;

  friend bool operator==(const Cell&, const Cell&) = default;

 private:
  Chart chart_;
  double r1_, r2_, theta1_, theta2_;
};

// Fubini-Study measure ((theta2-theta1)/2pi) (r2^2/(1+r2^2) - r1^2/(1+r1^2)).
double fs_cell_measure(const Cell& c);

// Non-archimedean weight h_M(Y) in nats. Throws for archimedean places and
// for horizontal places under NumberFieldQ.
double hm_weight(const Place& v, Polarization pol);

// ||xi||_v. Archimedean samples evaluate xi at the represented point.
double abs_value(const RatFunc& xi, const Place& v, Polarization pol);

// ord_v(xi) at a non-archimedean place.
long ord_at_place(const RatFunc& xi, const Place& v);

/// A subset of M_K of finite measure: archimedean cells (or all of M_K^inf)
/// plus finitely many non-archimedean places under counting measure.
struct SetS {
  bool all_archimedean = false;
  std::vector<Cell> cells;
  std::vector<Place> finite_places;

  static SetS archimedean() { return SetS{true, {}, {}}; }

  // Archimedean cells to integrate over (two full discs when all_archimedean).
  std::vector<Cell> arch_cells() const;
  double arch_measure() const;
  double measure() const;
  // Cells pairwise non-overlapping and no repeated finite place.
  void validate() const;
  bool disjoint_from(const SetS& other) const;
};

// Text document: one item per line, "archimedean", "(chart, r1, r2, theta1,
// theta2)", "p:<prime>", "f:<poly>" or "inf". '#' starts a comment.
std::string serialize_set(const SetS& s);
SetS parse_set(const std::string& text);

/// M_K-constant: finitely supported (cell or finite place, value) pairs.
struct MKConstant {
  struct Term {
    std::variant<Cell, Place> support;
    double value = 0;
  };
  std::vector<Term> terms;

  // sum of value * measure(support)
  double integral() const;
  double support_measure() const;
};

}  // namespace rothaff
