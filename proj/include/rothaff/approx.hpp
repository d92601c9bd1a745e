#pragma once

#include <string>
#include <vector>

#include "rothaff/heights.hpp"

namespace rothaff {

// D = [alpha_1] + ... + [alpha_q], optionally plus the point at infinity.
struct DivisorSpec {
  std::vector<RatFunc> targets;
  bool include_infinity = false;

  // Throws unless the targets are nonempty and pairwise distinct.
  void validate() const;
  bool contains(const RatFunc& xi) const;
};

struct RothParams {
  double epsilon = 1.0;  // > 0
  double c = 0.0;
};

// -log^- ||xi - alpha||_v. Throws when xi == alpha. Returns +inf at an
// archimedean sample that is a zero of xi - alpha.
double weil_lambda(const RatFunc& alpha, const RatFunc& xi, const Place& v, Polarization pol);
// log^+ ||xi||_v, the Weil function of the point at infinity.
double weil_lambda_infinity(const RatFunc& xi, const Place& v, Polarization pol);

enum class ProximityMode { Sum, Max };

Estimate proximity(const DivisorSpec& d, const RatFunc& xi, const SetS& s, ProximityMode mode,
                   Polarization pol, const QuadOptions& opts = {});

// sum_j h(xi - alpha_j) - proximity(sum).
Estimate counting(const DivisorSpec& d, const RatFunc& xi, const SetS& s, Polarization pol,
                  const QuadOptions& opts = {});

// proximity - (2 + epsilon) h(xi) - c. Positive means the inequality fails.
Estimate roth_defect(const DivisorSpec& d, const RatFunc& xi, const SetS& s, const RothParams& params,
                     ProximityMode mode, Polarization pol, const QuadOptions& opts = {});

struct ScanRange {
  int max_deg = 0;     // ignored over Q
  long max_coeff = 0;  // bound on |coefficient| of numerator and denominator
};

struct ScanRow {
  RatFunc xi;
  double height = 0;
  double proximity = 0;
  double counting = 0;
  double defect = 0;
  double error_bound = 0;
};

// Every normalized xi with numerator and denominator inside the range, in
// a fixed enumeration order; targets are skipped.
std::vector<RatFunc> enumerate_scan(const ScanRange& range, Polarization pol, const DivisorSpec& d);

// Rows sorted by defect descending; ties keep enumeration order.
std::vector<ScanRow> scan_roth(const DivisorSpec& d, const SetS& s, const RothParams& params,
                               const ScanRange& range, Polarization pol, ProximityMode mode,
                               const QuadOptions& opts = {});

// CSV with header xi,height,proximity,counting,defect.
std::string scan_to_csv(const std::vector<ScanRow>& rows);

}  // namespace rothaff
