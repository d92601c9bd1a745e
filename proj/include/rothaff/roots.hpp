#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <complex>
#include <vector>

#include "rothaff/int_poly.hpp"

namespace rothaff {

using HighReal = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

/// A root approximation together with a certified inclusion radius: the disc
/// of that radius around (re, im) contains exactly one root of the
/// squarefree factor it came from.
struct RootApprox {
  HighReal re;
  HighReal im;
  double radius = 0.0;

  std::complex<double> value() const {
    return {static_cast<double>(re), static_cast<double>(im)};
  }
};

inline constexpr int kDefaultRootBits = 96;

// All deg f complex roots of f, repeated by multiplicity, each with radius at
// most 2^-precision_bits * max(1, |root|). precision_bits must lie in [8, 200].
std::vector<RootApprox> complex_roots(const IntPoly& f, int precision_bits = kDefaultRootBits);

}  // namespace rothaff
