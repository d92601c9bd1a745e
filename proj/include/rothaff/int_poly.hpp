#pragma once

#include <complex>
#include <compare>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "rothaff/numbers.hpp"

namespace rothaff {

/// Univariate polynomial over Z in the variable t, coefficients stored in
/// ascending degree. The zero polynomial has no coefficients; otherwise the
/// leading coefficient is nonzero.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<BigInt> coeffs);
  IntPoly(std::initializer_list<long> coeffs);

  static IntPoly constant(const BigInt& c);
  static IntPoly monomial(const BigInt& c, int degree);
  static IntPoly t() { return monomial(1, 1); }

  bool is_zero() const { return coeffs_.empty(); }
  bool is_one() const { return coeffs_.size() == 1 && coeffs_[0] == 1; }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const BigInt& lead() const { return coeffs_.back(); }
  const std::vector<BigInt>& coeffs() const { return coeffs_; }
  BigInt coeff(int i) const;

  // gcd of the coefficients, sign of the leading coefficient. 0 for zero.
  BigInt content() const;
  // Divides out content(); the result has positive leading coefficient.
  IntPoly primitive_part() const;
  bool is_primitive() const;

  IntPoly derivative() const;
  // t^deg * p(1/t).
  IntPoly reversed() const;
  // Coefficient-wise max |c|.
  BigInt max_abs_coeff() const;

  BigRat eval(const BigRat& x) const;
  std::complex<double> eval(std::complex<double> z) const;

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(const BigInt& c, const IntPoly& a);
  IntPoly operator-() const;

  friend bool operator==(const IntPoly& a, const IntPoly& b) = default;
  // Orders by (degree, coefficients ascending), used to sort factor lists.
  friend bool operator<(const IntPoly& a, const IntPoly& b);

  std::string to_string() const;

 private:
  void trim();
  std::vector<BigInt> coeffs_;
};

// Exact division a / b over Z. Returns nullopt-like false if b does not
// divide a in Z[t].
bool divides_exactly(const IntPoly& a, const IntPoly& b, IntPoly* quotient);

// Pseudo-division: lead(b)^(deg a - deg b + 1) * a = q*b + r.
std::pair<IntPoly, IntPoly> pseudo_divmod(const IntPoly& a, const IntPoly& b);

// Primitive gcd with positive leading coefficient; gcd(0, 0) = 0.
IntPoly gcd(const IntPoly& a, const IntPoly& b);

// Parses an integer polynomial in t such as "2*t^3-t+5".
IntPoly parse_int_poly(const std::string& text);

}  // namespace rothaff
