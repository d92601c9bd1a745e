#pragma once

#include <complex>
#include <string>

#include "rothaff/int_poly.hpp"

namespace rothaff {

/// Element of Q(t) stored as content * num / den with num, den primitive,
/// coprime, and of positive leading coefficient. The zero function has
/// content 0 and num = den = 1.
class RatFunc {
 public:
  RatFunc() : content_(0), num_{1}, den_{1} {}
  RatFunc(long c) : RatFunc(BigRat(c)) {}  // NOLINT: integers embed implicitly
  RatFunc(const BigRat& c);                 // NOLINT
  RatFunc(const IntPoly& p);                // NOLINT
  // Normalizes numerator / denominator. Throws DomainError if den is zero.
  RatFunc(const IntPoly& numerator, const IntPoly& denominator);

  static RatFunc t() { return RatFunc(IntPoly::t()); }

  const BigRat& content() const { return content_; }
  const IntPoly& num() const { return num_; }
  const IntPoly& den() const { return den_; }

  bool is_zero() const { return content_ == 0; }
  bool is_constant() const { return num_.degree() == 0 && den_.degree() == 0; }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  // Throws DomainError on division by zero.
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  RatFunc operator-() const;
  RatFunc reciprocal() const;

  friend bool operator==(const RatFunc& a, const RatFunc& b) = default;

  // Value at a complex point; throws DomainError at a pole.
  std::complex<double> eval(std::complex<double> z) const;

  // Canonical text form, e.g. "3/2*(t^2+1)/(t-1)"; parse(to_string()) == *this.
  std::string to_string() const;

 private:
  BigRat content_;
  IntPoly num_;
  IntPoly den_;
};

enum class ArithOp { Add, Sub, Mul, Div };
RatFunc rat_func_arith(const RatFunc& a, const RatFunc& b, ArithOp op);

// Parses expressions in t built from integers, +, -, *, /, ^ and parentheses.
RatFunc parse_rat_func(const std::string& text);

// Multiplicity of the irreducible f in num minus that in den. xi != 0.
int ord_at(const RatFunc& xi, const IntPoly& f);
// p-adic valuation of the content. xi != 0, p prime.
long ord_at_prime(const RatFunc& xi, const BigInt& p);
// deg den - deg num. xi != 0.
int ord_at_infinity(const RatFunc& xi);

/// Double-precision evaluator for |xi| in either chart of P^1(C). The
/// inverted chart evaluates xi(1/w) through reversed polynomials.
class RatFuncEvaluator {
 public:
  explicit RatFuncEvaluator(const RatFunc& xi);

  // |xi(z)|, or |xi(1/z)| when inverted is true. Returns +inf at poles.
  double abs_at(std::complex<double> z, bool inverted) const;

 private:
  static std::complex<double> horner(const std::vector<double>& c, std::complex<double> z);

  double content_ = 0;
  std::vector<double> num_, den_, num_rev_, den_rev_;
  int shift_ = 0;  // deg den - deg num
};

}  // namespace rothaff
