#include "rothaff/rat_func.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "rothaff/errors.hpp"

namespace rothaff {

RatFunc::RatFunc(const BigRat& c) : content_(c), num_{1}, den_{1} {}

RatFunc::RatFunc(const IntPoly& p) : RatFunc(p, IntPoly{1}) {}

RatFunc::RatFunc(const IntPoly& numerator, const IntPoly& denominator) : num_{1}, den_{1} {
  if (denominator.is_zero()) throw DomainError("rational function with zero denominator");
  if (numerator.is_zero()) {
    content_ = 0;
    return;
  }
  IntPoly g = gcd(numerator, denominator);
  IntPoly n, d;
  divides_exactly(numerator, g, &n);
  divides_exactly(denominator, g, &d);
  content_ = make_rat(n.content(), d.content());
  num_ = n.primitive_part();
  den_ = d.primitive_part();
}

namespace {

// content * num / den with rational content folded into integer polynomials.
void to_integer_fraction(const RatFunc& a, IntPoly& n, IntPoly& d) {
  n = a.content().get_num() * a.num();
  d = a.content().get_den() * a.den();
}

}  // namespace

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  IntPoly an, ad, bn, bd;
  to_integer_fraction(a, an, ad);
  to_integer_fraction(b, bn, bd);
  if (ad == bd) return RatFunc(an + bn, ad);
  return RatFunc(an * bd + bn * ad, ad * bd);
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.content_ = -r.content_;
  return r;
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero() || b.is_zero()) return RatFunc();
  RatFunc r(a.num() * b.num(), a.den() * b.den());
  r.content_ *= a.content() * b.content();
  return r;
}

RatFunc RatFunc::reciprocal() const {
  if (is_zero()) throw DomainError("division by zero rational function");
  RatFunc r;
  r.content_ = 1 / content_;
  r.num_ = den_;
  r.den_ = num_;
  return r;
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.reciprocal(); }

RatFunc rat_func_arith(const RatFunc& a, const RatFunc& b, ArithOp op) {
  switch (op) {
    case ArithOp::Add: return a + b;
    case ArithOp::Sub: return a - b;
    case ArithOp::Mul: return a * b;
    case ArithOp::Div: return a / b;
  }
  throw DomainError("unknown arithmetic operation");
}

std::complex<double> RatFunc::eval(std::complex<double> z) const {
  if (is_zero()) return 0.0;
  std::complex<double> d = den_.eval(z);
  if (d == 0.0) throw DomainError("evaluation of " + to_string() + " at a pole");
  return content_.get_d() * num_.eval(z) / d;
}

std::string RatFunc::to_string() const {
  if (is_zero()) return "0";
  std::string c = rothaff::to_string(content_);
  if (num_.is_one() && den_.is_one()) return c;
  std::string out;
  if (content_ == -1)
    out = "-";
  else if (content_ != 1)
    out = c + "*";
  out += "(" + num_.to_string() + ")";
  if (!den_.is_one()) out += "/(" + den_.to_string() + ")";
  return out;
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  RatFunc parse() {
    RatFunc v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("cannot parse '" + s_ + "' at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RatFunc expr() {
    RatFunc v = term();
    for (;;) {
      if (eat('+'))
        v = v + term();
      else if (eat('-'))
        v = v - term();
      else
        return v;
    }
  }

  RatFunc term() {
    RatFunc v = unary();
    for (;;) {
      if (eat('*')) {
        v = v * unary();
      } else if (eat('/')) {
        RatFunc d = unary();
        if (d.is_zero()) fail("division by zero");
        v = v / d;
      } else {
        skip();
        // Juxtaposition such as 3t or 2(t+1).
        if (pos_ < s_.size() && (s_[pos_] == 't' || s_[pos_] == '('))
          v = v * unary();
        else
          return v;
      }
    }
  }

  RatFunc unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  RatFunc power() {
    RatFunc base = primary();
    if (!eat('^')) return base;
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected exponent");
    long e = std::stol(s_.substr(start, pos_ - start));
    if (e > 4096) fail("exponent too large");
    RatFunc out(1L);
    for (long i = 0; i < e; ++i) out = out * base;
    return out;
  }

  RatFunc primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      RatFunc v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (c == 't') {
      ++pos_;
      return RatFunc::t();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return RatFunc(BigRat(BigInt(s_.substr(start, pos_ - start))));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

RatFunc parse_rat_func(const std::string& text) { return Parser(text).parse(); }

IntPoly parse_int_poly(const std::string& text) {
  RatFunc r = parse_rat_func(text);
  if (r.is_zero()) return IntPoly();
  if (!r.den().is_one() || r.content().get_den() != 1)
    throw ParseError("'" + text + "' is not an integer polynomial");
  return r.content().get_num() * r.num();
}

int ord_at(const RatFunc& xi, const IntPoly& f) {
  if (xi.is_zero()) throw DomainError("order of the zero function");
  if (f.degree() < 1) throw DomainError("order at a constant polynomial");
  auto count = [&](IntPoly p) {
    int m = 0;
    IntPoly q;
    while (divides_exactly(p, f, &q)) {
      p = q;
      ++m;
    }
    return m;
  };
  return count(xi.num()) - count(xi.den());
}

long ord_at_prime(const RatFunc& xi, const BigInt& p) {
  if (xi.is_zero()) throw DomainError("order of the zero function");
  if (!is_probable_prime(p)) throw DomainError(p.get_str() + " is not prime");
  return valuation(xi.content(), p);
}

int ord_at_infinity(const RatFunc& xi) {
  if (xi.is_zero()) throw DomainError("order of the zero function");
  return xi.den().degree() - xi.num().degree();
}

RatFuncEvaluator::RatFuncEvaluator(const RatFunc& xi) {
  content_ = xi.content().get_d();
  for (const auto& c : xi.num().coeffs()) num_.push_back(c.get_d());
  for (const auto& c : xi.den().coeffs()) den_.push_back(c.get_d());
  num_rev_.assign(num_.rbegin(), num_.rend());
  den_rev_.assign(den_.rbegin(), den_.rend());
  shift_ = xi.den().degree() - xi.num().degree();
}

std::complex<double> RatFuncEvaluator::horner(const std::vector<double>& c, std::complex<double> z) {
  std::complex<double> acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double RatFuncEvaluator::abs_at(std::complex<double> z, bool inverted) const {
  if (content_ == 0) return 0.0;
  double n, d;
  double scale = std::fabs(content_);
  if (!inverted) {
    n = std::abs(horner(num_, z));
    d = std::abs(horner(den_, z));
  } else {
    // xi(1/w) = content * w^(deg den - deg num) * num_rev(w) / den_rev(w)
    n = std::abs(horner(num_rev_, z));
    d = std::abs(horner(den_rev_, z));
    if (shift_ != 0) {
      double aw = std::abs(z);
      if (aw == 0.0) return shift_ > 0 ? 0.0 : std::numeric_limits<double>::infinity();
      scale *= std::pow(aw, shift_);
    }
  }
  if (d == 0.0) return std::numeric_limits<double>::infinity();
  return scale * n / d;
}

}  // namespace rothaff
