#include "rothaff/int_poly.hpp"

#include <algorithm>

#include "rothaff/errors.hpp"

namespace rothaff {

IntPoly::IntPoly(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

IntPoly::IntPoly(std::initializer_list<long> coeffs) {
  for (long c : coeffs) coeffs_.emplace_back(c);
  trim();
}

IntPoly IntPoly::constant(const BigInt& c) { return IntPoly(std::vector<BigInt>{c}); }

IntPoly IntPoly::monomial(const BigInt& c, int degree) {
  std::vector<BigInt> v(static_cast<std::size_t>(degree) + 1);
  v.back() = c;
  return IntPoly(std::move(v));
}

void IntPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

BigInt IntPoly::coeff(int i) const {
  if (i < 0 || i > degree()) return 0;
  return coeffs_[static_cast<std::size_t>(i)];
}

BigInt IntPoly::content() const {
  if (is_zero()) return 0;
  BigInt g = 0;
  for (const auto& c : coeffs_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return lead() < 0 ? BigInt(-g) : g;
}

IntPoly IntPoly::primitive_part() const {
  if (is_zero()) return *this;
  BigInt c = content();
  std::vector<BigInt> out(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    mpz_divexact(out[i].get_mpz_t(), coeffs_[i].get_mpz_t(), c.get_mpz_t());
  return IntPoly(std::move(out));
}

bool IntPoly::is_primitive() const { return !is_zero() && content() == 1; }

IntPoly IntPoly::derivative() const {
  if (degree() < 1) return {};
  std::vector<BigInt> out(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) out[i - 1] = coeffs_[i] * static_cast<long>(i);
  return IntPoly(std::move(out));
}

IntPoly IntPoly::reversed() const {
  std::vector<BigInt> out(coeffs_.rbegin(), coeffs_.rend());
  return IntPoly(std::move(out));
}

BigInt IntPoly::max_abs_coeff() const {
  BigInt m = 0;
  for (const auto& c : coeffs_) m = std::max(m, BigInt(abs(c)));
  return m;
}

BigRat IntPoly::eval(const BigRat& x) const {
  BigRat acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + BigRat(*it);
  return acc;
}

std::complex<double> IntPoly::eval(std::complex<double> z) const {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + it->get_d();
  return acc;
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
  std::vector<BigInt> out(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) out[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) out[i] += b.coeffs_[i];
  return IntPoly(std::move(out));
}

IntPoly IntPoly::operator-() const {
  std::vector<BigInt> out(coeffs_);
  for (auto& c : out) c = -c;
  return IntPoly(std::move(out));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<BigInt> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
      mpz_addmul(out[i + j].get_mpz_t(), a.coeffs_[i].get_mpz_t(), b.coeffs_[j].get_mpz_t());
  }
  return IntPoly(std::move(out));
}

IntPoly operator*(const BigInt& c, const IntPoly& a) {
  std::vector<BigInt> out(a.coeffs_);
  for (auto& x : out) x *= c;
  return IntPoly(std::move(out));
}

bool operator<(const IntPoly& a, const IntPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  return std::lexicographical_compare(a.coeffs_.begin(), a.coeffs_.end(), b.coeffs_.begin(),
                                      b.coeffs_.end());
}

std::string IntPoly::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    const BigInt& c = coeffs_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    BigInt mag = abs(c);
    if (c < 0)
      out += "-";
    else if (!out.empty())
      out += "+";
    if (i == 0) {
      out += mag.get_str();
      continue;
    }
    if (mag != 1) out += mag.get_str() + "*";
    out += "t";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

bool divides_exactly(const IntPoly& a, const IntPoly& b, IntPoly* quotient) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  if (a.is_zero()) {
    if (quotient) *quotient = IntPoly();
    return true;
  }
  if (a.degree() < b.degree()) return false;
  std::vector<BigInt> rem(a.coeffs());
  std::vector<BigInt> q(static_cast<std::size_t>(a.degree() - b.degree() + 1));
  const auto& bc = b.coeffs();
  const BigInt& lb = b.lead();
  for (int i = a.degree() - b.degree(); i >= 0; --i) {
    BigInt& top = rem[static_cast<std::size_t>(i + b.degree())];
    if (!mpz_divisible_p(top.get_mpz_t(), lb.get_mpz_t())) return false;
    BigInt f;
    mpz_divexact(f.get_mpz_t(), top.get_mpz_t(), lb.get_mpz_t());
    q[static_cast<std::size_t>(i)] = f;
    if (f == 0) continue;
    for (std::size_t j = 0; j < bc.size(); ++j)
      mpz_submul(rem[static_cast<std::size_t>(i) + j].get_mpz_t(), f.get_mpz_t(), bc[j].get_mpz_t());
  }
  for (const auto& r : rem)
    if (r != 0) return false;
  if (quotient) *quotient = IntPoly(std::move(q));
  return true;
}

std::pair<IntPoly, IntPoly> pseudo_divmod(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  if (a.degree() < b.degree()) return {IntPoly(), a};
  int delta = a.degree() - b.degree();
  std::vector<BigInt> rem(a.coeffs());
  std::vector<BigInt> q(static_cast<std::size_t>(delta + 1));
  const auto& bc = b.coeffs();
  const BigInt& lb = b.lead();
  for (int i = delta; i >= 0; --i) {
    // Scale everything so the top coefficient becomes divisible by lead(b).
    for (auto& r : rem) r *= lb;
    for (auto& x : q) x *= lb;
    BigInt top = rem[static_cast<std::size_t>(i + b.degree())] / lb;
    q[static_cast<std::size_t>(i)] += top;
    for (std::size_t j = 0; j < bc.size(); ++j)
      mpz_submul(rem[static_cast<std::size_t>(i) + j].get_mpz_t(), top.get_mpz_t(), bc[j].get_mpz_t());
    rem.resize(static_cast<std::size_t>(i + b.degree()));
  }
  return {IntPoly(std::move(q)), IntPoly(std::move(rem))};
}

IntPoly gcd(const IntPoly& a, const IntPoly& b) {
  IntPoly x = a.is_zero() ? a : a.primitive_part();
  IntPoly y = b.is_zero() ? b : b.primitive_part();
  if (x.degree() < y.degree()) std::swap(x, y);
  while (!y.is_zero()) {
    IntPoly r = pseudo_divmod(x, y).second;
    x = std::move(y);
    y = r.is_zero() ? r : r.primitive_part();
  }
  return x;
}

}  // namespace rothaff
