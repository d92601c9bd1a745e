#include "rothaff/numbers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rothaff/errors.hpp"

namespace rothaff {

BigRat make_rat(const BigInt& num, const BigInt& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  BigRat r(num, den);
  r.canonicalize();
  return r;
}

BigRat parse_rat(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return BigRat(BigInt(text));
    return make_rat(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw ParseError("not a rational number: '" + text + "'");
  }
}

std::string to_string(const BigInt& x) { return x.get_str(); }

std::string to_string(const BigRat& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

double log_abs(const BigInt& x) {
  if (x == 0) throw DomainError("log of zero");
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

double log_abs(const BigRat& x) { return log_abs(x.get_num()) - log_abs(x.get_den()); }

long valuation(const BigInt& x, const BigInt& p) {
  if (x == 0) throw DomainError("valuation of zero");
  if (p < 2) throw DomainError("valuation at non-prime " + p.get_str());
  BigInt rest = x;
  long v = 0;
  while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
    ++v;
  }
  return v;
}

long valuation(const BigRat& x, const BigInt& p) {
  return valuation(x.get_num(), p) - valuation(x.get_den(), p);
}

bool is_probable_prime(const BigInt& p) {
  return p >= 2 && mpz_probab_prime_p(p.get_mpz_t(), 30) > 0;
}

namespace {

BigInt pollard_rho(const BigInt& n, unsigned long seed) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  BigInt c = seed;
  BigInt x = 2, y = 2, d = 1;
  auto step = [&](const BigInt& v) {
    BigInt r = v * v + c;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
    return r;
  };
  while (d == 1) {
    x = step(x);
    y = step(step(y));
    BigInt diff = x - y;
    mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
  }
  return d;
}

void split(const BigInt& n, std::vector<BigInt>& primes) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    primes.push_back(n);
    return;
  }
  for (unsigned long seed = 1;; ++seed) {
    BigInt d = pollard_rho(n, seed);
    if (d != n) {
      split(d, primes);
      split(n / d, primes);
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<BigInt, long>> factor_integer(const BigInt& n) {
  if (n == 0) throw DomainError("cannot factor zero");
  BigInt rest = abs(n);
  std::vector<BigInt> primes;
  for (unsigned long p = 2; p < 1000 && rest > 1; ++p) {
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      primes.emplace_back(p);
      rest /= p;
    }
  }
  split(rest, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<BigInt, long>> out;
  for (const auto& p : primes) {
    if (!out.empty() && out.back().first == p)
      ++out.back().second;
    else
      out.emplace_back(p, 1);
  }
  return out;
}

BigInt binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

BigRat rat_from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite value has no rational form");
  BigRat r;
  mpq_set_d(r.get_mpq_t(), x);
  return r;
}

}  // namespace rothaff
