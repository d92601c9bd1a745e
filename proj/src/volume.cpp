#include "rothaff/volume.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include "rothaff/errors.hpp"

namespace rothaff {

namespace {

BigInt floor_rat(const BigRat& x) {
  BigInt f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return f;
}

BigRat rat_pow(const BigRat& x, int e) {
  BigRat r;
  mpz_pow_ui(r.get_num_mpz_t(), x.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), x.get_den_mpz_t(), e);
  return r;  // already canonical: gcd is preserved by powers
}

BigInt factorial(int n) {
  BigInt f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

constexpr int kMaxParamsN = 200;

}  // namespace

BigRat vol_n(int n, const BigRat& tau) {
  if (n < 1) throw DomainError("Vol_n needs n >= 1");
  if (tau <= 0) return 0;
  if (tau >= n) return 1;
  // (1/n!) sum_{k <= floor(tau)} (-1)^k C(n, k) (tau - k)^n
  long top = floor_rat(tau).get_si();
  BigRat s = 0;
  for (long k = 0; k <= top; ++k) {
    BigRat t = binomial(n, k) * rat_pow(tau - k, n);
    if (k % 2) s -= t;
    else s += t;
  }
  s /= factorial(n);
  s.canonicalize();
  return s;
}

BigInt count_j(const IndexWeights& d, const BigRat& tau) {
  d.validate();
  if (tau <= 0) return 0;
  // Work in units of 1/L with L = lcm(d): k_i/d_i = k_i (L/d_i) / L.
  BigInt L = 1;
  for (int x : d.d) L = lcm(L, BigInt(x));
  BigRat scaled = tau * L;
  // sum < tau L  <=>  sum <= ceil(tau L) - 1
  BigInt limit = -floor_rat(-scaled) - 1;
  std::map<BigInt, BigInt> dp{{BigInt(0), BigInt(1)}};
  for (int di : d.d) {
    BigInt step = L / di;
    std::map<BigInt, BigInt> next;
    for (const auto& [s, c] : dp)
      for (int k = 0; k <= di; ++k) {
        BigInt t = s + step * k;
        if (t > limit) break;
        next[t] += c;
      }
    dp = std::move(next);
  }
  BigInt total = 0;
  for (const auto& [s, c] : dp) total += c;
  return total;
}

long double params_lhs(int q, int n) {
  // 1/(2 n!) underflows harmlessly to 0 for large n.
  long double tiny = std::exp(-std::lgamma(static_cast<long double>(n) + 1) - std::log(2.0L));
  long double num = std::log(static_cast<long double>(q)) - std::log1p(-tiny);
  return std::sqrt(num / (6.0L * n)) + 1.0L / n;
}

ChosenParams choose_params(int q, double eps_prime) {
  if (q < 2) throw DomainError("q must be at least 2");
  if (!(eps_prime > 0) || !std::isfinite(eps_prime)) throw DomainError("eps' must be positive");
  ChosenParams out;
  out.q = q;
  out.eps_prime = eps_prime;
  const long double rhs = 0.5L - 1.0L / (2.0L + eps_prime);
  int n = 2;
  while (!(params_lhs(q, n) < rhs)) {
    if (++n > kMaxParamsN)
      throw DomainError("n0 exceeds " + std::to_string(kMaxParamsN) + "; eps' is too small for exact verification");
  }
  out.n0 = n;

  const BigRat nfact(factorial(n));
  const BigRat target = 1 - 1 / (2 * nfact);
  // Stopping width: 1e-12, tightened so the exact volume inequalities follow.
  BigRat tol(BigInt(1), BigInt("1000000000000"));
  if (BigRat quarter = 1 / (4 * nfact); quarter < tol) tol = quarter;
  BigRat lo = 0, hi = n;
  BigRat mid, diff;
  for (;;) {
    mid = (lo + hi) / 2;
    diff = q * vol_n(n, mid) - target;
    if (abs(diff) <= tol) break;
    if (diff < 0) lo = mid;
    else hi = mid;
  }
  out.tau = mid;
  out.residual = BigRat(abs(diff)).get_d();
  BigRat qv = q * vol_n(n, out.tau);
  out.volume_ok = qv < 1 && 1 < qv + vol_n(n, BigRat(out.sigma));
  out.gap_ok = (2 + rat_from_double(eps_prime)) * (out.tau - out.sigma) > n;
  return out;
}

}  // namespace rothaff
