// Factorization over Q: squarefree reduction, Cantor-Zassenhaus modulo a
// small prime, multifactor Hensel lifting and exhaustive recombination.

#include "rothaff/factor.hpp"

#include <algorithm>
#include <cstdint>
#include <random>

#include "rothaff/errors.hpp"

namespace rothaff {

namespace {

using u64 = std::uint64_t;
using ModPoly = std::vector<u64>;  // ascending, reduced mod p, no trailing zeros

void mp_trim(ModPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int mp_deg(const ModPoly& a) { return static_cast<int>(a.size()) - 1; }

u64 mod_pow(u64 b, u64 e, u64 p) {
  u64 r = 1;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

u64 mod_inv(u64 a, u64 p) { return mod_pow(a, p - 2, p); }

ModPoly mp_from(const IntPoly& f, u64 p) {
  ModPoly out;
  out.reserve(f.coeffs().size());
  for (const auto& c : f.coeffs()) {
    BigInt r;
    mpz_fdiv_r_ui(r.get_mpz_t(), c.get_mpz_t(), p);
    out.push_back(r.get_ui());
  }
  mp_trim(out);
  return out;
}

ModPoly mp_sub(ModPoly a, const ModPoly& b, u64 p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  mp_trim(a);
  return a;
}

ModPoly mp_add(ModPoly a, const ModPoly& b, u64 p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + b[i]) % p;
  mp_trim(a);
  return a;
}

ModPoly mp_mul(const ModPoly& a, const ModPoly& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  ModPoly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % p;
  }
  mp_trim(out);
  return out;
}

ModPoly mp_scale(ModPoly a, u64 c, u64 p) {
  for (auto& x : a) x = x * c % p;
  mp_trim(a);
  return a;
}

std::pair<ModPoly, ModPoly> mp_divmod(ModPoly a, const ModPoly& b, u64 p) {
  if (b.empty()) throw DomainError("division by zero polynomial mod p");
  if (a.size() < b.size()) return {ModPoly{}, a};
  u64 inv = mod_inv(b.back(), p);
  ModPoly q(a.size() - b.size() + 1, 0);
  for (int i = mp_deg(a) - mp_deg(b); i >= 0; --i) {
    u64 f = a[static_cast<std::size_t>(i) + b.size() - 1] * inv % p;
    q[static_cast<std::size_t>(i)] = f;
    if (!f) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      u64& slot = a[static_cast<std::size_t>(i) + j];
      slot = (slot + p - f * b[j] % p) % p;
    }
  }
  mp_trim(a);
  mp_trim(q);
  return {q, a};
}

ModPoly mp_rem(const ModPoly& a, const ModPoly& b, u64 p) { return mp_divmod(a, b, p).second; }

ModPoly mp_monic(const ModPoly& a, u64 p) {
  if (a.empty()) return a;
  return mp_scale(a, mod_inv(a.back(), p), p);
}

ModPoly mp_gcd(ModPoly a, ModPoly b, u64 p) {
  while (!b.empty()) {
    ModPoly r = mp_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return mp_monic(a, p);
}

// s*a + t*b = 1 for coprime a, b.
void mp_xgcd(const ModPoly& a, const ModPoly& b, u64 p, ModPoly& s, ModPoly& t) {
  ModPoly r0 = a, r1 = b;
  ModPoly s0{1}, s1{}, t0{}, t1{1};
  while (!r1.empty()) {
    auto [q, r] = mp_divmod(r0, r1, p);
    ModPoly s2 = mp_sub(s0, mp_mul(q, s1, p), p);
    ModPoly t2 = mp_sub(t0, mp_mul(q, t1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (mp_deg(r0) != 0) throw DomainError("Hensel lifting requires coprime factors");
  u64 inv = mod_inv(r0[0], p);
  s = mp_scale(s0, inv, p);
  t = mp_scale(t0, inv, p);
}

ModPoly mp_derivative(const ModPoly& a, u64 p) {
  if (a.size() < 2) return {};
  ModPoly out(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) out[i - 1] = a[i] * (i % p) % p;
  mp_trim(out);
  return out;
}

ModPoly mp_powmod(ModPoly base, const BigInt& e, const ModPoly& m, u64 p) {
  ModPoly result{1};
  base = mp_rem(base, m, p);
  std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = mp_rem(mp_mul(result, result, p), m, p);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = mp_rem(mp_mul(result, base, p), m, p);
  }
  return result;
}

// Distinct-degree factorization of a monic squarefree polynomial.
std::vector<std::pair<ModPoly, int>> distinct_degree(ModPoly f, u64 p) {
  std::vector<std::pair<ModPoly, int>> out;
  const ModPoly x{0, 1};
  ModPoly h = x;
  for (int d = 1; 2 * d <= mp_deg(f); ++d) {
    h = mp_powmod(h, BigInt(static_cast<unsigned long>(p)), f, p);
    ModPoly g = mp_gcd(f, mp_sub(h, x, p), p);
    if (mp_deg(g) > 0) {
      out.emplace_back(g, d);
      f = mp_divmod(f, g, p).first;
      h = mp_rem(h, f, p);
    }
  }
  if (mp_deg(f) > 0) out.emplace_back(f, mp_deg(f));
  return out;
}

void equal_degree(const ModPoly& f, int d, u64 p, std::mt19937_64& rng, std::vector<ModPoly>& out) {
  if (mp_deg(f) == d) {
    out.push_back(f);
    return;
  }
  BigInt pd;
  mpz_ui_pow_ui(pd.get_mpz_t(), p, static_cast<unsigned long>(d));
  BigInt e = (pd - 1) / 2;
  std::uniform_int_distribution<u64> coef(0, p - 1);
  for (;;) {
    ModPoly a(static_cast<std::size_t>(mp_deg(f)));
    for (auto& c : a) c = coef(rng);
    mp_trim(a);
    if (mp_deg(a) < 1) continue;
    ModPoly g = mp_gcd(f, a, p);
    if (mp_deg(g) <= 0 || mp_deg(g) == mp_deg(f)) {
      ModPoly b = mp_powmod(a, e, f, p);
      g = mp_gcd(f, mp_sub(b, ModPoly{1}, p), p);
    }
    if (mp_deg(g) > 0 && mp_deg(g) < mp_deg(f)) {
      equal_degree(g, d, p, rng, out);
      equal_degree(mp_divmod(f, g, p).first, d, p, rng, out);
      return;
    }
  }
}

// Monic irreducible factors of a squarefree polynomial mod p (p odd).
std::vector<ModPoly> factor_mod_p(const ModPoly& f, u64 p) {
  std::mt19937_64 rng(0x5eed0000u + p);
  std::vector<ModPoly> out;
  for (auto& [g, d] : distinct_degree(mp_monic(f, p), p)) equal_degree(g, d, p, rng, out);
  std::sort(out.begin(), out.end(), [](const ModPoly& a, const ModPoly& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  });
  return out;
}

using ZPoly = std::vector<BigInt>;  // residues mod p^k, ascending

ZPoly z_from(const ModPoly& a) {
  ZPoly out;
  for (u64 c : a) out.emplace_back(static_cast<unsigned long>(c));
  return out;
}

ZPoly z_mul(const ZPoly& a, const ZPoly& b, const BigInt& m) {
  if (a.empty() || b.empty()) return {};
  ZPoly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  for (auto& c : out) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
  return out;
}

ZPoly z_reduce(const IntPoly& f, const BigInt& m) {
  ZPoly out;
  for (const auto& c : f.coeffs()) {
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    out.push_back(r);
  }
  return out;
}

// Lifts f = g*h (mod p), g monic, to f = G*H (mod p^k).
void hensel_pair(const ZPoly& f, const ModPoly& g, const ModPoly& h, u64 p, int k, ZPoly& G,
                 ZPoly& H) {
  ModPoly s, t;
  mp_xgcd(g, h, p, s, t);
  G = z_from(g);
  H = z_from(h);
  H.back() = f.back();  // lead(H) must equal lead(f) mod p^k, not just mod p
  BigInt pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), p, static_cast<unsigned long>(k));
  BigInt pi = p;
  for (int i = 1; i < k; ++i) {
    ZPoly prod = z_mul(G, H, pk);
    ModPoly e(std::max(f.size(), prod.size()), 0);
    for (std::size_t j = 0; j < e.size(); ++j) {
      BigInt diff = (j < f.size() ? f[j] : BigInt(0)) - (j < prod.size() ? prod[j] : BigInt(0));
      mpz_fdiv_r(diff.get_mpz_t(), diff.get_mpz_t(), pk.get_mpz_t());
      // diff is divisible by p^i by construction.
      mpz_divexact(diff.get_mpz_t(), diff.get_mpz_t(), pi.get_mpz_t());
      e[j] = mpz_fdiv_ui(diff.get_mpz_t(), p);
    }
    mp_trim(e);
    auto [quo, tau] = mp_divmod(mp_mul(t, e, p), g, p);
    ModPoly sigma = mp_add(mp_mul(s, e, p), mp_mul(quo, h, p), p);
    BigInt next = pi * p;
    auto bump = [&](ZPoly& P, const ModPoly& delta) {
      if (P.size() < delta.size()) P.resize(delta.size());
      for (std::size_t j = 0; j < delta.size(); ++j) {
        mpz_addmul_ui(P[j].get_mpz_t(), pi.get_mpz_t(), delta[j]);
        mpz_fdiv_r(P[j].get_mpz_t(), P[j].get_mpz_t(), pk.get_mpz_t());
      }
    };
    bump(G, tau);
    bump(H, sigma);
    pi = next;
  }
}

std::vector<ZPoly> hensel_lift(const IntPoly& f, const std::vector<ModPoly>& factors, u64 p, int k) {
  BigInt pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), p, static_cast<unsigned long>(k));
  std::vector<ZPoly> out;
  ZPoly current = z_reduce(f, pk);
  u64 lc = mpz_fdiv_ui(f.lead().get_mpz_t(), p);
  for (std::size_t i = 0; i + 1 < factors.size(); ++i) {
    ModPoly rest{lc};
    for (std::size_t j = i + 1; j < factors.size(); ++j) rest = mp_mul(rest, factors[j], p);
    ZPoly G, H;
    hensel_pair(current, factors[i], rest, p, k, G, H);
    out.push_back(std::move(G));
    current = std::move(H);
  }
  // The last factor carries the leading coefficient; make it monic.
  BigInt lead = current.back(), inv;
  mpz_invert(inv.get_mpz_t(), lead.get_mpz_t(), pk.get_mpz_t());
  for (auto& c : current) {
    c *= inv;
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), pk.get_mpz_t());
  }
  out.push_back(std::move(current));
  return out;
}

IntPoly symmetric(const ZPoly& a, const BigInt& m) {
  BigInt half = m / 2;
  std::vector<BigInt> out(a);
  for (auto& c : out) {
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    if (c > half) c -= m;
  }
  return IntPoly(std::move(out));
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

const std::vector<u64>& small_primes() {
  static const std::vector<u64> primes = [] {
    std::vector<u64> out;
    for (u64 n = 3; n < 20000; n += 2) {
      bool prime = true;
      for (u64 d = 3; d * d <= n; d += 2)
        if (n % d == 0) {
          prime = false;
          break;
        }
      if (prime) out.push_back(n);
    }
    return out;
  }();
  return primes;
}

// Irreducible factors of a squarefree primitive polynomial with positive lead.
std::vector<IntPoly> zassenhaus(const IntPoly& f) {
  if (f.degree() <= 1) return {f};

  u64 best_p = 0;
  std::vector<ModPoly> best;
  int good = 0;
  for (u64 p : small_primes()) {
    if (mpz_fdiv_ui(f.lead().get_mpz_t(), p) == 0) continue;
    ModPoly fp = mp_from(f, p);
    if (mp_deg(mp_gcd(fp, mp_derivative(fp, p), p)) != 0) continue;
    auto facs = factor_mod_p(fp, p);
    if (best_p == 0 || facs.size() < best.size()) {
      best_p = p;
      best = std::move(facs);
    }
    if (best.size() == 1 || ++good == 5) break;
  }
  if (best_p == 0) throw DomainError("no suitable prime for factorization of " + f.to_string());
  if (best.size() == 1) return {f};

  // Factor coefficients of lead(f)*g are bounded by |lc| 2^n (n+1) max|c|.
  BigInt bound = abs(f.lead()) * f.max_abs_coeff() * (f.degree() + 1);
  mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), static_cast<unsigned long>(f.degree()));
  bound *= 2;
  int k = 1;
  BigInt pk = static_cast<unsigned long>(best_p);
  while (pk <= bound) {
    pk *= static_cast<unsigned long>(best_p);
    ++k;
  }
  std::vector<ZPoly> lifted = hensel_lift(f, best, best_p, k);

  std::vector<IntPoly> found;
  IntPoly rest = f;
  for (std::size_t size = 1; 2 * size <= lifted.size();) {
    std::vector<std::size_t> idx(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    bool hit = false;
    do {
      ZPoly prod{BigInt(rest.lead())};
      for (std::size_t i : idx) prod = z_mul(prod, lifted[i], pk);
      IntPoly cand = symmetric(prod, pk);
      if (cand.degree() < 1) continue;
      cand = cand.primitive_part();
      IntPoly quot;
      if (divides_exactly(rest, cand, &quot)) {
        found.push_back(cand);
        rest = quot;
        for (std::size_t j = idx.size(); j-- > 0;) lifted.erase(lifted.begin() + static_cast<long>(idx[j]));
        hit = true;
        break;
      }
    } while (next_combination(idx, lifted.size()));
    if (!hit) ++size;
  }
  if (rest.degree() > 0) found.push_back(rest.primitive_part());
  return found;
}

}  // namespace

IntPoly Factorization::expand() const {
  IntPoly out = IntPoly::constant(content);
  for (const auto& pf : factors)
    for (int i = 0; i < pf.multiplicity; ++i) out = out * pf.factor;
  return out;
}

IntPoly squarefree_part(const IntPoly& f) {
  if (f.is_zero()) throw DomainError("squarefree part of zero");
  IntPoly g = f.primitive_part();
  if (g.degree() < 1) return IntPoly{1};
  IntPoly common = gcd(g, g.derivative());
  IntPoly quot;
  divides_exactly(g, common, &quot);
  return quot.primitive_part();
}

Factorization factor_q(const IntPoly& f) {
  if (f.is_zero()) throw DomainError("cannot factor the zero polynomial");
  Factorization out;
  out.content = f.content();
  if (f.degree() < 1) return out;
  IntPoly g = f.primitive_part();
  for (const IntPoly& irr : zassenhaus(squarefree_part(g))) {
    int mult = 0;
    IntPoly quot;
    while (divides_exactly(g, irr, &quot)) {
      g = quot;
      ++mult;
    }
    out.factors.push_back({irr, mult});
  }
  std::sort(out.factors.begin(), out.factors.end(),
            [](const PolyFactor& a, const PolyFactor& b) { return a.factor < b.factor; });
  return out;
}

}  // namespace rothaff
