// Aberth-Ehrlich simultaneous iteration, Newton polishing in 256-bit binary
// floating point, and Weierstrass inclusion discs for certification.

#include "rothaff/roots.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rothaff/errors.hpp"
#include "rothaff/factor.hpp"

namespace rothaff {

namespace {

struct HC {
  HighReal re = 0, im = 0;
};

HC operator+(const HC& a, const HC& b) { return {a.re + b.re, a.im + b.im}; }
HC operator-(const HC& a, const HC& b) { return {a.re - b.re, a.im - b.im}; }
HC operator*(const HC& a, const HC& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
HighReal norm2(const HC& a) { return a.re * a.re + a.im * a.im; }
HC operator/(const HC& a, const HC& b) {
  HighReal d = norm2(b);
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
HighReal abs(const HC& a) { return sqrt(norm2(a)); }

using LC = std::complex<long double>;

// Evaluates p and p' at z by Horner.
template <class C, class Coef>
void horner(const std::vector<Coef>& c, const C& z, C& p, C& dp) {
  p = C{};
  dp = C{};
  for (std::size_t i = c.size(); i-- > 0;) {
    dp = dp * z + p;
    p = p * z + C{c[i]};
  }
}

void horner_hc(const std::vector<HighReal>& c, const HC& z, HC& p, HC& dp) {
  p = HC{};
  dp = HC{};
  for (std::size_t i = c.size(); i-- > 0;) {
    dp = dp * z + p;
    p = p * z + HC{c[i], 0};
  }
}

std::vector<LC> aberth_long_double(const IntPoly& g) {
  const int n = g.degree();
  std::vector<long double> c;
  for (const auto& x : g.coeffs()) c.push_back(static_cast<long double>(x.get_d()));
  long double r = std::pow(std::fabs(c[0] / c.back()), 1.0L / n);
  if (!(r > 0) || !std::isfinite(r)) r = 1;
  std::vector<LC> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    long double ang = 2.0L * 3.14159265358979323846L * k / n + 0.4L;
    z[static_cast<std::size_t>(k)] = std::polar(r, ang);
  }
  for (int iter = 0; iter < 2000; ++iter) {
    long double worst = 0;
    for (int i = 0; i < n; ++i) {
      LC p, dp;
      horner(c, z[static_cast<std::size_t>(i)], p, dp);
      if (p == LC{}) continue;
      LC w = p / dp;
      LC s = 0;
      for (int j = 0; j < n; ++j)
        if (j != i) s += 1.0L / (z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)]);
      LC step = w / (1.0L - w * s);
      z[static_cast<std::size_t>(i)] -= step;
      worst = std::max(worst, std::abs(step) / std::max(1.0L, std::abs(z[static_cast<std::size_t>(i)])));
    }
    if (worst < 1e-18L) break;
  }
  return z;
}

// Inclusion radii n |f(z_i)| / |lead * prod_{j != i}(z_i - z_j)|. Returns false
// if some radius is too large or two discs intersect.
bool certify(const std::vector<HighReal>& c, const std::vector<HC>& z, int bits,
             std::vector<double>& radii, std::string& why) {
  const std::size_t n = z.size();
  radii.assign(n, 0.0);
  std::vector<HighReal> rad(n);
  HighReal eps = ldexp(HighReal(1), -bits);
  for (std::size_t i = 0; i < n; ++i) {
    HC p, dp;
    horner_hc(c, z[i], p, dp);
    HC denom{c.back(), 0};
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) denom = denom * (z[i] - z[j]);
    HighReal dn = abs(denom);
    if (dn == 0) {
      why = "coincident approximations";
      return false;
    }
    rad[i] = HighReal(static_cast<int>(n)) * abs(p) / dn;
    HighReal scale = std::max(HighReal(1), abs(z[i]));
    if (rad[i] > eps * scale) {
      std::ostringstream os;
      os << "root " << i << " radius " << static_cast<double>(rad[i]) << " exceeds 2^-" << bits;
      why = os.str();
      return false;
    }
    radii[i] = static_cast<double>(rad[i]);
    // Round up so the reported radius stays an upper bound.
    radii[i] = std::nextafter(radii[i], 1.0);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (abs(z[i] - z[j]) <= rad[i] + rad[j]) {
        why = "inclusion discs overlap";
        return false;
      }
  return true;
}

void aberth_high(const std::vector<HighReal>& c, std::vector<HC>& z, int bits) {
  const std::size_t n = z.size();
  HighReal tol = ldexp(HighReal(1), -(bits + 40));
  for (int iter = 0; iter < 500; ++iter) {
    HighReal worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
      HC p, dp;
      horner_hc(c, z[i], p, dp);
      if (norm2(p) == 0) continue;
      HC w = p / dp;
      HC s;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) s = s + HC{1, 0} / (z[i] - z[j]);
      HC step = w / (HC{1, 0} - w * s);
      z[i] = z[i] - step;
      worst = std::max(worst, abs(step) / std::max(HighReal(1), abs(z[i])));
    }
    if (worst < tol) return;
  }
}

std::vector<RootApprox> simple_roots(const IntPoly& g, int bits) {
  const int n = g.degree();
  std::vector<HighReal> c;
  for (const auto& x : g.coeffs()) c.emplace_back(x.get_str());
  if (n == 1) {
    RootApprox r;
    r.re = -c[0] / c[1];
    return {r};
  }
  std::vector<HC> z;
  for (const LC& w : aberth_long_double(g)) z.push_back({HighReal(w.real()), HighReal(w.imag())});

  HighReal tol = ldexp(HighReal(1), -(bits + 40));
  for (auto& zi : z) {
    for (int iter = 0; iter < 200; ++iter) {
      HC p, dp;
      horner_hc(c, zi, p, dp);
      if (norm2(dp) == 0 || norm2(p) == 0) break;
      HC step = p / dp;
      zi = zi - step;
      if (abs(step) < tol * std::max(HighReal(1), abs(zi))) break;
    }
  }
  std::vector<double> radii;
  std::string why;
  if (!certify(c, z, bits, radii, why)) {
    // Newton from poor starting points can collapse onto one root.
    aberth_high(c, z, bits);
    if (!certify(c, z, bits, radii, why))
      throw DomainError("root isolation failed for " + g.to_string() + ": " + why);
  }
  std::vector<RootApprox> out;
  for (std::size_t i = 0; i < z.size(); ++i) out.push_back({z[i].re, z[i].im, radii[i]});
  std::sort(out.begin(), out.end(), [](const RootApprox& a, const RootApprox& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  });
  return out;
}

}  // namespace

std::vector<RootApprox> complex_roots(const IntPoly& f, int precision_bits) {
  if (f.degree() < 1) throw DomainError("complex_roots needs degree >= 1");
  if (precision_bits < 8 || precision_bits > 200)
    throw DomainError("precision_bits must lie in [8, 200]");
  std::vector<RootApprox> out;
  for (const auto& pf : factor_q(f).factors) {
    auto roots = simple_roots(pf.factor, precision_bits);
    for (int m = 0; m < pf.multiplicity; ++m) out.insert(out.end(), roots.begin(), roots.end());
  }
  return out;
}

}  // namespace rothaff
