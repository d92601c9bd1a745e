#include "rothaff/heights.hpp"

#include <cmath>

#include "rothaff/errors.hpp"
#include "rothaff/factor.hpp"
#include "rothaff/roots.hpp"

namespace rothaff {

namespace {

void require_in_k(const RatFunc& xi, Polarization pol) {
  if (pol == Polarization::NumberFieldQ && !xi.is_zero() && !xi.is_constant())
    throw DomainError(xi.to_string() + " is not an element of Q");
}

// sum over primes p | n of e_p log p, with the primes listed.
double log_over_primes(const BigInt& n) {
  double s = 0;
  for (const auto& [p, e] : factor_integer(n)) s += static_cast<double>(e) * log_abs(p);
  return s;
}

}  // namespace

double fs_log_mahler(const IntPoly& f) {
  if (f.is_zero()) throw DomainError("log Mahler measure of the zero polynomial");
  double m = log_abs(f.lead());
  if (f.degree() >= 1)
    for (const auto& r : complex_roots(f)) m += 0.5 * std::log1p(std::norm(r.value()));
  return m;
}

double arch_log_integral(const RatFunc& xi, Polarization pol) {
  if (xi.is_zero()) throw DomainError("log of the zero function");
  require_in_k(xi, pol);
  double v = log_abs(xi.content());
  if (pol == Polarization::FunctionFieldQt) v += fs_log_mahler(xi.num()) - fs_log_mahler(xi.den());
  return v;
}

std::vector<SingularPoint> singular_points(const RatFunc& xi) {
  std::vector<SingularPoint> pts;
  if (xi.is_zero()) return pts;
  for (const IntPoly* p : {&xi.num(), &xi.den()})
    if (p->degree() >= 1)
      for (const auto& r : complex_roots(*p, 53)) pts.push_back({r.value(), false});
  if (xi.num().degree() != xi.den().degree()) pts.push_back(SingularPoint::infinity());
  return pts;
}

Estimate naive_height(const RatFunc& xi, Polarization pol, const QuadOptions& opts) {
  if (xi.is_zero()) return {};
  require_in_k(xi, pol);
  Estimate out;
  // Vertical poles: primes of the content denominator.
  out.value += log_over_primes(xi.content().get_den());
  if (xi.is_constant()) {
    // log+ |c| integrated against a probability measure.
    out.value += std::max(0.0, log_abs(xi.content()));
    return out;
  }
  for (const auto& pf : factor_q(xi.den()).factors)
    out.value += pf.multiplicity * hm_weight(HorizontalFinite{pf.factor}, pol);
  RatFuncEvaluator ev(xi);
  QuadOptions o = opts;
  o.singular_points = singular_points(xi);
  auto q = integrate_arch(
      [&](const ArchSample& s) {
        double a = ev.abs_at(s.z, s.chart == Chart::Inverted);
        return a > 1 ? std::log(a) : 0.0;
      },
      SetS::archimedean(), o);
  out.value += q.value;
  out.error_bound = q.error_bound;
  return out;
}

Estimate product_formula_defect(const RatFunc& xi, Polarization pol, DefectMode mode,
                                const QuadOptions& opts) {
  if (xi.is_zero()) throw DomainError("product formula for the zero function");
  require_in_k(xi, pol);
  Estimate arch;
  if (mode == DefectMode::ClosedForm || xi.is_constant()) {
    arch.value = arch_log_integral(xi, pol);
  } else {
    RatFuncEvaluator ev(xi);
    QuadOptions o = opts;
    o.singular_points = singular_points(xi);
    auto q = integrate_arch(
        [&](const ArchSample& s) { return std::log(ev.abs_at(s.z, s.chart == Chart::Inverted)); },
        SetS::archimedean(), o);
    arch = {q.value, q.error_bound};
  }
  // Finite part: sum over places of h_M(Y) ord_Y(xi).
  double finite = log_over_primes(xi.content().get_num()) - log_over_primes(xi.content().get_den());
  if (pol == Polarization::FunctionFieldQt) {
    for (const auto& pf : factor_q(xi.num()).factors)
      finite += pf.multiplicity * hm_weight(HorizontalFinite{pf.factor}, pol);
    for (const auto& pf : factor_q(xi.den()).factors)
      finite -= pf.multiplicity * hm_weight(HorizontalFinite{pf.factor}, pol);
  }
  return {arch.value - finite, arch.error_bound};
}

int deg_m(const RatFunc& xi, Polarization pol) {
  if (xi.is_zero()) throw DomainError("degree of the zero function");
  require_in_k(xi, pol);
  if (pol == Polarization::NumberFieldQ) return 0;
  return std::max(xi.num().degree(), xi.den().degree());
}

BigInt height_q_exact(const BigRat& x) {
  if (x == 0) return 1;
  // Archimedean place.
  BigRat prod = abs(x) > 1 ? BigRat(abs(x)) : BigRat(1);
  // Only primes of the denominator have |x|_p > 1.
  for (const auto& [p, e] : factor_integer(x.get_den())) {
    BigInt pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
    prod *= pe;
  }
  prod.canonicalize();
  if (prod.get_den() != 1) throw DomainError("internal: non-integral height");
  return prod.get_num();
}

BigRat product_formula_q_exact(const BigRat& x) {
  if (x == 0) throw DomainError("product formula for zero");
  BigRat prod = abs(x);
  auto apply = [&](const BigInt& n, bool numerator) {
    for (const auto& [p, e] : factor_integer(n)) {
      BigInt pe;
      mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
      // |x|_p = p^(-v_p(x))
      if (numerator)
        prod /= BigRat(pe);
      else
        prod *= BigRat(pe);
    }
  };
  apply(x.get_num(), true);
  apply(x.get_den(), false);
  prod.canonicalize();
  return prod;
}

}  // namespace rothaff
