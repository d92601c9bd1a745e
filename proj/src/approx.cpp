#include "rothaff/approx.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "rothaff/errors.hpp"
#include "rothaff/parallel.hpp"
#include "rothaff/text.hpp"

namespace rothaff {

void DivisorSpec::validate() const {
  if (targets.empty()) throw DomainError("divisor needs at least one target");
  for (std::size_t i = 0; i < targets.size(); ++i)
    for (std::size_t j = i + 1; j < targets.size(); ++j)
      if (targets[i] == targets[j]) throw DomainError("divisor targets must be distinct: " + targets[i].to_string());
}

bool DivisorSpec::contains(const RatFunc& xi) const {
  return std::find(targets.begin(), targets.end(), xi) != targets.end();
}

namespace {

double neg_log_minus(double abs_value) {
  if (abs_value >= 1) return 0.0;
  if (abs_value == 0) return std::numeric_limits<double>::infinity();
  return -std::log(abs_value);
}

// max(0, h_M(v) ord_v(y)) at a finite place.
double finite_lambda(const RatFunc& y, const Place& v, Polarization pol) {
  double w = hm_weight(v, pol);
  if (w == 0) return 0.0;
  return std::max(0.0, w * static_cast<double>(ord_at_place(y, v)));
}

void check_region(const SetS& s, Polarization pol) {
  if (pol == Polarization::NumberFieldQ && !s.cells.empty())
    throw DomainError("K = Q has a single archimedean place; cells are not allowed");
}

}  // namespace

double weil_lambda(const RatFunc& alpha, const RatFunc& xi, const Place& v, Polarization pol) {
  if (alpha == xi) throw DomainError("xi lies on the support of the divisor");
  RatFunc y = xi - alpha;
  if (is_archimedean(v)) return neg_log_minus(abs_value(y, v, pol));
  return finite_lambda(y, v, pol);
}

double weil_lambda_infinity(const RatFunc& xi, const Place& v, Polarization pol) {
  if (xi.is_zero()) return 0.0;
  if (is_archimedean(v)) {
    double a = abs_value(xi, v, pol);
    return a > 1 ? std::log(a) : 0.0;
  }
  double w = hm_weight(v, pol);
  if (w == 0) return 0.0;
  return std::max(0.0, -w * static_cast<double>(ord_at_place(xi, v)));
}

Estimate proximity(const DivisorSpec& d, const RatFunc& xi, const SetS& s, ProximityMode mode,
                   Polarization pol, const QuadOptions& opts) {
  d.validate();
  check_region(s, pol);
  if (d.contains(xi)) throw DomainError("xi lies on the support of the divisor");
  std::vector<RatFunc> diffs;
  for (const auto& a : d.targets) diffs.push_back(xi - a);

  auto combine = [&](const std::vector<double>& vals) {
    if (mode == ProximityMode::Sum) return std::accumulate(vals.begin(), vals.end(), 0.0);
    return std::max(0.0, *std::max_element(vals.begin(), vals.end()));
  };

  Estimate out;
  std::vector<double> vals(diffs.size() + (d.include_infinity ? 1 : 0));
  // Finite places, weighted by counting measure.
  for (const auto& v : s.finite_places) {
    for (std::size_t j = 0; j < diffs.size(); ++j) vals[j] = finite_lambda(diffs[j], v, pol);
    if (d.include_infinity) vals.back() = weil_lambda_infinity(xi, v, pol);
    out.value += combine(vals);
  }
  if (!s.all_archimedean && s.cells.empty()) return out;

  if (pol == Polarization::NumberFieldQ) {
    for (std::size_t j = 0; j < diffs.size(); ++j) vals[j] = neg_log_minus(std::fabs(diffs[j].content().get_d()));
    if (d.include_infinity) vals.back() = std::max(0.0, std::log(std::fabs(xi.content().get_d())));
    out.value += combine(vals);
    return out;
  }

  std::vector<RatFuncEvaluator> evs;
  QuadOptions o = opts;
  for (const auto& y : diffs) {
    evs.emplace_back(y);
    for (const auto& p : singular_points(y)) o.singular_points.push_back(p);
  }
  RatFuncEvaluator xi_ev(xi);
  if (d.include_infinity)
    for (const auto& p : singular_points(xi)) o.singular_points.push_back(p);
  auto q = integrate_arch(
      [&](const ArchSample& z) {
        std::vector<double> local(vals.size());
        bool inv = z.chart == Chart::Inverted;
        for (std::size_t j = 0; j < evs.size(); ++j) local[j] = neg_log_minus(evs[j].abs_at(z.z, inv));
        if (d.include_infinity) {
          double a = xi_ev.abs_at(z.z, inv);
          local.back() = a > 1 ? std::log(a) : 0.0;
        }
        return combine(local);
      },
      s, o);
  out.value += q.value;
  out.error_bound += q.error_bound;
  return out;
}

Estimate counting(const DivisorSpec& d, const RatFunc& xi, const SetS& s, Polarization pol,
                  const QuadOptions& opts) {
  Estimate prox = proximity(d, xi, s, ProximityMode::Sum, pol, opts);
  Estimate out{-prox.value, prox.error_bound};
  for (const auto& a : d.targets) {
    auto h = naive_height(xi - a, pol, opts);
    out.value += h.value;
    out.error_bound += h.error_bound;
  }
  if (d.include_infinity) {
    auto h = naive_height(xi, pol, opts);
    out.value += h.value;
    out.error_bound += h.error_bound;
  }
  return out;
}

Estimate roth_defect(const DivisorSpec& d, const RatFunc& xi, const SetS& s, const RothParams& params,
                     ProximityMode mode, Polarization pol, const QuadOptions& opts) {
  if (!(params.epsilon > 0)) throw DomainError("epsilon must be positive");
  auto prox = proximity(d, xi, s, mode, pol, opts);
  auto h = naive_height(xi, pol, opts);
  return {prox.value - (2 + params.epsilon) * h.value - params.c,
          prox.error_bound + (2 + params.epsilon) * h.error_bound};
}

std::vector<RatFunc> enumerate_scan(const ScanRange& range, Polarization pol, const DivisorSpec& d) {
  std::vector<RatFunc> out;
  if (range.max_coeff <= 0) return out;
  std::set<std::string> seen;
  auto push = [&](const RatFunc& x) {
    if (d.contains(x)) return;
    if (seen.insert(x.to_string()).second) out.push_back(x);
  };
  const long c = range.max_coeff;
  if (pol == Polarization::NumberFieldQ || range.max_deg <= 0) {
    for (long b = 1; b <= c; ++b)
      for (long a = -c; a <= c; ++a)
        if (std::gcd(a, b) == 1) push(RatFunc(make_rat(a, b)));
    return out;
  }
  // All integer polynomials of degree <= max_deg with |coeff| <= c.
  std::vector<IntPoly> polys;
  int len = range.max_deg + 1;
  std::vector<long> digits(len, -c);
  for (;;) {
    std::vector<BigInt> co(digits.begin(), digits.end());
    polys.emplace_back(co);
    int k = 0;
    while (k < len && digits[k] == c) digits[k++] = -c;
    if (k == len) break;
    ++digits[k];
  }
  std::stable_sort(polys.begin(), polys.end());
  for (const auto& den : polys) {
    if (den.is_zero() || den.lead() < 0) continue;
    for (const auto& num : polys) push(RatFunc(num, den));
  }
  return out;
}

std::vector<ScanRow> scan_roth(const DivisorSpec& d, const SetS& s, const RothParams& params,
                               const ScanRange& range, Polarization pol, ProximityMode mode,
                               const QuadOptions& opts) {
  d.validate();
  auto xs = enumerate_scan(range, pol, d);
  auto rows = parallel::map_indexed(xs.size(), [&](std::size_t i) {
    ScanRow r;
    r.xi = xs[i];
    auto h = naive_height(xs[i], pol, opts);
    auto prox = proximity(d, xs[i], s, mode, pol, opts);
    auto cnt = counting(d, xs[i], s, pol, opts);
    r.height = h.value;
    r.proximity = prox.value;
    r.counting = cnt.value;
    r.defect = prox.value - (2 + params.epsilon) * h.value - params.c;
    r.error_bound = prox.error_bound + (2 + params.epsilon) * h.error_bound;
    return r;
  });
  std::stable_sort(rows.begin(), rows.end(), [](const ScanRow& a, const ScanRow& b) { return a.defect > b.defect; });
  return rows;
}

std::string scan_to_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream os;
  os << "xi,height,proximity,counting,defect\n";
  for (const auto& r : rows)
    os << csv_field(r.xi.to_string()) << ',' << format_fixed(r.height, 9) << ','
       << format_fixed(r.proximity, 9) << ',' << format_fixed(r.counting, 9) << ','
       << format_fixed(r.defect, 9) << '\n';
  return os.str();
}

}  // namespace rothaff
