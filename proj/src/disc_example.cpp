#include "rothaff/disc_example.hpp"

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "rothaff/errors.hpp"

namespace rothaff {

namespace {

constexpr double kLog2 = std::numbers::ln2;

// Disc B_{1/2}(n) seen in its chart as a disc of centre c > 0 and radius rho
// on the positive real axis.
struct ChartDisc {
  Chart chart;
  double c, rho;
};

ChartDisc chart_disc(int n) {
  if (n == 1) return {Chart::Standard, 1.0, 0.5};
  double a = 1.0 / (n + 0.5), b = 1.0 / (n - 0.5);
  return {Chart::Inverted, 0.5 * (a + b), 0.5 * (b - a)};
}

std::vector<Cell> disc_cells(int n) {
  ChartDisc d = chart_disc(n);
  double r1 = d.c - d.rho / 2, r2 = std::min(d.c + d.rho / 2, 1.0);
  // |r e^{i phi} - c|^2 = (r - c)^2 + 2 r c (1 - cos phi) <= 0.98 rho^2.
  double phi = std::acos(1 - 0.73 * d.rho * d.rho / (2 * r2 * d.c));
  const double two_pi = 2 * std::numbers::pi;
  std::vector<Cell> cells;
  double rm = 0.5 * (r1 + r2);
  for (auto [lo, hi] : {std::pair{0.0, phi}, std::pair{two_pi - phi, two_pi}}) {
    double mid = 0.5 * (lo + hi);
    for (auto [a, b] : {std::pair{r1, rm}, std::pair{rm, r2}}) {
      cells.emplace_back(d.chart, a, b, lo, mid);
      cells.emplace_back(d.chart, a, b, mid, hi);
    }
  }
  return cells;
}

BigRat pow2(long k) {
  BigInt p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(k));
  return BigRat(p);
}

// Nearest multiple of 2^-k, exactly.
BigRat round_dyadic(const BigRat& x, const BigRat& scale) {
  BigRat y = x * scale + BigRat(1, 2);
  BigInt f;
  mpz_fdiv_q(f.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
  return BigRat(f) / scale;
}

// Exact check at a point v of a cell: v lies in B_{1/2}(n) and the residual
// u = beta_v + n - v satisfies |u|^2 <= 2^(-2k-1).
bool check_sample(int n, long k, std::complex<double> z) {
  BigRat x = rat_from_double(z.real()) - n, y = rat_from_double(z.imag());
  if (!(x * x + y * y < BigRat(1, 4))) return false;
  BigRat scale = pow2(k);
  BigRat ux = round_dyadic(x, scale) - x, uy = round_dyadic(y, scale) - y;
  BigRat bound = 1 / (pow2(k) * pow2(k) * 2);
  return ux * ux + uy * uy <= bound;
}

std::complex<double> cell_point(const Cell& c, double fr, double ft) {
  double r = c.r1() + fr * (c.r2() - c.r1()), th = c.theta1() + ft * (c.theta2() - c.theta1());
  std::complex<double> w = std::polar(r, th);
  return c.chart() == Chart::Standard ? w : 1.0 / w;
}

}  // namespace

double unit_square_mean_neg_log() { return 0.5 * kLog2 + 1.5 - std::numbers::pi / 4; }

double DiscPart::weil_value(const ArchSample& v) const {
  if (lattice_exponent > 0) return lattice_exponent * kLog2 + unit_square_mean_neg_log();
  double a = std::abs(static_cast<double>(n) - v.point());
  return a < 1 ? -std::log(a) : 0.0;
}

bool DiscExample::all_hold() const {
  for (const auto& p : parts)
    if (!p.holds) return false;
  return !parts.empty();
}

void verify_disc_example(DiscExample& ex) {
  if (!(ex.strength >= 3)) throw DomainError("strength factor must be at least 3");
  if (!(ex.tol > 0)) throw DomainError("tolerance must be positive");
  for (std::size_t i = 0; i < ex.parts.size(); ++i)
    for (std::size_t j = i + 1; j < ex.parts.size(); ++j) {
      SetS a{false, ex.parts[i].cells, {}}, b{false, ex.parts[j].cells, {}};
      if (!a.disjoint_from(b)) throw DomainError("regions S_n overlap");
    }
  for (auto& p : ex.parts) {
    if (p.n < 1 || p.cells.empty()) throw DomainError("malformed part for n = " + std::to_string(p.n));
    SetS region{false, p.cells, {}};
    region.validate();
    p.height = std::log(static_cast<double>(p.n));
    p.measure = region.arch_measure();
    p.threshold = ex.strength * p.height / p.measure;
    if ((p.lattice_exponent + 0.5) * kLog2 < p.threshold || p.lattice_exponent < 0)
      throw DomainError("lattice exponent too small for n = " + std::to_string(p.n));

    // Exact pointwise check at the centre and corners of each cell.
    p.samples_checked = 0;
    p.pointwise_ok = true;
    for (const auto& c : p.cells)
      for (auto [fr, ft] : {std::pair{0.5, 0.5}, {0.01, 0.01}, {0.99, 0.01}, {0.01, 0.99}, {0.99, 0.99}}) {
        ++p.samples_checked;
        p.pointwise_ok = p.pointwise_ok && check_sample(p.n, p.lattice_exponent, cell_point(c, fr, ft));
      }

    QuadOptions opts;
    opts.tol = ex.tol;
    if (p.lattice_exponent == 0) opts.singular_points.push_back({{static_cast<double>(p.n), 0.0}, false});
    auto q = integrate_arch([&](const ArchSample& v) { return p.weil_value(v); }, p.cells, opts);
    p.integral = q.value;
    p.error_bound = q.error_bound;
    auto lb = integrate_arch([&](const ArchSample&) { return (p.lattice_exponent + 0.5) * kLog2; }, p.cells, opts);
    p.certified_lower_bound = p.lattice_exponent > 0 ? lb.value : 0.0;
    p.holds = p.pointwise_ok && p.integral >= 3 * p.height - ex.tol;
  }
}

DiscExample build_disc_example(int n_max, double strength, double tol) {
  if (n_max < 1) throw DomainError("Nmax must be at least 1");
  DiscExample ex{n_max, strength, tol, {}};
  for (int n = 1; n <= n_max; ++n) {
    DiscPart p;
    p.n = n;
    p.cells = disc_cells(n);
    double mu = SetS{false, p.cells, {}}.arch_measure();
    double threshold = strength * std::log(static_cast<double>(n)) / mu;
    p.lattice_exponent = threshold > 0 ? std::max(0L, static_cast<long>(std::ceil(threshold / kLog2 - 0.5 + 1e-9))) : 0;
    ex.parts.push_back(p);
  }
  verify_disc_example(ex);
  return ex;
}

std::string disc_example_to_json(const DiscExample& ex) {
  using nlohmann::json;
  json doc;
  doc["n_max"] = ex.n_max;
  doc["strength_factor"] = ex.strength;
  doc["tol"] = ex.tol;
  doc["all_hold"] = ex.all_hold();
  json parts = json::array();
  for (const auto& p : ex.parts) {
    json jp;
    jp["n"] = p.n;
    jp["height"] = p.height;
    jp["measure"] = p.measure;
    jp["threshold"] = p.threshold;
    jp["beta_rule"] = p.lattice_exponent > 0 ? "nearest point of 2^-k Z[i] to v - n" : "constant 0";
    jp["lattice_exponent"] = p.lattice_exponent;
    json cells = json::array();
    for (const auto& c : p.cells) {
      std::complex<double> center = cell_point(c, 0.5, 0.5) - static_cast<double>(p.n);
      // beta at the centre, shown to at most 50 binary digits.
      double scale = std::ldexp(1.0, static_cast<int>(std::min(p.lattice_exponent, 50L)));
      json beta = p.lattice_exponent > 0 ? json::array({std::round(center.real() * scale) / scale, std::round(center.imag() * scale) / scale})
                                         : json::array({0.0, 0.0});
      cells.push_back({{"chart", c.chart() == Chart::Standard ? "standard" : "inverted"},
                       {"r1", c.r1()},
                       {"r2", c.r2()},
                       {"theta1", c.theta1()},
                       {"theta2", c.theta2()},
                       {"beta_center_approx", beta}});
    }
    jp["cells"] = cells;
    jp["integral"] = p.integral;
    jp["error_bound"] = p.error_bound;
    jp["certified_lower_bound"] = p.certified_lower_bound;
    jp["target"] = 3 * p.height;
    jp["samples_checked"] = p.samples_checked;
    jp["pointwise_ok"] = p.pointwise_ok;
    jp["holds"] = p.holds;
    parts.push_back(jp);
  }
  doc["parts"] = parts;
  return doc.dump(2) + "\n";
}

DiscExample disc_example_from_json(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
    DiscExample ex;
    ex.n_max = doc.at("n_max").get<int>();
    ex.strength = doc.at("strength_factor").get<double>();
    ex.tol = doc.at("tol").get<double>();
    for (const auto& jp : doc.at("parts")) {
      DiscPart p;
      p.n = jp.at("n").get<int>();
      p.lattice_exponent = jp.at("lattice_exponent").get<long>();
      for (const auto& jc : jp.at("cells")) {
        std::string chart = jc.at("chart").get<std::string>();
        if (chart != "standard" && chart != "inverted") throw ParseError("unknown chart '" + chart + "'");
        p.cells.emplace_back(chart == "standard" ? Chart::Standard : Chart::Inverted, jc.at("r1").get<double>(),
                             jc.at("r2").get<double>(), jc.at("theta1").get<double>(), jc.at("theta2").get<double>());
      }
      ex.parts.push_back(p);
    }
    return ex;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed disc construction document: ") + e.what());
  }
}

}  // namespace rothaff
