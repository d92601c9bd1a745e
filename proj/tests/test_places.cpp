#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "rothaff/errors.hpp"
#include "rothaff/heights.hpp"
#include "rothaff/parallel.hpp"

using namespace rothaff;

namespace {

const double kPi = std::numbers::pi;
const double kLog2 = std::numbers::ln2;

// Sample of the FS probability measure: s = r^2/(1+r^2) is uniform on [0,1).
std::complex<double> fs_sample(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double s = u(rng), th = 2 * kPi * u(rng);
  return std::polar(std::sqrt(s / (1 - s)), th);
}

struct McResult {
  double mean, stderr_;
};

template <class F>
McResult monte_carlo(F f, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    double x = f(fs_sample(rng));
    s += x;
    s2 += x * x;
  }
  double mean = s / n;
  return {mean, std::sqrt((s2 / n - mean * mean) / n)};
}

IntPoly random_primitive(std::mt19937_64& rng, int max_deg, long bound) {
  std::uniform_int_distribution<int> deg(1, max_deg);
  std::uniform_int_distribution<long> co(-bound, bound);
  for (;;) {
    std::vector<BigInt> c(deg(rng) + 1);
    for (auto& x : c) x = co(rng);
    if (c.back() == 0) continue;
    return IntPoly(c).primitive_part();
  }
}

}  // namespace

TEST_CASE("FS cell measure closed form") {
  CHECK(fs_cell_measure(Cell::full_disc(Chart::Standard)) == doctest::Approx(0.5));
  CHECK(fs_cell_measure(Cell(Chart::Standard, 0, 1, 0, kPi)) == doctest::Approx(0.25));
  double total = fs_cell_measure(Cell::full_disc(Chart::Standard)) + fs_cell_measure(Cell::full_disc(Chart::Inverted));
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(Cell(Chart::Standard, 0.5, 0.5, 0, 1), DomainError);
  CHECK_THROWS_AS(Cell(Chart::Standard, 0, 1.5, 0, 1), DomainError);
}

TEST_CASE("FS measure of a grid partition sums to one") {
  double total = 0;
  for (Chart ch : {Chart::Standard, Chart::Inverted})
    for (int i = 0; i < 7; ++i)
      for (int k = 0; k < 5; ++k)
        total += fs_cell_measure(Cell(ch, i / 7.0, (i + 1) / 7.0, 2 * kPi * k / 5, 2 * kPi * (k + 1) / 5));
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("horizontal and vertical weights") {
  CHECK(hm_weight(make_vertical(2), Polarization::FunctionFieldQt) == doctest::Approx(kLog2));
  CHECK(hm_weight(make_vertical(2), Polarization::NumberFieldQ) == doctest::Approx(kLog2));
  CHECK(hm_weight(make_horizontal(IntPoly::t()), Polarization::FunctionFieldQt) == doctest::Approx(0.0));
  CHECK(hm_weight(make_horizontal(parse_int_poly("t^2+1")), Polarization::FunctionFieldQt) ==
        doctest::Approx(kLog2).epsilon(1e-14));
  CHECK(hm_weight(HorizontalInfinity{}, Polarization::FunctionFieldQt) == 0.0);
  CHECK_THROWS_AS(hm_weight(ArchSample{}, Polarization::FunctionFieldQt), DomainError);
  CHECK_THROWS_AS(make_vertical(6), DomainError);
  CHECK_THROWS_AS(make_horizontal(parse_int_poly("t^2-1")), DomainError);
}

TEST_CASE("absolute value examples") {
  auto qt = Polarization::FunctionFieldQt;
  CHECK(abs_value(parse_rat_func("2*t"), make_vertical(2), qt) == doctest::Approx(0.5));
  CHECK(abs_value(RatFunc::t(), ArchSample{{3, 0}}, qt) == doctest::Approx(3.0));
  CHECK(abs_value(RatFunc::t(), HorizontalInfinity{}, qt) == 1.0);
  CHECK(abs_value(RatFunc(0), make_vertical(3), qt) == 0.0);
  CHECK(abs_value(RatFunc::t(), ArchSample{{0.5, 0}, Chart::Inverted}, qt) == doctest::Approx(2.0));
  CHECK_THROWS_AS(abs_value(parse_rat_func("1/t"), ArchSample{{0, 0}}, qt), DomainError);
}

TEST_CASE("quadrature examples against closed forms") {
  QuadOptions o;
  o.tol = 1e-6;
  auto all = SetS::archimedean();
  CHECK(integrate_arch([](const ArchSample&) { return 1.0; }, all, o).value == doctest::Approx(1.0).epsilon(1e-12));
  o.singular_points = {{{2, 0}, false}};
  auto r = integrate_arch([](const ArchSample& s) { return std::log(std::abs(s.point() - 2.0)); }, all, o);
  CHECK(std::abs(r.value - 0.5 * std::log(5.0)) <= 1e-6);
  CHECK(r.error_bound <= 1e-6);
  o.singular_points = {{{0, 0}, false}, SingularPoint::infinity()};
  auto z = integrate_arch(
      [](const ArchSample& s) { return s.chart == Chart::Standard ? std::log(std::abs(s.z)) : -std::log(std::abs(s.z)); },
      all, o);
  CHECK(std::abs(z.value) <= 1e-6);
}

TEST_CASE("quadrature agrees with a Monte Carlo oracle") {
  const std::complex<double> a(0.3, -1.7);
  QuadOptions o;
  o.tol = 1e-5;
  o.singular_points = {{a, false}};
  double q = integrate_arch([&](const ArchSample& s) { return std::log(std::abs(s.point() - a)); },
                            SetS::archimedean(), o)
                 .value;
  auto mc = monte_carlo([&](std::complex<double> z) { return std::log(std::abs(z - a)); }, 400'000, 21);
  CHECK(std::abs(q - mc.mean) <= 4 * mc.stderr_ + 1e-5);
  CHECK(std::abs(q - 0.5 * std::log1p(std::norm(a))) <= 1e-5);
}

TEST_CASE("quadrature is bit-identical across worker counts") {
  QuadOptions o;
  o.tol = 1e-7;
  o.singular_points = {{{0.4, 0.2}, false}};
  auto f = [](const ArchSample& s) { return std::max(0.0, -std::log(std::abs(s.point() - std::complex<double>(0.4, 0.2)))); };
  parallel::set_worker_limit(1);
  auto one = integrate_arch(f, SetS::archimedean(), o);
  parallel::set_worker_limit(4);
  auto four = integrate_arch(f, SetS::archimedean(), o);
  parallel::set_worker_limit(0);
  CHECK(one.value == four.value);
  CHECK(one.error_bound == four.error_bound);
  CHECK(one.evaluations == four.evaluations);
}

TEST_CASE("quadrature budget exhaustion reports the best estimate") {
  QuadOptions o;
  o.tol = 1e-14;
  o.budget = 2000;
  try {
    integrate_arch([](const ArchSample& s) { return std::sin(40 * s.z.real()); }, SetS::archimedean(), o);
    FAIL("expected a QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(std::isfinite(e.estimate()));
    CHECK(e.error_bound() > 0);
  }
}

TEST_CASE("naive height of t matches the one-dimensional integral") {
  // int_1^inf log u / (1+u)^2 du, computed independently of the FS code.
  boost::math::quadrature::exp_sinh<double> integrator;
  double oracle = integrator.integrate([](double u) { return std::log1p(u) / ((2 + u) * (2 + u)); });
  CHECK(oracle == doctest::Approx(kLog2).epsilon(1e-10));
  auto h = naive_height(RatFunc::t(), Polarization::FunctionFieldQt);
  CHECK(std::abs(h.value - 0.5 * oracle) <= 1e-3);
  auto mc = monte_carlo([](std::complex<double> z) { return std::max(0.0, std::log(std::abs(z))); }, 400'000, 22);
  CHECK(std::abs(h.value - mc.mean) <= 4 * mc.stderr_ + 1e-3);
}

TEST_CASE("naive height examples") {
  for (int n = 1; n <= 20; ++n)
    CHECK(std::abs(naive_height(RatFunc(n), Polarization::FunctionFieldQt).value - std::log(n)) <= 1e-6);
  CHECK(naive_height(RatFunc(0), Polarization::FunctionFieldQt).value == 0.0);
  CHECK(naive_height(parse_rat_func("3/7"), Polarization::NumberFieldQ).value == doctest::Approx(std::log(7.0)));
  CHECK(naive_height(parse_rat_func("-9/4"), Polarization::NumberFieldQ).value == doctest::Approx(std::log(9.0)));
}

TEST_CASE("height symmetry, nonnegativity and the degree relation") {
  std::mt19937_64 rng(23);
  double worst_ratio = 0;
  for (int i = 0; i < 25; ++i) {
    RatFunc x(random_primitive(rng, 4, 30), random_primitive(rng, 3, 30));
    x = x * RatFunc(make_rat(1 + static_cast<long>(rng() % 5), 1 + static_cast<long>(rng() % 5)));
    auto h = naive_height(x, Polarization::FunctionFieldQt);
    auto hinv = naive_height(x.reciprocal(), Polarization::FunctionFieldQt);
    CHECK(h.value >= -1e-3);
    CHECK(std::abs(h.value - hinv.value) <= 2e-3);
    int d = deg_m(x, Polarization::FunctionFieldQt);
    if (d >= 1) {
      CHECK(h.value > 0);
      worst_ratio = std::max(worst_ratio, d / h.value);
    }
  }
  MESSAGE("max deg/h over the corpus: " << worst_ratio);
}

TEST_CASE("product formula examples") {
  auto qt = Polarization::FunctionFieldQt;
  for (const char* s : {"2*t", "7", "(t^2+1)/(t-1)", "t", "-3/5*(t^3+2)/(4*t^2+t+1)"}) {
    CAPTURE(s);
    CHECK(std::abs(product_formula_defect(parse_rat_func(s), qt, DefectMode::ClosedForm).value) <= 1e-9);
    QuadOptions o;
    o.tol = 1e-5;
    CHECK(std::abs(product_formula_defect(parse_rat_func(s), qt, DefectMode::Quadrature, o).value) <= 1e-5);
  }
  CHECK_THROWS_AS(product_formula_defect(RatFunc(0), qt, DefectMode::ClosedForm), DomainError);
}

TEST_CASE("closed-form Mahler term matches quadrature of log|f|") {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 8; ++i) {
    IntPoly f = random_primitive(rng, 6, 20);
    RatFunc x(f);
    QuadOptions o;
    o.tol = 1e-4;
    o.singular_points = singular_points(x);
    RatFuncEvaluator ev(x);
    auto q = integrate_arch([&](const ArchSample& s) { return std::log(ev.abs_at(s.z, s.chart == Chart::Inverted)); },
                            SetS::archimedean(), o);
    CHECK(std::abs(q.value - fs_log_mahler(f)) <= 1e-4);
  }
}

TEST_CASE("degree examples") {
  CHECK(deg_m(parse_rat_func("t^2+1"), Polarization::FunctionFieldQt) == 2);
  CHECK(deg_m(parse_rat_func("7/3"), Polarization::FunctionFieldQt) == 0);
  CHECK(deg_m(parse_rat_func("(t^3-1)/(t-1)"), Polarization::FunctionFieldQt) == 2);
  CHECK(deg_m(parse_rat_func("7/3"), Polarization::NumberFieldQ) == 0);
  CHECK_THROWS_AS(deg_m(parse_rat_func("t^5"), Polarization::NumberFieldQ), DomainError);
  CHECK_THROWS_AS(deg_m(RatFunc(0), Polarization::FunctionFieldQt), DomainError);
}

TEST_CASE("rational heights and the product formula over Q are exact") {
  std::mt19937_64 rng(25);
  std::uniform_int_distribution<long> co(-1'000'000'000, 1'000'000'000);
  for (int i = 0; i < 300; ++i) {
    long a = co(rng), b = co(rng);
    if (a == 0 || b == 0) continue;
    BigRat x = make_rat(a, b);
    BigInt expect = std::max(BigInt(abs(x.get_num())), BigInt(x.get_den()));
    CHECK(height_q_exact(x) == expect);
    CHECK(product_formula_q_exact(x) == 1);
  }
}

TEST_CASE("set documents round-trip") {
  SetS s;
  s.cells = {Cell(Chart::Standard, 0.1, 0.4, 0.5, 1.5), Cell(Chart::Inverted, 0, 0.3, 0, 6)};
  s.finite_places = {make_vertical(5), make_horizontal(parse_int_poly("t^2+t+1")), HorizontalInfinity{}};
  SetS back = parse_set(serialize_set(s));
  CHECK(back.cells == s.cells);
  CHECK(back.finite_places == s.finite_places);
  CHECK(back.measure() == doctest::Approx(s.measure()));
  CHECK(parse_set("archimedean\n").all_archimedean);
  CHECK_THROWS_AS(parse_set("(standard, 0, 1, 0, 1)\n(standard, 0.5, 0.9, 0.5, 2)\n").validate(), DomainError);
}

TEST_CASE("M_K-constants integrate by measure") {
  MKConstant c;
  c.terms.push_back({Cell::full_disc(Chart::Standard), 2.0});
  c.terms.push_back({make_vertical(3), 0.5});
  CHECK(c.integral() == doctest::Approx(1.5));
  CHECK(c.support_measure() == doctest::Approx(1.5));
}
