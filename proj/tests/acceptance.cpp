// Acceptance report: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "cli.hpp"
#include "rothaff/auxpoly.hpp"
#include "rothaff/disc_example.hpp"
#include "rothaff/heights.hpp"
#include "rothaff/parallel.hpp"
#include "rothaff/simred.hpp"
#include "rothaff/volume.hpp"

using namespace rothaff;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

// Runs a criterion; an escaping exception counts as a failure.
void criterion(int id, const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    auto [ok, detail] = body();
    report(id, name, ok, detail);
  } catch (const std::exception& e) {
    report(id, name, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

IntPoly random_poly(std::mt19937_64& rng, int max_deg, long bound, bool nonconstant) {
  std::uniform_int_distribution<int> deg(nonconstant ? 1 : 0, max_deg);
  std::uniform_int_distribution<long> co(-bound, bound);
  std::vector<BigInt> c(deg(rng) + 1);
  for (auto& x : c) x = co(rng);
  while (c.back() == 0) c.back() = co(rng);
  return IntPoly(c);
}

RatFunc random_ratfunc(std::mt19937_64& rng, int max_deg, long bound) {
  IntPoly num = random_poly(rng, max_deg, bound, false), den = random_poly(rng, max_deg, bound, false);
  if (num.is_zero()) num = IntPoly{1};
  return RatFunc(num, den);
}

IntPoly random_primitive(std::mt19937_64& rng, int max_deg, long bound) {
  IntPoly f = random_poly(rng, max_deg, bound, true);
  return f.primitive_part();
}

std::vector<std::string> run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {std::to_string(code), out.str()};
}

}  // namespace

int main() {
  const auto kQt = Polarization::FunctionFieldQt;

  criterion(1, "product formula (closed form)", [&] {
    auto t0 = Clock::now();
    std::mt19937_64 rng(1001);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      RatFunc xi = random_ratfunc(rng, 6, 1000);
      worst = std::max(worst, std::fabs(product_formula_defect(xi, kQt, DefectMode::ClosedForm).value));
    }
    double secs = seconds_since(t0);
    return std::pair{worst <= 1e-9 && secs <= 10,
                     fmt("max |defect| = %.3e (limit 1e-9) over 100 xi, %.2f s (limit 10 s)", worst, secs)};
  });

  criterion(2, "quadrature vs closed form", [&] {
    std::mt19937_64 rng(1002);
    double worst = 0, slowest = 0;
    for (int i = 0; i < 20; ++i) {
      IntPoly f = random_primitive(rng, 6, 1000);
      RatFunc x(f);
      QuadOptions o;
      o.tol = 1e-3;
      o.singular_points = singular_points(x);
      RatFuncEvaluator ev(x);
      auto t0 = Clock::now();
      auto q = integrate_arch(
          [&](const ArchSample& s) { return std::log(ev.abs_at(s.z, s.chart == Chart::Inverted)); },
          SetS::archimedean(), o);
      slowest = std::max(slowest, seconds_since(t0));
      worst = std::max(worst, std::fabs(q.value - fs_log_mahler(f)));
    }
    return std::pair{worst <= 1e-3 && slowest <= 2,
                     fmt("max error = %.3e (limit 1e-3) over 20 f, slowest %.3f s (limit 2 s)", worst, slowest)};
  });

  criterion(3, "height values", [&] {
    // Oracle: int_1^inf log u / (1 + u)^2 du = log 2, so h(t) = (1/2) of it.
    boost::math::quadrature::exp_sinh<double> es;
    double oracle = 0.5 * es.integrate([](double x) { return std::log1p(x) / ((2 + x) * (2 + x)); });
    double ht = naive_height(RatFunc::t(), kQt).value;
    double dt = std::fabs(ht - oracle);
    double dn = 0;
    for (int n = 1; n <= 20; ++n)
      dn = std::max(dn, std::fabs(naive_height(RatFunc(n), kQt).value - std::log(static_cast<double>(n))));
    std::mt19937_64 rng(1003);
    double sym = 0;
    for (int i = 0; i < 40; ++i) {
      RatFunc xi = random_ratfunc(rng, 4, 50);
      sym = std::max(sym, std::fabs(naive_height(xi, kQt).value - naive_height(RatFunc(1) / xi, kQt).value));
    }
    return std::pair{dt <= 1e-3 && dn <= 1e-6 && sym <= 2e-3,
                     fmt("|h(t) - log2/2| = %.2e (1e-3), max |h(n) - log n| = %.2e (1e-6), "
                         "max |h(xi) - h(1/xi)| = %.2e (2e-3)",
                         dt, dn, sym)};
  });

  criterion(4, "d = 0 specialization", [&] {
    std::mt19937_64 rng(1004);
    std::uniform_int_distribution<long> co(-1'000'000'000'000L, 1'000'000'000'000L);
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
      long a = co(rng), b = co(rng);
      if (a == 0) a = 1;
      if (b == 0) b = 1;
      BigRat x = make_rat(a, b);
      BigInt expect = std::max(BigInt(abs(x.get_num())), BigInt(x.get_den()));
      if (height_q_exact(x) != expect || product_formula_q_exact(x) != 1) ++bad;
    }
    return std::pair{bad == 0, fmt("%d of 1000 rationals deviate (exact comparison)", bad)};
  });

  criterion(5, "volumes", [&] {
    bool examples = vol_n(2, 1) == make_rat(1, 2) && vol_n(2, make_rat(1, 2)) == make_rat(1, 8);
    bool symmetric = true;
    std::mt19937_64 rng(1005);
    for (int n = 1; n <= 8; ++n)
      for (int i = 0; i < 20; ++i) {
        BigRat tau = make_rat(std::uniform_int_distribution<long>(0, 997L * n)(rng), 997);
        symmetric = symmetric && vol_n(n, tau) + vol_n(n, n - tau) == 1;
      }
    std::uniform_real_distribution<double> u(0, 1);
    double worst_sigma = 0;
    const int samples = 1'000'000;
    for (int n = 1; n <= 6; ++n) {
      std::vector<double> sums(samples);
      for (auto& s : sums) {
        s = 0;
        for (int i = 0; i < n; ++i) s += u(rng);
      }
      for (int i = 0; i < 20; ++i) {
        BigRat tau = make_rat(std::uniform_int_distribution<long>(0, 10'000L * n)(rng), 10'000);
        double t = tau.get_d();
        double p = static_cast<double>(std::count_if(sums.begin(), sums.end(), [t](double s) { return s < t; })) /
                   samples;
        double se = std::sqrt(std::max(p * (1 - p), 1.0 / samples) / samples);
        worst_sigma = std::max(worst_sigma, std::fabs(vol_n(n, tau).get_d() - p) / se);
      }
    }
    using Wide = boost::multiprecision::cpp_bin_float_100;
    bool bound = true;
    for (int n = 1; n <= 10; ++n)
      for (int k = 0; k <= 10; ++k) {
        BigRat eta = make_rat(k, 20);
        BigRat v = vol_n(n, (make_rat(1, 2) - eta) * n);
        Wide wv = Wide(v.get_num().get_str()) / Wide(v.get_den().get_str());
        Wide we = Wide(k) / 20;
        bound = bound && wv <= boost::multiprecision::exp(-6 * n * we * we);
      }
    return std::pair{examples && symmetric && worst_sigma <= 4 && bound,
                     fmt("examples %s, symmetry %s, Monte Carlo worst %.2f sigma (limit 4), tail bound %s",
                         examples ? "exact" : "WRONG", symmetric ? "exact" : "BROKEN", worst_sigma,
                         bound ? "holds on the whole grid" : "VIOLATED")};
  });

  criterion(6, "parameter choice for q = 2, eps' = 1", [&] {
    auto t0 = Clock::now();
    auto p = choose_params(2, 1.0);
    double secs = seconds_since(t0);
    BigRat v = vol_n(p.n0, p.tau);
    bool vol = 2 * v < 1 && 1 < 2 * v + vol_n(p.n0, 1);
    bool gap = 3 * (p.tau - 1) > p.n0;
    bool ok = p.n0 == 14 && p.sigma == 1 && vol && gap && secs <= 1;
    return std::pair{ok, fmt("n0 = %d (expect 14), tau = %.12f, sigma = %d, volume condition %s, gap condition %s, "
                             "%.3f s (limit 1 s)",
                             p.n0, p.tau.get_d(), p.sigma, vol ? "exact" : "FAILS", gap ? "exact" : "FAILS", secs)};
  });

  criterion(7, "auxiliary polynomial", [&] {
    auto t0 = Clock::now();
    IndexWeights d{{8, 8}};
    auto aux = build_aux_poly({0, 1}, 2, make_rat(1, 2), d);
    BigRat i0 = index(aux.p, {0, 0}, d), i1 = index(aux.p, {1, 1}, d);
    auto dy = dyson_check(aux.p, {{0, 0}, {1, 1}}, d);
    double secs = seconds_since(t0);
    bool ok = !aux.p.is_zero() && i0 >= make_rat(1, 2) && i1 >= make_rat(1, 2) && dy.holds && secs <= 5;
    return std::pair{ok, fmt("%zu terms, index %s at (0,0) and %s at (1,1) (need >= 1/2), Dyson %s <= %s, "
                             "%.3f s (limit 5 s)",
                             aux.p.terms().size(), to_string(i0).c_str(), to_string(i1).c_str(),
                             to_string(dy.lhs).c_str(), to_string(dy.rhs).c_str(), secs)};
  });

  criterion(8, "reducers on 50 synthetic instances", [&] {
    auto t0 = Clock::now();
    int pair_ok = 0, select_ok = 0;
    std::int64_t checks = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      auto inst = make_synthetic_instance(seed, 200, 20, 40, 1 + static_cast<int>(seed % 3));
      auto r = pigeonhole_reduce(inst.table, inst.space, inst.t0, inst.params);
      auto pc = check_pigeonhole(inst.table, inst.space, r, inst.params);
      checks += pc.checks;
      pair_ok += pc.holds;
      SelectParams sp;
      sp.n = static_cast<int>(std::min<std::size_t>(best_chain(inst.table, r.kept, sp.r_min).size(), 3));
      sp.eps_pp = INFINITY;
      auto sel = simultaneous_select(inst.table, inst.space, r, sp);
      sp.eps_pp = selection_bound(inst.table, inst.space, sel, inst.params, sp);
      select_ok += check_selection(inst.table, inst.space, sel, sp);
    }
    double secs = seconds_since(t0);
    return std::pair{pair_ok == 50 && select_ok == 50 && secs <= 30,
                     fmt("pairwise inequality %d/50 (%lld comparisons), selection %d/50, %.2f s (limit 30 s)", pair_ok,
                         static_cast<long long>(checks), select_ok, secs)};
  });

  criterion(9, "disc construction", [&] {
    auto ex = build_disc_example(10, 3, 1e-3);
    double worst = INFINITY;
    for (const auto& p : ex.parts) worst = std::min(worst, p.integral - 3 * p.height);
    double lhs_min = INFINITY;
    for (std::size_t k = 1; k < ex.parts.size(); ++k) {
      auto r = check_parts_disc(ex.parts[k]);
      lhs_min = std::min(lhs_min, r.holds_integral ? r.lhs : -INFINITY);
    }
    return std::pair{ex.all_hold() && lhs_min >= 3,
                     fmt("n = 1..10 all hold: %s, min (integral - 3 h(n)) = %.6f (tol 1e-3), "
                         "min checker lhs over N = 2..10 = %.6f (need >= 3)",
                         ex.all_hold() ? "yes" : "no", worst, lhs_min)};
  });

  criterion(10, "determinism across worker counts", [&] {
    std::size_t many = std::max<std::size_t>(4, std::thread::hardware_concurrency());
    std::vector<std::vector<std::string>> cmds = {
        {"reduce-sim", "--seed", "11", "--json"},
        {"roth-scan", "--alpha", "0", "--alpha", "1", "--max-coeff", "2", "--max-deg", "1"},
        {"example412", "--nmax", "6", "--json"},
        {"height", "--xi", "(t^3-2)/(5*t+1)", "--xi", "t^2+t+1", "--csv"},
        {"auxpoly", "--alpha", "0,1", "--n", "2", "--d", "8,8", "--tau", "1/2", "--json"},
    };
    int same = 0;
    for (const auto& c : cmds) {
      parallel::set_worker_limit(1);
      auto a = run_cli(c);
      parallel::set_worker_limit(many);
      auto b = run_cli(c);
      same += a[0] == "0" && a == b;
    }
    parallel::set_worker_limit(0);
    return std::pair{same == static_cast<int>(cmds.size()),
                     fmt("%d/%zu artifacts byte-identical between 1 and %zu workers", same, cmds.size(), many)};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
