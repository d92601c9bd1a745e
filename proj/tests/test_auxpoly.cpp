#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <random>

#include "rothaff/auxpoly.hpp"
#include "rothaff/errors.hpp"
#include "rothaff/volume.hpp"

using namespace rothaff;

namespace {

using Wide = boost::multiprecision::cpp_bin_float_100;

Wide wide(const BigRat& x) { return Wide(x.get_num().get_str()) / Wide(x.get_den().get_str()); }

BigRat rat(long a, long b = 1) { return make_rat(a, b); }

MultiPoly poly(std::vector<int> bounds, std::initializer_list<std::pair<Exponent, long>> terms) {
  MultiPoly p(std::move(bounds));
  for (const auto& [k, c] : terms) p.add_term(k, c);
  return p;
}

// Calls fn on every k with 0 <= k_i <= d_i.
template <typename Fn>
void for_each_exponent(const std::vector<int>& d, Fn fn) {
  Exponent k(d.size(), 0);
  while (true) {
    fn(k);
    std::size_t i = 0;
    while (i < d.size() && k[i] == d[i]) k[i++] = 0;
    if (i == d.size()) return;
    ++k[i];
  }
}

BigRat weighted(const Exponent& k, const std::vector<int>& d) {
  BigRat s = 0;
  for (std::size_t i = 0; i < d.size(); ++i) s += rat(k[i], d[i]);
  return s;
}

// P(x) = Q(x - xi) where Q has random terms of weighted degree >= floor.
// The index of P at xi is the least weighted degree among Q's terms.
std::pair<MultiPoly, BigRat> poly_with_index(std::mt19937_64& rng, const std::vector<int>& d,
                                             const std::vector<BigRat>& xi, const BigRat& floor) {
  std::uniform_int_distribution<int> coin(0, 3), co(-5, 5);
  MultiPoly q(d);
  BigRat least = -1;
  for_each_exponent(d, [&](const Exponent& k) {
    BigRat w = weighted(k, d);
    if (w < floor || coin(rng) != 0) return;
    int c = co(rng);
    if (c == 0) return;
    q.add_term(k, c);
    if (least < 0 || w < least) least = w;
  });
  if (q.is_zero()) {
    q.add_term(d, 1);
    least = weighted(d, d);
  }
  std::vector<BigRat> minus;
  for (const auto& x : xi) minus.push_back(-x);
  return {q.shifted(minus), least};
}

}  // namespace

TEST_CASE("volume examples") {
  CHECK(vol_n(2, 1) == rat(1, 2));
  CHECK(vol_n(2, rat(1, 2)) == rat(1, 8));
  for (int n = 1; n <= 9; ++n) CHECK(vol_n(n, rat(n, 2)) == rat(1, 2));
  CHECK(vol_n(3, -1) == 0);
  CHECK(vol_n(3, 7) == 1);
  CHECK(vol_n(1, rat(2, 7)) == rat(2, 7));
  CHECK_THROWS_AS(vol_n(0, 1), DomainError);
}

TEST_CASE("volume is centrally symmetric") {
  std::mt19937_64 rng(41);
  for (int n = 1; n <= 8; ++n)
    for (int i = 0; i < 15; ++i) {
      BigRat tau = rat(std::uniform_int_distribution<long>(0, 1000L * n)(rng), 1000);
      CHECK(vol_n(n, tau) + vol_n(n, n - tau) == 1);
    }
}

TEST_CASE("volume agrees with a Monte Carlo oracle") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0, 1);
  const int samples = 1'000'000;
  for (int n = 1; n <= 6; ++n) {
    std::vector<double> sums(samples);
    for (auto& s : sums) {
      s = 0;
      for (int i = 0; i < n; ++i) s += u(rng);
    }
    for (int i = 0; i < 20; ++i) {
      BigRat tau = rat(std::uniform_int_distribution<long>(0, 10'000L * n)(rng), 10'000);
      double t = tau.get_d();
      long hits = std::count_if(sums.begin(), sums.end(), [t](double s) { return s < t; });
      double p = static_cast<double>(hits) / samples;
      double se = std::sqrt(std::max(p * (1 - p), 1.0 / samples) / samples);
      CAPTURE(n);
      CAPTURE(t);
      CHECK(std::fabs(vol_n(n, tau).get_d() - p) <= 4 * se);
    }
  }
}

TEST_CASE("volume tail bound holds on the eta grid") {
  for (int n = 1; n <= 10; ++n)
    for (int k = 0; k <= 10; ++k) {
      BigRat eta = rat(k, 20);
      BigRat v = vol_n(n, (rat(1, 2) - eta) * n);
      Wide bound = boost::multiprecision::exp(-6 * n * wide(eta) * wide(eta));
      CAPTURE(n);
      CAPTURE(k);
      CHECK(wide(v) <= bound);
      // Away from equality by far more than the working precision.
      CHECK(bound - wide(v) > Wide("1e-80"));
    }
}

TEST_CASE("condition counts") {
  CHECK(count_j(IndexWeights{{2, 2}}, 1) == 3);
  CHECK(count_j(IndexWeights{{2, 2}}, 0) == 0);
  CHECK(count_j(IndexWeights{{2, 3, 1}}, 4) == 3 * 4 * 2);
  std::mt19937_64 rng(43);
  for (int i = 0; i < 100; ++i) {
    int n = 1 + i % 3;
    std::vector<int> d(n);
    for (auto& x : d) x = std::uniform_int_distribution<int>(1, 6)(rng);
    BigRat tau = rat(std::uniform_int_distribution<long>(0, 60L * n)(rng), 60);
    long brute = 0;
    for_each_exponent(d, [&](const Exponent& k) { brute += weighted(k, d) < tau; });
    CHECK(count_j(IndexWeights{d}, tau) == brute);
  }
}

TEST_CASE("condition density approaches the volume") {
  for (int n : {2, 3}) {
    BigRat tau = rat(n, 3);
    for (int di : {4, 8, 16}) {
      IndexWeights d{std::vector<int>(n, di)};
      BigInt total = 1;
      for (int x : d.d) total *= x + 1;
      double gap = std::fabs(BigRat(BigRat(count_j(d, tau), total) - vol_n(n, tau)).get_d());
      MESSAGE("n=" << n << " d_i=" << di << " |J/prod(d_i+1) - Vol| = " << gap << " vs sum 1/d_i = "
                   << static_cast<double>(n) / di);
    }
  }
}

TEST_CASE("parameter choice") {
  CHECK(static_cast<double>(params_lhs(2, 13)) == doctest::Approx(0.17119).epsilon(1e-4));
  CHECK(static_cast<double>(params_lhs(2, 14)) == doctest::Approx(0.16227).epsilon(1e-4));
  for (auto [q, eps] : std::vector<std::pair<int, double>>{{2, 1.0}, {3, 1.0}, {2, 2.0}, {5, 3.0}}) {
    auto p = choose_params(q, eps);
    CAPTURE(q);
    CAPTURE(eps);
    if (q == 2 && eps == 1.0) CHECK(p.n0 == 14);
    CHECK(p.sigma == 1);
    CHECK(p.volume_ok);
    CHECK(p.gap_ok);
    BigRat v = vol_n(p.n0, p.tau);
    CHECK(q * v < 1);
    CHECK(1 < q * v + vol_n(p.n0, 1));
    CHECK((2 + rat_from_double(eps)) * (p.tau - 1) > p.n0);
    CHECK(p.residual <= 1e-12);
    for (int n = 2; n < p.n0; ++n) CHECK(params_lhs(q, n) >= 0.5L - 1.0L / (2 + eps));
  }
  CHECK_THROWS_AS(choose_params(1, 1), DomainError);
  CHECK_THROWS_AS(choose_params(2, 0), DomainError);
}

TEST_CASE("divided derivative examples") {
  auto p = poly({2, 1}, {{{2, 1}, 1}});
  CHECK(divided_derivative(p, {1, 1}) == poly({2, 1}, {{{1, 0}, 2}}));
  CHECK(divided_derivative(p, {0, 0}) == p);
  CHECK(divided_derivative(p, {3, 0}).is_zero());
  auto m = poly({9}, {{{9}, 1}});
  for (int k = 0; k <= 9; ++k) CHECK(divided_derivative(m, {k}).coeff({9 - k}) == binomial(9, k));
}

TEST_CASE("index examples") {
  // (x - 1)^2 (y - 2) expanded.
  auto p = poly({2, 1}, {{{2, 1}, 1}, {{2, 0}, -2}, {{1, 1}, -2}, {{1, 0}, 4}, {{0, 1}, 1}, {{0, 0}, -2}});
  CHECK(index(p, {1, 2}, IndexWeights{{2, 1}}) == 2);
  CHECK(index(p, {0, 0}, IndexWeights{{2, 1}}) == 0);
  CHECK(index(p, {1, 0}, IndexWeights{{2, 1}}) == 1);
  CHECK_THROWS_AS(index(MultiPoly({2, 1}), {1, 2}, IndexWeights{{2, 1}}), DomainError);
}

TEST_CASE("index and vanishing derivatives agree") {
  std::mt19937_64 rng(44);
  std::uniform_int_distribution<long> small(-3, 3);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<int> d = {1 + trial % 4, 1 + trial % 3};
    IndexWeights w{d};
    std::vector<BigRat> xi = {rat(small(rng), 2), rat(small(rng), 3)};
    BigRat floor = rat(trial % 5, 2);
    auto [p, expected] = poly_with_index(rng, d, xi, floor);
    BigRat idx = index(p, xi, w);
    CHECK(idx == expected);
    for (int t = 0; t <= 8; ++t) {
      BigRat tau = rat(t, 4);
      bool vanish = true;
      for_each_exponent(d, [&](const Exponent& k) {
        if (weighted(k, d) < tau && divided_derivative(p, k).evaluate(xi) != 0) vanish = false;
      });
      CHECK((idx >= tau) == vanish);
    }
    for_each_exponent(d, [&](const Exponent& k) {
      auto dk = divided_derivative(p, k);
      if (!dk.is_zero()) CHECK(index(dk, xi, w) >= idx - weighted(k, d));
    });
  }
}

TEST_CASE("polynomial text form round-trips") {
  std::mt19937_64 rng(45);
  auto [p, _] = poly_with_index(rng, {3, 2, 2}, {rat(1, 2), rat(-1), rat(2, 3)}, 1);
  CHECK(parse_multipoly(serialize_multipoly(p)) == p);
  auto q = parse_multipoly("# no bounds line\n1 0 : 3\n0 2 : -1/2\n");
  CHECK(q.bounds() == std::vector<int>{1, 2});
  CHECK(q.coeff({1, 0}) == 3);
  CHECK(q.coeff({0, 2}) == rat(-1, 2));
  CHECK_THROWS_AS(parse_multipoly("bounds 1 1\n2 0 : 1\n"), DomainError);
}

TEST_CASE("Siegel kernel examples") {
  auto a = siegel_kernel(IntMatrix{{1, 1}}, 2);
  CHECK(((a.v == std::vector<BigInt>{1, -1}) || (a.v == std::vector<BigInt>{-1, 1})));
  auto b = siegel_kernel(IntMatrix{{1, 0, 1}, {0, 1, 1}}, 3);
  CHECK(((b.v == std::vector<BigInt>{1, 1, -1}) || (b.v == std::vector<BigInt>{-1, -1, 1})));
  CHECK(b.log_height == 0.0);
}

TEST_CASE("Siegel kernel outputs are primitive solutions") {
  std::mt19937_64 rng(46);
  std::uniform_int_distribution<long> co(-20, 20);
  for (int trial = 0; trial < 80; ++trial) {
    std::size_t cols = 2 + trial % 7, rows = std::uniform_int_distribution<std::size_t>(1, cols - 1)(rng);
    IntMatrix a(rows, std::vector<BigInt>(cols));
    for (auto& row : a)
      for (auto& x : row) x = co(rng);
    auto k = siegel_kernel(a, cols);
    BigInt g = 0, top = 0;
    for (const auto& x : k.v) {
      g = gcd(g, x);
      top = std::max(top, BigInt(abs(x)));
    }
    CHECK(g == 1);
    CHECK(k.log_height == doctest::Approx(std::log(top.get_d())));
    for (const auto& row : a) {
      BigInt dot = 0;
      for (std::size_t j = 0; j < cols; ++j) dot += row[j] * k.v[j];
      CHECK(dot == 0);
    }
  }
}

TEST_CASE("auxiliary polynomial examples") {
  auto one = build_aux_poly({rat(0)}, 2, rat(1, 3), IndexWeights{{3, 3}});
  CHECK(!one.p.is_zero());
  CHECK(index(one.p, {0, 0}, IndexWeights{{3, 3}}) >= rat(1, 3));

  IndexWeights d{{8, 8}};
  auto two = build_aux_poly({rat(0), rat(1)}, 2, rat(1, 2), d);
  CHECK(two.unknowns == 81);
  CHECK(two.equations == 2 * count_j(d, rat(1, 2)));
  CHECK(index(two.p, {0, 0}, d) >= rat(1, 2));
  CHECK(index(two.p, {1, 1}, d) >= rat(1, 2));
  CHECK(two.entry_log_max <= two.entry_log_bound + 1e-12);
  CHECK(two.p.degree_in(0) <= 8);
  CHECK(two.p.degree_in(1) <= 8);

  try {
    build_aux_poly({rat(0), rat(1)}, 2, 2, IndexWeights{{1, 1}});
    FAIL("expected an infeasibility error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("infeasible dimension count") != std::string::npos);
  }
}

TEST_CASE("Dyson checker examples") {
  auto p = poly({1, 1}, {{{1, 1}, 1}, {{1, 0}, -1}, {{0, 1}, -1}, {{0, 0}, 1}});
  auto r = dyson_check(p, {{1, 1}, {0, 0}}, IndexWeights{{1, 1}});
  CHECK(r.t == std::vector<BigRat>{2, 0});
  CHECK(r.lhs == 1);
  CHECK(r.rhs == 1);
  CHECK(r.holds);
  auto single = dyson_check(p, {{rat(1, 2), rat(3)}}, IndexWeights{{1, 1}});
  CHECK(single.rhs == 1);
  CHECK(single.holds);
  CHECK_THROWS_AS(dyson_check(p, {{1, 1}, {1, 0}}, IndexWeights{{1, 1}}), DomainError);
  CHECK_THROWS_AS(dyson_check(p, {{1, 1}}, IndexWeights{{1, 2}}), DomainError);
  CHECK_THROWS_AS(dyson_check(poly({2, 1}, {{{2, 0}, 1}}), {{1, 1}}, IndexWeights{{1, 1}}), DomainError);
}

TEST_CASE("constructed polynomials satisfy the Dyson inequality") {
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<long> co(-6, 6);
  int checked = 0;
  for (int trial = 0; trial < 12; ++trial) {
    int q = 2 + trial % 2;
    std::vector<BigRat> alphas;
    while (static_cast<int>(alphas.size()) < q) {
      BigRat a = rat(co(rng), 1 + trial % 3);
      if (std::find(alphas.begin(), alphas.end(), a) == alphas.end()) alphas.push_back(a);
    }
    IndexWeights d{{6 - trial % 2, 4}};
    BigRat tau = rat(1 + trial % 3, 4);
    auto aux = build_aux_poly(alphas, 2, tau, d);
    std::vector<std::vector<BigRat>> zeta;
    for (const auto& a : alphas) zeta.push_back({a, a});
    zeta.push_back({rat(101, 7), rat(-103, 11)});
    auto r = dyson_check(aux.p, zeta, d);
    for (std::size_t j = 0; j < alphas.size(); ++j) CHECK(r.t[j] >= tau);
    CHECK(r.holds);
    CHECK(r.lhs <= r.rhs);
    ++checked;
  }
  CHECK(checked == 12);
}
