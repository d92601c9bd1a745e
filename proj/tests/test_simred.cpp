#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "rothaff/errors.hpp"
#include "rothaff/parallel.hpp"
#include "rothaff/simred.hpp"

using namespace rothaff;

namespace {

// One cell per entry of `cells`, unit-free weights.
DiscretizedS space(const std::vector<double>& weights, const std::vector<int>& cells) {
  DiscretizedS s;
  s.weights = weights;
  s.cell_of = cells;
  s.num_cells = cells.empty() ? 0 : *std::max_element(cells.begin(), cells.end()) + 1;
  for (std::size_t v = 0; v < weights.size(); ++v) s.ids.push_back(static_cast<long>(v + 1));
  return s;
}

LambdaTable table(int q, const std::vector<double>& heights, std::size_t places) {
  LambdaTable t;
  t.q = q;
  t.heights = heights;
  t.places = places;
  for (std::size_t x = 0; x < heights.size(); ++x) t.xi_ids.push_back(static_cast<long>(x + 1));
  t.values.assign(heights.size() * q * places, 0.0);
  return t;
}

// Least observed value c with mu(lambda/h > c) <= mu(C)/2, by enumeration.
double median_oracle(const LambdaTable& t, const DiscretizedS& s, std::size_t xi, int j, int l) {
  std::vector<double> vals;
  BigRat total = 0;
  for (std::size_t v = 0; v < s.size(); ++v)
    if (s.cell_of[v] == l) {
      vals.push_back(t.at(xi, j, v) / t.heights[xi]);
      total += BigRat(s.weights[v]);
    }
  double best = INFINITY;
  for (double c : vals) {
    BigRat above = 0;
    for (std::size_t v = 0; v < s.size(); ++v)
      if (s.cell_of[v] == l && t.at(xi, j, v) / t.heights[xi] > c) above += BigRat(s.weights[v]);
    if (2 * above <= total) best = std::min(best, c);
  }
  return best;
}

// Direct pairwise verification of the approximation inequality on Xi'.
bool pairs_hold(const LambdaTable& t, const DiscretizedS& s, const ReduceResult& r, const ReduceParams& p) {
  for (auto eta : r.kept)
    for (auto zeta : r.kept) {
      if (eta == zeta) continue;
      std::vector<char> out(s.size(), 0);
      for (int v : r.excluded[eta]) out[v] = 1;
      for (int v : r.excluded[zeta]) out[v] = 1;
      double he = t.heights[eta], hz = t.heights[zeta];
      double rhs = (4 + p.c9 / he + p.c9 / hz) * p.eps10;
      for (std::size_t v = 0; v < s.size(); ++v) {
        if (out[v]) continue;
        for (int j = 0; j < t.q; ++j)
          if (std::fabs(t.at(eta, j, v) / he - t.at(zeta, j, v) / hz) > rhs + 1e-9) return false;
      }
    }
  return true;
}

double measure_of(const DiscretizedS& s, const std::vector<int>& set) {
  double mu = 0;
  for (int v : set) mu += s.weights[v];
  return mu;
}

}  // namespace

TEST_CASE("cell median examples") {
  auto s = space({1, 1, 1, 1}, {0, 0, 1, 1});
  auto t = table(1, {2.0}, 4);
  t.at(0, 0, 0) = 2;
  t.at(0, 0, 1) = 6;
  t.at(0, 0, 2) = 5;
  t.at(0, 0, 3) = 5;
  // Two equal weights with lambda/h = {1, 3}: the infimum is attained at 1.
  CHECK(cell_median(t, s, 0, 0, 0) == 1.0);
  CHECK(cell_median(t, s, 0, 0, 1) == 2.5);
  auto scaled = t;
  for (auto& x : scaled.values) x *= 4;
  CHECK(cell_median(scaled, s, 0, 0, 0) == 4.0);
  CHECK(cell_median(scaled, s, 0, 0, 1) == 10.0);
  auto hole = space({1, 1}, {0, 2});
  hole.num_cells = 3;
  CHECK_THROWS_AS(cell_median(table(1, {1.0}, 2), hole, 0, 0, 1), DomainError);
}

TEST_CASE("cell median agrees with enumeration and satisfies the median-set property") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> small(0, 4);
  for (int trial = 0; trial < 200; ++trial) {
    int places = 3 + trial % 9;
    std::vector<double> w(places);
    std::vector<int> c(places);
    for (int v = 0; v < places; ++v) {
      w[v] = trial % 3 == 0 ? 1.0 : 0.1 + u(rng);
      c[v] = v % 2;
    }
    auto s = space(w, c);
    auto t = table(1, {0.5 + u(rng)}, places);
    for (int v = 0; v < places; ++v) t.at(0, 0, v) = trial % 2 ? small(rng) : 3 * u(rng);
    for (int l = 0; l < 2; ++l) {
      double m = cell_median(t, s, 0, 0, l);
      CHECK(m == median_oracle(t, s, 0, 0, l));
      auto ms = median_set_measures(t, s, 0, 0, l, m);
      CHECK(2 * ms.below >= ms.cell);
      CHECK(2 * ms.above >= ms.cell);
    }
  }
}

TEST_CASE("constant lambda gives c/h") {
  auto s = space({0.3, 0.5, 0.2}, {0, 0, 0});
  auto t = table(1, {4.0}, 3);
  for (auto& x : t.values) x = 3;
  CHECK(cell_median(t, s, 0, 0, 0) == 0.75);
}

TEST_CASE("pigeonhole reduction of all-zero data keeps everything") {
  auto s = space({1, 1, 1, 1}, {0, 0, 1, 1});
  auto t = table(2, {1, 2, 3}, 4);
  ExcludedSets t0(3);
  t0[1] = {2};
  ReduceParams p{0.1, 2.2, 0};
  auto r = pigeonhole_reduce(t, s, t0, p);
  CHECK(r.kept == std::vector<std::size_t>{0, 1, 2});
  CHECK(r.excluded[0].empty());
  // Half of C_2 is in T0 for xi 2, so the whole cell is excluded.
  CHECK(r.excluded[1] == std::vector<int>{2, 3});
  auto pc = check_pigeonhole(t, s, r, p);
  CHECK(pc.holds);
  CHECK(pc.worst_margin <= -4 * p.eps10 + 1e-15);
}

TEST_CASE("identical normalized profiles share a bucket with zero gap") {
  auto s = space({1, 2, 1}, {0, 0, 1});
  auto t = table(1, {1, 3}, 3);
  const double prof[] = {0.1, 0.2, 0.1};
  for (int v = 0; v < 3; ++v) {
    t.at(0, 0, v) = prof[v] * 1;
    t.at(1, 0, v) = prof[v] * 3;
  }
  ReduceParams p{0.2, 0.1, 0};
  auto r = pigeonhole_reduce(t, s, ExcludedSets(2), p);
  CHECK(r.bucket[0] == r.bucket[1]);
  CHECK(r.kept.size() == 2);
  for (int v = 0; v < 3; ++v) CHECK(std::fabs(t.at(0, 0, v) / 1 - t.at(1, 0, v) / 3) < 1e-15);
}

TEST_CASE("reduction rejects violated hypotheses") {
  auto s = space({1, 1}, {0, 0});
  auto t = table(1, {1}, 2);
  t.at(0, 0, 0) = 5;  // integral 5 > h + c9
  CHECK_THROWS_AS(pigeonhole_reduce(t, s, ExcludedSets(1), ReduceParams{1, 1, 0}), DomainError);
  auto flat = table(1, {1}, 2);
  flat.at(0, 0, 0) = 0.5;  // oscillation 0.5 > eps10 (h + c9)
  CHECK_THROWS_AS(pigeonhole_reduce(flat, s, ExcludedSets(1), ReduceParams{0.1, 1, 0}), DomainError);
  // Too much T0 mass.
  CHECK_THROWS_AS(pigeonhole_reduce(flat, s, ExcludedSets{{0}}, ReduceParams{1, 0.5, 0}), DomainError);
  LambdaTable empty = table(1, {}, 2);
  CHECK_THROWS_AS(pigeonhole_reduce(empty, s, ExcludedSets{}, ReduceParams{}), DomainError);
}

TEST_CASE("synthetic instances pass exhaustive reduction and selection checks") {
  int selected = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    CAPTURE(seed);
    auto inst = make_synthetic_instance(seed, 120, 12, 30, 1 + static_cast<int>(seed % 3));
    auto r = pigeonhole_reduce(inst.table, inst.space, inst.t0, inst.params);
    REQUIRE(!r.kept.empty());
    CHECK(pairs_hold(inst.table, inst.space, r, inst.params));
    CHECK(check_pigeonhole(inst.table, inst.space, r, inst.params).holds);
    for (auto x : r.kept) {
      CHECK(measure_of(inst.space, r.excluded[x]) <= inst.params.eps11 + 1e-12);
      for (int v : inst.t0[x]) CHECK(std::binary_search(r.excluded[x].begin(), r.excluded[x].end(), v));
    }

    auto chain = best_chain(inst.table, r.kept, 2);
    SelectParams sp;
    sp.n = static_cast<int>(std::min<std::size_t>(chain.size(), 2));
    sp.eps_pp = 1e9;
    auto sel = simultaneous_select(inst.table, inst.space, r, sp);
    sp.eps_pp = selection_bound(inst.table, inst.space, sel, inst.params, sp);
    CHECK(check_selection(inst.table, inst.space, sel, sp));
    for (double l : sel.lhs) CHECK(l <= sp.eps_pp + 1e-9);
    double sum_t = 0;
    for (auto x : sel.chain) sum_t += measure_of(inst.space, r.excluded[x]);
    CHECK(sel.measure_T <= sum_t + 1e-12);
    ++selected;
  }
  CHECK(selected == 50);
}

TEST_CASE("selection with n = 1 and q = 1") {
  auto s = space({1, 1, 1}, {0, 1, 2});
  auto t = table(3, {2}, 3);
  t.at(0, 0, 0) = 0.2;
  t.at(0, 1, 0) = 0.4;
  t.at(0, 2, 0) = 0.4;  // tie: smallest j wins
  t.at(0, 2, 1) = 0.1;
  ReduceParams rp{1, 1, 0};
  auto r = pigeonhole_reduce(t, s, ExcludedSets(1), rp);
  SelectParams sp;
  sp.n = 1;
  auto sel = simultaneous_select(t, s, r, sp);
  CHECK(sel.J == std::vector<int>{1, 2, 0});

  auto t1 = table(1, {1, 2.5, 7}, 3);
  for (std::size_t x = 0; x < 3; ++x)
    for (int v = 0; v < 3; ++v) t1.at(x, 0, v) = 0.1 * t1.heights[x];
  auto r1 = pigeonhole_reduce(t1, s, ExcludedSets(3), ReduceParams{0.1, 1, 0});
  SelectParams sp1;
  sp1.n = 2;
  auto sel1 = simultaneous_select(t1, s, r1, sp1);
  CHECK(sel1.J == std::vector<int>{0, 0, 0});
  CHECK(sel1.chain == std::vector<std::size_t>{1, 2});
  CHECK(check_selection(t1, s, sel1, sp1));
}

TEST_CASE("missing chain names the maximal n") {
  auto s = space({1}, {0});
  auto t = table(1, {1, 1.5, 2.2}, 1);
  auto r = pigeonhole_reduce(t, s, ExcludedSets(3), ReduceParams{1, 1, 0});
  SelectParams sp;
  sp.n = 3;
  sp.r_min = 2;
  try {
    simultaneous_select(t, s, r, sp);
    FAIL("expected an error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("maximal achievable n = 2") != std::string::npos);
  }
}

TEST_CASE("text formats round-trip") {
  auto inst = make_synthetic_instance(7, 40, 5, 6, 2);
  auto s2 = parse_discretized(serialize_discretized(inst.space));
  CHECK(s2.ids == inst.space.ids);
  CHECK(s2.weights == inst.space.weights);
  CHECK(s2.cell_of == inst.space.cell_of);
  auto t2 = parse_lambda_table(serialize_lambda_values(inst.table, inst.space), serialize_heights(inst.table), s2);
  CHECK(t2.heights == inst.table.heights);
  CHECK(t2.values == inst.table.values);
  CHECK_THROWS_AS(parse_discretized("1 0.5 0\n"), ParseError);
  CHECK_THROWS_AS(parse_discretized("1 0.5\n"), ParseError);
}

TEST_CASE("reduction output is independent of the worker count") {
  auto inst = make_synthetic_instance(3);
  parallel::set_worker_limit(1);
  auto a = reduce_to_json(inst.table, inst.space, pigeonhole_reduce(inst.table, inst.space, inst.t0, inst.params),
                          nullptr);
  parallel::set_worker_limit(4);
  auto b = reduce_to_json(inst.table, inst.space, pigeonhole_reduce(inst.table, inst.space, inst.t0, inst.params),
                          nullptr);
  parallel::set_worker_limit(0);
  CHECK(a == b);
}

TEST_CASE("proposition checker examples") {
  DivisorSpec d;
  d.targets = {RatFunc(0)};
  auto empty = check_parts({parse_rat_func("t/3")}, {SetS{}}, d, 1, 0, 2, Polarization::FunctionFieldQt);
  CHECK(empty.lhs == 0.0);
  CHECK_FALSE(empty.holds_integral);
  CHECK(empty.holds_ratio);

  RatFunc xi = parse_rat_func("(t+1)/5");
  auto same = check_parts({xi, xi}, {SetS::archimedean()}, d, 1, 0, 2, Polarization::FunctionFieldQt);
  CHECK_FALSE(same.holds_ratio);
  auto same1 = check_parts({xi, xi}, {SetS::archimedean()}, d, 1, 0, 1, Polarization::FunctionFieldQt);
  CHECK(same1.holds_ratio);

  auto ex = build_disc_example(4);
  for (std::size_t k = 1; k < ex.parts.size(); ++k) {
    auto r = check_parts_disc(ex.parts[k]);
    CAPTURE(ex.parts[k].n);
    CHECK(r.rhs == 3.0);
    CHECK(r.lhs >= 3.0 - r.error_bound);
    CHECK(r.holds_integral);
  }
  CHECK_THROWS_AS(check_parts_disc(ex.parts[0]), DomainError);

  SetS a{false, {Cell(Chart::Standard, 0, 1, 0, 1)}, {}};
  SetS b{false, {Cell(Chart::Standard, 0.5, 1, 0.5, 2)}, {}};
  DivisorSpec d2;
  d2.targets = {RatFunc(0), RatFunc(1)};
  CHECK_THROWS_AS(check_parts({xi}, {a, b}, d2, 1, 0, 2, Polarization::FunctionFieldQt), DomainError);
}
