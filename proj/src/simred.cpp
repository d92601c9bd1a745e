#include "rothaff/simred.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rothaff/errors.hpp"
#include "rothaff/parallel.hpp"
#include "rothaff/text.hpp"

namespace rothaff {

namespace {

constexpr double kSlack = 1e-9;

std::vector<std::string> content_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

std::vector<std::string> fields(const std::string& line, std::size_t expected) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string f;
  while (is >> f) out.push_back(f);
  if (out.size() != expected)
    throw ParseError("expected " + std::to_string(expected) + " fields in line '" + line + "'");
  return out;
}

long parse_long(const std::string& s) {
  try {
    std::size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw ParseError("bad integer '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("bad integer '" + s + "'");
  }
}

BigRat exact(double x) { return rat_from_double(x); }

BigRat exact_measure(const DiscretizedS& s, const std::vector<int>& idx) {
  BigRat m = 0;
  for (int v : idx) m += exact(s.weights[v]);
  return m;
}

std::vector<char> as_mask(const std::vector<int>& idx, std::size_t n) {
  std::vector<char> mask(n, 0);
  for (int v : idx) mask[v] = 1;
  return mask;
}

double lambda_max(const LambdaTable& t, std::size_t xi, std::size_t v) {
  double m = 0;
  for (int j = 0; j < t.q; ++j) m = std::max(m, t.at(xi, j, v));
  return m;
}

}  // namespace

double DiscretizedS::measure() const {
  double m = 0;
  for (double w : weights) m += w;
  return m;
}

double DiscretizedS::cell_measure(int l) const {
  double m = 0;
  for (std::size_t v = 0; v < size(); ++v)
    if (cell_of[v] == l) m += weights[v];
  return m;
}

std::vector<std::vector<int>> DiscretizedS::cell_members() const {
  std::vector<std::vector<int>> out(num_cells);
  for (std::size_t v = 0; v < size(); ++v) out[cell_of[v]].push_back(static_cast<int>(v));
  return out;
}

int DiscretizedS::index_of(long id) const {
  auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw DomainError("unknown place id " + std::to_string(id));
  return static_cast<int>(it - ids.begin());
}

void DiscretizedS::validate() const {
  if (ids.size() != weights.size() || ids.size() != cell_of.size())
    throw DomainError("inconsistent place arrays");
  if (weights.empty()) throw DomainError("no places");
  std::set<long> seen;
  for (std::size_t v = 0; v < size(); ++v) {
    if (!(weights[v] > 0) || !std::isfinite(weights[v])) throw DomainError("place weights must be positive");
    if (cell_of[v] < 0 || cell_of[v] >= num_cells) throw DomainError("place assigned to a nonexistent cell");
    if (!seen.insert(ids[v]).second) throw DomainError("duplicate place id " + std::to_string(ids[v]));
  }
}

void LambdaTable::validate() const {
  if (q < 1) throw DomainError("q must be at least 1");
  if (heights.empty()) throw DomainError("the set Xi is empty");
  if (values.size() != heights.size() * q * places) throw DomainError("lambda table has the wrong shape");
  for (double h : heights)
    if (!(h > 0) || !std::isfinite(h)) throw DomainError("heights must be positive");
  for (double x : values)
    if (!(x >= 0) || !std::isfinite(x)) throw DomainError("lambda values must be finite and nonnegative");
}

DiscretizedS parse_discretized(const std::string& text) {
  DiscretizedS s;
  for (const auto& line : content_lines(text)) {
    auto f = fields(line, 3);
    s.ids.push_back(parse_long(f[0]));
    s.weights.push_back(parse_double(f[1]));
    long cell = parse_long(f[2]);
    if (cell < 1) throw ParseError("cell indices start at 1: '" + line + "'");
    s.cell_of.push_back(static_cast<int>(cell - 1));
    s.num_cells = std::max(s.num_cells, static_cast<int>(cell));
  }
  s.validate();
  return s;
}

std::string serialize_discretized(const DiscretizedS& s) {
  std::ostringstream os;
  os << "# place_id weight cell\n";
  for (std::size_t v = 0; v < s.size(); ++v)
    os << s.ids[v] << ' ' << format_shortest(s.weights[v]) << ' ' << s.cell_of[v] + 1 << '\n';
  return os.str();
}

LambdaTable parse_lambda_table(const std::string& values, const std::string& heights, const DiscretizedS& s) {
  LambdaTable t;
  std::map<long, double> h;
  for (const auto& line : content_lines(heights)) {
    auto f = fields(line, 2);
    if (!h.emplace(parse_long(f[0]), parse_double(f[1])).second) throw ParseError("duplicate xi id in heights");
  }
  struct Entry {
    long xi;
    long j;
    int v;
    double value;
  };
  std::vector<Entry> entries;
  long q = 0;
  for (const auto& line : content_lines(values)) {
    auto f = fields(line, 4);
    Entry e{parse_long(f[0]), parse_long(f[1]), s.index_of(parse_long(f[2])), parse_double(f[3])};
    if (e.j < 1) throw ParseError("j starts at 1: '" + line + "'");
    if (!h.count(e.xi)) throw ParseError("xi id " + std::to_string(e.xi) + " has no height");
    q = std::max(q, e.j);
    entries.push_back(e);
  }
  t.q = static_cast<int>(std::max(q, 1L));
  t.places = s.size();
  std::map<long, std::size_t> index;
  for (const auto& [id, height] : h) {
    index[id] = t.xi_ids.size();
    t.xi_ids.push_back(id);
    t.heights.push_back(height);
  }
  t.values.assign(t.heights.size() * t.q * t.places, 0.0);
  for (const auto& e : entries) t.at(index[e.xi], static_cast<int>(e.j - 1), e.v) = e.value;
  t.validate();
  return t;
}

std::string serialize_lambda_values(const LambdaTable& t, const DiscretizedS& s) {
  std::ostringstream os;
  os << "# xi_id j place_id value\n";
  for (std::size_t x = 0; x < t.num_xi(); ++x)
    for (int j = 0; j < t.q; ++j)
      for (std::size_t v = 0; v < t.places; ++v)
        os << t.xi_ids[x] << ' ' << j + 1 << ' ' << s.ids[v] << ' ' << format_shortest(t.at(x, j, v)) << '\n';
  return os.str();
}

std::string serialize_heights(const LambdaTable& t) {
  std::ostringstream os;
  os << "# xi_id height\n";
  for (std::size_t x = 0; x < t.num_xi(); ++x) os << t.xi_ids[x] << ' ' << format_shortest(t.heights[x]) << '\n';
  return os.str();
}

double cell_median(const LambdaTable& t, const DiscretizedS& s, std::size_t xi, int j, int l) {
  std::vector<std::pair<double, BigRat>> pts;
  BigRat total = 0;
  for (std::size_t v = 0; v < s.size(); ++v)
    if (s.cell_of[v] == l) {
      pts.emplace_back(t.at(xi, j, v) / t.heights[xi], exact(s.weights[v]));
      total += pts.back().second;
    }
  if (pts.empty()) throw DomainError("cell " + std::to_string(l + 1) + " is empty");
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  // Distinct values x_0 < ... < x_{K-1} with weights; mu(x >= t) is W_{>=k}
  // on (x_{k-1}, x_k]. The infimum is x_{k-1} for the least k with
  // W_{>=k} <= total / 2.
  std::vector<double> xs;
  std::vector<BigRat> ws;
  for (const auto& [x, w] : pts) {
    if (xs.empty() || xs.back() != x) {
      xs.push_back(x);
      ws.push_back(0);
    }
    ws.back() += w;
  }
  BigRat half = total / 2;
  BigRat tail = total;  // W_{>=k}
  for (std::size_t k = 1; k < xs.size(); ++k) {
    tail -= ws[k - 1];
    if (tail <= half) return xs[k - 1];
  }
  return xs.back();
}

MedianSets median_set_measures(const LambdaTable& t, const DiscretizedS& s, std::size_t xi, int j, int l,
                               double m) {
  MedianSets out{0, 0, 0};
  for (std::size_t v = 0; v < s.size(); ++v) {
    if (s.cell_of[v] != l) continue;
    BigRat w = exact(s.weights[v]);
    double x = t.at(xi, j, v) / t.heights[xi];
    out.cell += w;
    if (x <= m) out.below += w;
    if (x >= m) out.above += w;
  }
  return out;
}

void check_reduce_hypotheses(const LambdaTable& t, const DiscretizedS& s, const ExcludedSets& t0,
                             const ReduceParams& p) {
  s.validate();
  t.validate();
  if (t.places != s.size()) throw DomainError("lambda table and place space disagree");
  if (t0.size() != t.num_xi()) throw DomainError("T0 must list one set per xi");
  if (!(p.eps10 > 0) || !(p.eps11 > 0) || !(p.c9 >= 0)) throw DomainError("need eps10 > 0, eps11 > 0, c9 >= 0");
  auto members = s.cell_members();
  for (std::size_t x = 0; x < t.num_xi(); ++x) {
    for (int v : t0[x])
      if (v < 0 || static_cast<std::size_t>(v) >= s.size()) throw DomainError("T0 names an unknown place");
    double mu_t0 = 0;
    for (int v : std::set<int>(t0[x].begin(), t0[x].end())) mu_t0 += s.weights[v];
    if (mu_t0 > p.eps11 / 2 * (1 + kSlack))
      throw DomainError("T0 too large: mu(T0) > eps11/2 for xi " + std::to_string(t.xi_ids[x]));
    auto mask = as_mask(t0[x], s.size());
    double h = t.heights[x];
    for (int j = 0; j < t.q; ++j) {
      double integral = 0;
      for (std::size_t v = 0; v < s.size(); ++v) integral += s.weights[v] * t.at(x, j, v);
      if (integral > (h + p.c9) * (1 + kSlack))
        throw DomainError("integral bound fails for xi " + std::to_string(t.xi_ids[x]) + ", j " + std::to_string(j + 1));
      for (int l = 0; l < s.num_cells; ++l) {
        double lo = INFINITY, hi = -INFINITY;
        for (int v : members[l])
          if (!mask[v]) {
            lo = std::min(lo, t.at(x, j, v));
            hi = std::max(hi, t.at(x, j, v));
          }
        if (hi - lo > p.eps10 * (h + p.c9) * (1 + kSlack))
          throw DomainError("oscillation bound fails on cell " + std::to_string(l + 1) + " for xi " +
                            std::to_string(t.xi_ids[x]));
      }
    }
  }
}

ReduceResult pigeonhole_reduce(const LambdaTable& t, const DiscretizedS& s, const ExcludedSets& t0,
                               const ReduceParams& p) {
  check_reduce_hypotheses(t, s, t0, p);
  const std::size_t nx = t.num_xi();
  auto members = s.cell_members();
  std::vector<BigRat> cell_mu(s.num_cells);
  for (int l = 0; l < s.num_cells; ++l) cell_mu[l] = exact_measure(s, members[l]);

  ReduceResult r;
  r.bucket.resize(nx);
  r.medians.resize(nx);
  r.excluded.assign(nx, {});
  std::vector<std::vector<char>> half_covered(nx, std::vector<char>(s.num_cells, 0));
  auto per_xi = parallel::map_indexed(nx, [&](std::size_t x) {
    std::vector<double> med(static_cast<std::size_t>(s.num_cells) * t.q, 0.0);
    std::vector<char> covered(s.num_cells, 0);
    auto mask = as_mask(t0[x], s.size());
    for (int l = 0; l < s.num_cells; ++l) {
      if (members[l].empty()) continue;
      BigRat in_t0 = 0;
      for (int v : members[l])
        if (mask[v]) in_t0 += exact(s.weights[v]);
      covered[l] = in_t0 * 2 >= cell_mu[l];
      if (covered[l]) continue;
      for (int j = 0; j < t.q; ++j) med[l * t.q + j] = cell_median(t, s, x, j, l);
    }
    return std::pair{med, covered};
  });
  for (std::size_t x = 0; x < nx; ++x) {
    r.medians[x] = per_xi[x].first;
    half_covered[x] = per_xi[x].second;
    for (double m : r.medians[x]) r.bucket[x].push_back(static_cast<long>(std::floor(m / (2 * p.eps10))));
  }

  // Bucket with the most distinct heights, then the larger top height, then
  // the lexicographically first key.
  std::map<std::vector<long>, std::vector<std::size_t>> groups;
  for (std::size_t x = 0; x < nx; ++x) groups[r.bucket[x]].push_back(x);
  const std::vector<std::size_t>* best = nullptr;
  std::size_t best_distinct = 0;
  double best_top = -INFINITY;
  for (const auto& [key, xs] : groups) {
    std::set<double> hs;
    double top = -INFINITY;
    for (auto x : xs) {
      hs.insert(t.heights[x]);
      top = std::max(top, t.heights[x]);
    }
    if (!best || hs.size() > best_distinct || (hs.size() == best_distinct && top > best_top)) {
      best = &xs;
      best_distinct = hs.size();
      best_top = top;
      r.chosen_bucket = key;
    }
  }
  r.kept = *best;

  for (auto x : r.kept) {
    std::set<int> tx(t0[x].begin(), t0[x].end());
    for (int l = 0; l < s.num_cells; ++l)
      if (half_covered[x][l]) tx.insert(members[l].begin(), members[l].end());
    r.excluded[x].assign(tx.begin(), tx.end());
    double mu = 0;
    for (int v : r.excluded[x]) mu += s.weights[v];
    if (mu > p.eps11 * (1 + kSlack)) throw DomainError("internal: excluded set exceeds eps11");
  }
  return r;
}

PairCheck check_pigeonhole(const LambdaTable& t, const DiscretizedS& s, const ReduceResult& r,
                           const ReduceParams& p) {
  const auto& kept = r.kept;
  std::vector<std::vector<char>> masks;
  for (auto x : kept) masks.push_back(as_mask(r.excluded[x], s.size()));
  auto rows = parallel::map_indexed(kept.size(), [&](std::size_t a) {
    PairCheck pc;
    pc.worst_margin = -INFINITY;
    for (std::size_t b = a + 1; b < kept.size(); ++b) {
      std::size_t eta = kept[a], zeta = kept[b];
      double he = t.heights[eta], hz = t.heights[zeta];
      double rhs = (4 + p.c9 / he + p.c9 / hz) * p.eps10;
      for (std::size_t v = 0; v < s.size(); ++v) {
        if (masks[a][v] || masks[b][v]) continue;
        for (int j = 0; j < t.q; ++j) {
          double lhs = std::fabs(t.at(eta, j, v) / he - t.at(zeta, j, v) / hz);
          ++pc.checks;
          pc.worst_margin = std::max(pc.worst_margin, lhs - rhs);
          if (lhs > rhs + kSlack) pc.holds = false;
        }
      }
    }
    return pc;
  });
  PairCheck out;
  out.worst_margin = -INFINITY;
  for (const auto& pc : rows) {
    out.holds = out.holds && pc.holds;
    out.checks += pc.checks;
    out.worst_margin = std::max(out.worst_margin, pc.worst_margin);
  }
  if (out.checks == 0) out.worst_margin = 0;
  return out;
}

std::vector<std::size_t> best_chain(const LambdaTable& t, const std::vector<std::size_t>& pool, double r_min) {
  std::vector<std::size_t> order = pool;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return t.heights[a] > t.heights[b]; });
  std::vector<std::size_t> chain;
  for (auto x : order)
    if (chain.empty() || t.heights[chain.back()] / t.heights[x] >= r_min) chain.push_back(x);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

namespace {

std::vector<double> selection_lhs(const LambdaTable& t, const DiscretizedS& s, const std::vector<std::size_t>& chain,
                                  const std::vector<char>& in_t, const std::vector<int>& J, double c_pp) {
  std::vector<double> lhs;
  double h1 = t.heights[chain.front()];
  // int_{S \ T} min_i' lambda_{xi_i', J(v)} / h_i'
  double common = 0;
  for (std::size_t v = 0; v < s.size(); ++v) {
    if (in_t[v]) continue;
    double m = INFINITY;
    for (auto x : chain) m = std::min(m, t.at(x, J[v], v) / t.heights[x]);
    common += s.weights[v] * m;
  }
  for (auto x : chain) {
    double full = 0;
    for (std::size_t v = 0; v < s.size(); ++v) full += s.weights[v] * lambda_max(t, x, v) / t.heights[x];
    lhs.push_back(full - common + c_pp / h1);
  }
  return lhs;
}

// Smallest j attaining max over (i, j') of lambda_{xi_i, j'}(v) / h(xi_i).
int choose_j(const LambdaTable& t, const std::vector<std::size_t>& chain, std::size_t v) {
  double best = -INFINITY;
  int j_best = 0;
  for (int j = 0; j < t.q; ++j)
    for (auto x : chain) {
      double val = t.at(x, j, v) / t.heights[x];
      if (val > best) {
        best = val;
        j_best = j;
      }
    }
  return j_best;
}

}  // namespace

SelectResult simultaneous_select(const LambdaTable& t, const DiscretizedS& s, const ReduceResult& r,
                                 const SelectParams& p) {
  if (p.n < 1) throw DomainError("n must be positive");
  if (!(p.r_min > 1)) throw DomainError("r_min must exceed 1");
  if (r.kept.empty()) throw DomainError("the set Xi' is empty");
  auto chain = best_chain(t, r.kept, p.r_min);
  if (static_cast<int>(chain.size()) < p.n)
    throw DomainError("no chain of length " + std::to_string(p.n) + " with ratio " + format_shortest(p.r_min) +
                      "; maximal achievable n = " + std::to_string(chain.size()));
  SelectResult out;
  out.chain.assign(chain.end() - p.n, chain.end());
  std::set<int> tset;
  for (auto x : out.chain) tset.insert(r.excluded[x].begin(), r.excluded[x].end());
  out.excluded.assign(tset.begin(), tset.end());
  for (int v : out.excluded) out.measure_T += s.weights[v];
  if (out.measure_T > p.eps5 * (1 + kSlack))
    throw DomainError("measure budget exceeded: mu(T) = " + format_shortest(out.measure_T) + " > eps5");
  auto in_t = as_mask(out.excluded, s.size());
  out.J.assign(s.size(), -1);
  for (std::size_t v = 0; v < s.size(); ++v)
    if (!in_t[v]) out.J[v] = choose_j(t, out.chain, v);
  out.lhs = selection_lhs(t, s, out.chain, in_t, out.J, p.c_pp);
  out.holds = true;
  for (double l : out.lhs) out.holds = out.holds && l <= p.eps_pp + kSlack;
  return out;
}

bool check_selection(const LambdaTable& t, const DiscretizedS& s, const SelectResult& sel, const SelectParams& p,
                     double slack) {
  if (static_cast<int>(sel.chain.size()) != p.n) return false;
  for (std::size_t i = 1; i < sel.chain.size(); ++i)
    if (t.heights[sel.chain[i]] / t.heights[sel.chain[i - 1]] < p.r_min) return false;
  auto in_t = as_mask(sel.excluded, s.size());
  double mu = 0;
  for (int v : sel.excluded) mu += s.weights[v];
  if (mu > p.eps5 + slack) return false;
  // J must be the least index attaining the joint maximum.
  for (std::size_t v = 0; v < s.size(); ++v) {
    if (in_t[v]) {
      if (sel.J[v] != -1) return false;
      continue;
    }
    int j = sel.J[v];
    if (j < 0 || j >= t.q) return false;
    double top = -INFINITY;
    for (int jj = 0; jj < t.q; ++jj)
      for (auto x : sel.chain) top = std::max(top, t.at(x, jj, v) / t.heights[x]);
    bool attained = false;
    for (auto x : sel.chain) attained = attained || t.at(x, j, v) / t.heights[x] == top;
    if (!attained) return false;
    for (int jj = 0; jj < j; ++jj)
      for (auto x : sel.chain)
        if (t.at(x, jj, v) / t.heights[x] == top) return false;
  }
  // Direct summation of the selection inequality.
  double h1 = t.heights[sel.chain.front()];
  for (auto xi : sel.chain) {
    double lhs = p.c_pp / h1;
    for (std::size_t v = 0; v < s.size(); ++v) {
      lhs += s.weights[v] * lambda_max(t, xi, v) / t.heights[xi];
      if (in_t[v]) continue;
      double m = INFINITY;
      for (auto x : sel.chain) m = std::min(m, t.at(x, sel.J[v], v) / t.heights[x]);
      lhs -= s.weights[v] * m;
    }
    if (lhs > p.eps_pp + slack) return false;
  }
  return true;
}

double selection_bound(const LambdaTable& t, const DiscretizedS& s, const SelectResult& sel, const ReduceParams& rp,
                       const SelectParams& sp) {
  double h1 = t.heights[sel.chain.front()];
  double e8 = 0;
  for (auto x : sel.chain)
    for (int j = 0; j < t.q; ++j) {
      double in_t = 0;
      for (int v : sel.excluded) in_t += s.weights[v] * t.at(x, j, v);
      e8 = std::max(e8, in_t / (t.heights[x] + rp.c9));
    }
  return t.q * e8 * (1 + rp.c9 / h1) + (4 + 2 * rp.c9 / h1) * rp.eps10 * s.measure() + sp.c_pp / h1;
}

std::string reduce_to_json(const LambdaTable& t, const DiscretizedS& s, const ReduceResult& r,
                           const SelectResult* sel) {
  using nlohmann::json;
  json doc;
  doc["chosen_bucket"] = r.chosen_bucket;
  json kept = json::array();
  for (auto x : r.kept) {
    json e;
    e["xi"] = t.xi_ids[x];
    e["height"] = t.heights[x];
    e["bucket"] = r.bucket[x];
    std::vector<long> ex;
    for (int v : r.excluded[x]) ex.push_back(s.ids[v]);
    e["excluded"] = ex;
    kept.push_back(e);
  }
  doc["kept"] = kept;
  json buckets = json::array();
  for (std::size_t x = 0; x < t.num_xi(); ++x) buckets.push_back({{"xi", t.xi_ids[x]}, {"bucket", r.bucket[x]}});
  doc["buckets"] = buckets;
  if (sel) {
    json js;
    std::vector<long> chain, excluded;
    for (auto x : sel->chain) chain.push_back(t.xi_ids[x]);
    for (int v : sel->excluded) excluded.push_back(s.ids[v]);
    js["chain"] = chain;
    js["excluded"] = excluded;
    js["measure_excluded"] = sel->measure_T;
    json jmap = json::array();
    for (std::size_t v = 0; v < s.size(); ++v)
      if (sel->J[v] >= 0) jmap.push_back({{"place", s.ids[v]}, {"j", sel->J[v] + 1}});
    js["J"] = jmap;
    js["lhs"] = sel->lhs;
    js["holds"] = sel->holds;
    doc["selection"] = js;
  }
  return doc.dump(2) + "\n";
}

SyntheticInstance make_synthetic_instance(std::uint64_t seed, int places, int cells, int xis, int q) {
  if (places < cells || cells < 1 || xis < 1 || q < 1) throw DomainError("invalid synthetic instance size");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SyntheticInstance inst;
  auto& s = inst.space;
  auto& t = inst.table;
  const double eps10_choices[] = {0.02, 0.05, 0.1};
  inst.params.eps10 = eps10_choices[rng() % 3];
  inst.params.eps11 = 0.05;
  inst.params.c9 = 0.5;

  s.num_cells = cells;
  double total = 0;
  for (int v = 0; v < places; ++v) {
    s.ids.push_back(1000 + v);
    s.weights.push_back(0.5 + unit(rng));
    s.cell_of.push_back(v < cells ? v : static_cast<int>(rng() % cells));
    total += s.weights.back();
  }
  for (double& w : s.weights) w /= total;  // mu(S) = 1
  std::vector<double> cell_mu(cells, 0.0);
  for (int v = 0; v < places; ++v) cell_mu[s.cell_of[v]] += s.weights[v];

  // A few prototype profiles a[j][l] with sum_l mu_l a <= 0.75.
  const int kinds = 3;
  std::vector<std::vector<std::vector<double>>> proto(kinds, std::vector<std::vector<double>>(q, std::vector<double>(cells)));
  for (auto& pk : proto)
    for (auto& row : pk) {
      double mass = 0;
      for (int l = 0; l < cells; ++l) {
        row[l] = unit(rng) < 0.3 ? 0.0 : unit(rng);
        mass += cell_mu[l] * row[l];
      }
      if (mass > 0.75)
        for (double& a : row) a *= 0.75 / mass;
    }

  t.q = q;
  t.places = places;
  t.values.assign(static_cast<std::size_t>(xis) * q * places, 0.0);
  inst.t0.assign(xis, {});
  for (int x = 0; x < xis; ++x) {
    t.xi_ids.push_back(x + 1);
    double h = std::exp(unit(rng) * std::log(1000.0)) + 0.5;
    t.heights.push_back(h);
    const auto& pk = proto[rng() % kinds];
    // Places outside T0 oscillate by at most 0.9 eps10 h within each cell.
    for (int j = 0; j < q; ++j)
      for (int v = 0; v < places; ++v)
        t.at(x, j, v) = h * (pk[j][s.cell_of[v]] + 0.9 * inst.params.eps10 * unit(rng));
    if (x % 2 == 1) {
      std::vector<int> order(places);
      for (int v = 0; v < places; ++v) order[v] = v;
      std::shuffle(order.begin(), order.end(), rng);
      double mu = 0;
      for (int v : order) {
        if (mu + s.weights[v] > inst.params.eps11 / 2) break;
        mu += s.weights[v];
        inst.t0[x].push_back(v);
        // Arbitrary values on T0; mu(T0) * 3 h stays below the c9 slack.
        for (int j = 0; j < q; ++j) t.at(x, j, v) = 3 * h * unit(rng);
      }
      std::sort(inst.t0[x].begin(), inst.t0[x].end());
    }
  }
  return inst;
}

PartsCheck check_parts(const std::vector<double>& heights, const std::vector<SetS>& parts,
                            const PartsIntegrand& lambda, double eps_prime, double c_prime, double r_min,
                            Polarization pol, const QuadOptions& opts) {
  if (heights.empty()) throw DomainError("need at least one xi");
  for (double h : heights)
    if (!(h > 0)) throw DomainError("heights of xi_i must be positive");
  for (std::size_t a = 0; a < parts.size(); ++a) {
    parts[a].validate();
    if (pol == Polarization::NumberFieldQ && !parts[a].cells.empty())
      throw DomainError("K = Q has a single archimedean place; cells are not allowed");
    for (std::size_t b = a + 1; b < parts.size(); ++b)
      if (!parts[a].disjoint_from(parts[b]))
        throw DomainError("parts T_" + std::to_string(a + 1) + " and T_" + std::to_string(b + 1) + " overlap");
  }
  const int n = static_cast<int>(heights.size());
  PartsCheck out;
  out.rhs = 2 + eps_prime + c_prime / heights.front();
  out.holds_ratio = true;
  for (int i = 1; i < n; ++i) out.holds_ratio = out.holds_ratio && heights[i] / heights[i - 1] >= r_min;

  for (std::size_t j = 0; j < parts.size(); ++j) {
    const int jj = static_cast<int>(j);
    auto min_ratio = [&](const Place& v, int cell) {
      double m = INFINITY;
      for (int i = 0; i < n; ++i) m = std::min(m, lambda(i, jj, v, cell) / heights[i]);
      return m;
    };
    for (const auto& v : parts[j].finite_places) out.lhs += min_ratio(v, -1);
    if (pol == Polarization::NumberFieldQ) {
      if (parts[j].all_archimedean) out.lhs += min_ratio(ArchSample{}, -1);
      continue;
    }
    auto cells = parts[j].arch_cells();
    double total_mu = 0;
    for (const auto& c : cells) total_mu += fs_cell_measure(c);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      QuadOptions o = opts;
      o.tol = opts.tol * fs_cell_measure(cells[c]) / total_mu / static_cast<double>(parts.size());
      const int ci = static_cast<int>(c);
      auto q = integrate_arch([&](const ArchSample& z) { return min_ratio(z, ci); }, std::vector<Cell>{cells[c]}, o);
      out.lhs += q.value;
      out.error_bound += q.error_bound;
    }
  }
  out.holds_integral = out.lhs >= out.rhs;
  return out;
}

PartsCheck check_parts(const std::vector<RatFunc>& xis, const std::vector<SetS>& parts, const DivisorSpec& d,
                            double eps_prime, double c_prime, double r_min, Polarization pol,
                            const QuadOptions& opts) {
  d.validate();
  if (parts.size() != d.targets.size()) throw DomainError("need one part T_j per target");
  std::vector<double> heights;
  QuadOptions o = opts;
  std::vector<std::vector<RatFuncEvaluator>> evs(xis.size());
  for (const auto& xi : xis) {
    if (d.contains(xi)) throw DomainError("xi lies on the support of the divisor");
    heights.push_back(naive_height(xi, pol, opts).value);
  }
  for (std::size_t i = 0; i < xis.size(); ++i)
    for (const auto& a : d.targets) {
      evs[i].emplace_back(xis[i] - a);
      for (const auto& p : singular_points(xis[i] - a)) o.singular_points.push_back(p);
    }
  auto lambda = [&](int i, int j, const Place& v, int) {
    if (const auto* z = std::get_if<ArchSample>(&v); z && pol == Polarization::FunctionFieldQt) {
      double a = evs[i][j].abs_at(z->z, z->chart == Chart::Inverted);
      return a >= 1 ? 0.0 : (a == 0 ? INFINITY : -std::log(a));
    }
    return weil_lambda(d.targets[j], xis[i], v, pol);
  };
  return check_parts(heights, parts, lambda, eps_prime, c_prime, r_min, pol, o);
}

PartsCheck check_parts_disc(const DiscPart& part, const QuadOptions& opts) {
  if (part.n < 2) throw DomainError("the derived instance needs N >= 2 so that h(N) > 0");
  SetS region{false, part.cells, {}};
  QuadOptions o = opts;
  if (part.lattice_exponent == 0) o.singular_points.push_back({{static_cast<double>(part.n), 0.0}, false});
  return check_parts({std::log(static_cast<double>(part.n))}, {region},
                       [&](int, int, const Place& v, int) { return part.weil_value(std::get<ArchSample>(v)); }, 1.0,
                       0.0, 2.0, Polarization::FunctionFieldQt, o);
}

}  // namespace rothaff
