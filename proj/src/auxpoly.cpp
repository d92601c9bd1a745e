#include "rothaff/auxpoly.hpp"

#include <cmath>

#include <json.hpp>

#include "rothaff/errors.hpp"
#include "rothaff/parallel.hpp"
#include "rothaff/volume.hpp"

namespace rothaff {

namespace {

// All exponent tuples 0 <= k_i <= d_i in lexicographic order.
std::vector<Exponent> all_exponents(const std::vector<int>& d) {
  std::vector<Exponent> out;
  Exponent k(d.size(), 0);
  for (;;) {
    out.push_back(k);
    int i = static_cast<int>(d.size()) - 1;
    while (i >= 0 && k[i] == d[i]) k[i--] = 0;
    if (i < 0) return out;
    ++k[i];
  }
}

BigRat weighted(const Exponent& k, const IndexWeights& d) {
  BigRat s = 0;
  for (std::size_t i = 0; i < k.size(); ++i) s += BigRat(k[i], d.d[i]);
  s.canonicalize();
  return s;
}

std::string rat_str(const BigRat& x) { return to_string(x); }

}  // namespace

AuxPolyResult build_aux_poly(const std::vector<BigRat>& alphas, int n, const BigRat& tau, const IndexWeights& d) {
  d.validate();
  if (n < 1 || d.size() != static_cast<std::size_t>(n)) throw DomainError("need exactly n index weights");
  if (alphas.empty()) throw DomainError("need at least one alpha");
  for (std::size_t i = 0; i < alphas.size(); ++i)
    for (std::size_t j = i + 1; j < alphas.size(); ++j)
      if (alphas[i] == alphas[j]) throw DomainError("alphas must be distinct: " + rat_str(alphas[i]));
  if (tau < 0) throw DomainError("tau must be nonnegative");

  auto monomials = all_exponents(d.d);
  std::vector<Exponent> conditions;
  for (const auto& k : monomials)
    if (weighted(k, d) < tau) conditions.push_back(k);
  const std::size_t q = alphas.size();
  AuxPolyResult out;
  out.unknowns = monomials.size();
  out.equations = q * conditions.size();
  if (out.equations >= out.unknowns)
    throw DomainError("infeasible dimension count: q J_d(tau) = " + std::to_string(out.equations) +
                      " >= prod(d_i + 1) = " + std::to_string(out.unknowns));

  // Row (j, k): coefficient of a_m in d_k P(alpha_j, ..., alpha_j) is
  // prod C(m_i, k_i) alpha_j^{sum (m_i - k_i)}.
  int total_degree = 0;
  for (int x : d.d) total_degree += x;
  std::vector<std::vector<BigRat>> alpha_pow(q, std::vector<BigRat>(total_degree + 1, BigRat(1)));
  for (std::size_t j = 0; j < q; ++j)
    for (int e = 1; e <= total_degree; ++e) alpha_pow[j][e] = alpha_pow[j][e - 1] * alphas[j];

  struct Row {
    std::vector<BigInt> ints;
    BigRat max_entry;
  };
  auto rows = parallel::map_indexed(out.equations, [&](std::size_t r) {
    std::size_t j = r / conditions.size();
    const Exponent& k = conditions[r % conditions.size()];
    std::vector<BigRat> entries(monomials.size(), BigRat(0));
    Row row{{}, BigRat(0)};
    for (std::size_t c = 0; c < monomials.size(); ++c) {
      const Exponent& m = monomials[c];
      BigInt coef = 1;
      int shift = 0;
      bool zero = false;
      for (std::size_t i = 0; i < m.size() && !zero; ++i) {
        if (m[i] < k[i]) zero = true;
        else {
          coef *= binomial(m[i], k[i]);
          shift += m[i] - k[i];
        }
      }
      if (zero) continue;
      entries[c] = coef * alpha_pow[j][shift];
      if (abs(entries[c]) > row.max_entry) row.max_entry = abs(entries[c]);
    }
    BigInt den = 1;
    for (const auto& e : entries) den = lcm(den, e.get_den());
    row.ints.resize(entries.size());
    for (std::size_t c = 0; c < entries.size(); ++c) row.ints[c] = entries[c].get_num() * (den / entries[c].get_den());
    return row;
  });

  IntMatrix a;
  BigRat max_entry = 0;
  for (auto& row : rows) {
    a.push_back(std::move(row.ints));
    if (row.max_entry > max_entry) max_entry = row.max_entry;
  }
  KernelVector kv = siegel_kernel(a, monomials.size());

  out.p = MultiPoly(d.d);
  for (std::size_t c = 0; c < monomials.size(); ++c) out.p.add_term(monomials[c], BigRat(kv.v[c]));
  out.kernel_dim = kv.kernel_dim;
  out.coefficient_log_height = kv.log_height;
  out.entry_log_max = max_entry > 0 ? log_abs(max_entry) : 0.0;
  double alpha_log = 0;
  for (const auto& al : alphas)
    if (al != 0) alpha_log = std::max(alpha_log, log_abs(al));
  out.entry_log_bound = total_degree * (std::log(2.0) + alpha_log);
  return out;
}

DysonResult dyson_check(const MultiPoly& p, const std::vector<std::vector<BigRat>>& zeta, const IndexWeights& d) {
  d.validate();
  const std::size_t n = d.size();
  for (std::size_t i = 1; i < n; ++i)
    if (d.d[i] > d.d[i - 1]) throw DomainError("index weights must satisfy d_1 >= d_2 >= ... >= d_n");
  if (p.nvars() != n) throw DomainError("polynomial and weights disagree on the number of variables");
  if (p.is_zero()) throw DomainError("P must be nonzero");
  for (std::size_t i = 0; i < n; ++i)
    if (p.degree_in(i) > d.d[i])
      throw DomainError("degree bound fails: deg in x_" + std::to_string(i + 1) + " exceeds d_" +
                        std::to_string(i + 1));
  if (zeta.empty()) throw DomainError("need at least one point");
  for (const auto& z : zeta)
    if (z.size() != n) throw DomainError("point has the wrong dimension");
  for (std::size_t a = 0; a < zeta.size(); ++a)
    for (std::size_t b = a + 1; b < zeta.size(); ++b)
      for (std::size_t i = 0; i < n; ++i)
        if (zeta[a][i] == zeta[b][i])
          throw DomainError("coordinate condition fails: points " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
                            " share coordinate " + std::to_string(i + 1));

  DysonResult r;
  r.t = parallel::map_indexed(zeta.size(), [&](std::size_t j) { return index(p, zeta[j], d); });
  r.lhs = 0;
  for (const auto& t : r.t) r.lhs += vol_n(static_cast<int>(n), t);
  long extra = std::max(0L, static_cast<long>(zeta.size()) - 2);
  r.rhs = 1;
  for (std::size_t i = 0; i < n; ++i) {
    BigRat s = 0;
    for (std::size_t l = i + 1; l < n; ++l) s += BigRat(d.d[l], d.d[i]);
    r.rhs *= 1 + extra * s;
  }
  r.lhs.canonicalize();
  r.rhs.canonicalize();
  r.holds = r.lhs <= r.rhs;
  return r;
}

std::string dyson_to_json(const DysonResult& r, const std::vector<std::vector<BigRat>>& zeta, const IndexWeights& d) {
  using nlohmann::json;
  json doc;
  doc["d"] = d.d;
  json pts = json::array();
  for (std::size_t j = 0; j < zeta.size(); ++j) {
    json coords = json::array();
    for (const auto& c : zeta[j]) coords.push_back(rat_str(c));
    pts.push_back({{"zeta", coords}, {"index", rat_str(r.t[j])}, {"index_approx", r.t[j].get_d()}});
  }
  doc["points"] = pts;
  doc["lhs"] = rat_str(r.lhs);
  doc["lhs_approx"] = r.lhs.get_d();
  doc["rhs"] = rat_str(r.rhs);
  doc["rhs_approx"] = r.rhs.get_d();
  doc["holds"] = r.holds;
  return doc.dump(2) + "\n";
}

std::string auxpoly_to_json(const AuxPolyResult& r, const std::vector<BigRat>& alphas, const BigRat& tau,
                            const IndexWeights& d) {
  using nlohmann::json;
  json doc;
  json al = json::array();
  for (const auto& a : alphas) al.push_back(rat_str(a));
  doc["alphas"] = al;
  doc["tau"] = rat_str(tau);
  doc["d"] = d.d;
  doc["equations"] = r.equations;
  doc["unknowns"] = r.unknowns;
  doc["kernel_dim"] = r.kernel_dim;
  doc["terms"] = r.p.terms().size();
  doc["coefficient_log_height"] = r.coefficient_log_height;
  doc["entry_log_max"] = r.entry_log_max;
  doc["entry_log_bound"] = r.entry_log_bound;
  json idx = json::array();
  for (const auto& a : alphas) {
    BigRat t = index(r.p, std::vector<BigRat>(d.size(), a), d);
    idx.push_back({{"alpha", rat_str(a)}, {"index", rat_str(t)}, {"at_least_tau", t >= tau}});
  }
  doc["diagonal_index"] = idx;
  json terms = json::array();
  for (const auto& [k, c] : r.p.terms()) terms.push_back({{"k", k}, {"coeff", rat_str(c)}});
  doc["polynomial"] = terms;
  return doc.dump(2) + "\n";
}

}  // namespace rothaff
