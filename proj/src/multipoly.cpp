#include "rothaff/multipoly.hpp"

#include <sstream>

#include "rothaff/errors.hpp"
#include "rothaff/text.hpp"

namespace rothaff {

void IndexWeights::validate() const {
  if (d.empty()) throw DomainError("index weights need at least one variable");
  for (int x : d)
    if (x < 1) throw DomainError("index weights must be positive integers");
}

MultiPoly::MultiPoly(std::vector<int> bounds) : bounds_(std::move(bounds)) {
  if (bounds_.empty()) throw DomainError("a polynomial needs at least one variable");
  for (int b : bounds_)
    if (b < 0) throw DomainError("degree bounds must be nonnegative");
}

BigRat MultiPoly::coeff(const Exponent& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? BigRat(0) : it->second;
}

void MultiPoly::add_term(const Exponent& k, const BigRat& c) {
  if (k.size() != bounds_.size()) throw DomainError("exponent has the wrong number of variables");
  for (std::size_t i = 0; i < k.size(); ++i)
    if (k[i] < 0 || k[i] > bounds_[i]) throw DomainError("exponent exceeds the degree bound");
  if (c == 0) return;
  auto [it, fresh] = terms_.emplace(k, c);
  if (fresh) return;
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

int MultiPoly::degree_in(std::size_t i) const {
  int d = -1;
  for (const auto& [k, c] : terms_) d = std::max(d, k[i]);
  return d;
}

namespace {

std::vector<std::vector<BigRat>> power_table(const std::vector<BigRat>& x, const std::vector<int>& bounds) {
  std::vector<std::vector<BigRat>> pw(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    pw[i].assign(bounds[i] + 1, BigRat(1));
    for (int e = 1; e <= bounds[i]; ++e) pw[i][e] = pw[i][e - 1] * x[i];
  }
  return pw;
}

}  // namespace

BigRat MultiPoly::evaluate(const std::vector<BigRat>& x) const {
  if (x.size() != nvars()) throw DomainError("point has the wrong dimension");
  auto pw = power_table(x, bounds_);
  BigRat s = 0;
  for (const auto& [k, c] : terms_) {
    BigRat t = c;
    for (std::size_t i = 0; i < k.size(); ++i) t *= pw[i][k[i]];
    s += t;
  }
  return s;
}

MultiPoly MultiPoly::shifted(const std::vector<BigRat>& c) const {
  if (c.size() != nvars()) throw DomainError("shift has the wrong dimension");
  auto pw = power_table(c, bounds_);
  // One variable at a time: x^m -> sum_k C(m, k) c^{m-k} x^k.
  std::map<Exponent, BigRat> cur = terms_;
  for (std::size_t i = 0; i < nvars(); ++i) {
    std::map<Exponent, BigRat> next;
    for (const auto& [m, a] : cur)
      for (int k = 0; k <= m[i]; ++k) {
        Exponent e = m;
        e[i] = k;
        next[e] += a * binomial(m[i], k) * pw[i][m[i] - k];
      }
    cur.clear();
    for (auto& [e, a] : next)
      if (a != 0) cur.emplace(e, a);
  }
  MultiPoly out(bounds_);
  out.terms_ = std::move(cur);
  return out;
}

MultiPoly divided_derivative(const MultiPoly& p, const Exponent& k) {
  if (k.size() != p.nvars()) throw DomainError("derivative order has the wrong number of variables");
  for (int x : k)
    if (x < 0) throw DomainError("derivative orders must be nonnegative");
  MultiPoly out(p.bounds());
  for (const auto& [m, a] : p.terms()) {
    Exponent e(m.size());
    BigRat c = a;
    bool vanishes = false;
    for (std::size_t i = 0; i < m.size() && !vanishes; ++i) {
      if (m[i] < k[i]) vanishes = true;
      else {
        e[i] = m[i] - k[i];
        c *= binomial(m[i], k[i]);
      }
    }
    if (!vanishes) out.add_term(e, c);
  }
  return out;
}

BigRat index(const MultiPoly& p, const std::vector<BigRat>& xi, const IndexWeights& d) {
  d.validate();
  if (p.is_zero()) throw DomainError("the index of the zero polynomial is undefined");
  if (d.size() != p.nvars() || xi.size() != p.nvars()) throw DomainError("dimension mismatch in index");
  auto q = p.shifted(xi);
  BigRat best = -1;
  for (const auto& [k, a] : q.terms()) {
    BigRat t = 0;
    for (std::size_t i = 0; i < k.size(); ++i) t += BigRat(k[i], d.d[i]);
    t.canonicalize();
    if (best < 0 || t < best) best = t;
  }
  return best;
}

std::string serialize_multipoly(const MultiPoly& p) {
  std::ostringstream os;
  os << "bounds";
  for (int b : p.bounds()) os << ' ' << b;
  os << '\n';
  for (const auto& [k, c] : p.terms()) {
    for (std::size_t i = 0; i < k.size(); ++i) os << (i ? " " : "") << k[i];
    os << " : " << c.get_num().get_str() << '/' << c.get_den().get_str() << '\n';
  }
  return os.str();
}

MultiPoly parse_multipoly(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<std::vector<int>> exps;
  std::vector<BigRat> coeffs;
  std::vector<int> bounds;
  bool have_bounds = false;
  auto ints = [](const std::string& s) {
    std::vector<int> out;
    std::istringstream fs(s);
    std::string f;
    while (fs >> f) {
      try {
        std::size_t pos = 0;
        int v = std::stoi(f, &pos);
        if (pos != f.size()) throw ParseError("");
        out.push_back(v);
      } catch (const std::exception&) {
        throw ParseError("bad integer '" + f + "' in polynomial");
      }
    }
    return out;
  };
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("bounds", 0) == 0) {
      bounds = ints(line.substr(6));
      have_bounds = true;
      continue;
    }
    auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("expected 'k_1 ... k_n : coefficient' in '" + line + "'");
    exps.push_back(ints(line.substr(0, colon)));
    coeffs.push_back(parse_rat(trim(line.substr(colon + 1))));
  }
  if (!have_bounds) {
    // Bounds default to the largest exponents present.
    if (exps.empty()) throw ParseError("empty polynomial document needs a bounds line");
    bounds.assign(exps.front().size(), 0);
    for (const auto& e : exps) {
      if (e.size() != bounds.size()) throw ParseError("inconsistent number of variables");
      for (std::size_t i = 0; i < e.size(); ++i) bounds[i] = std::max(bounds[i], e[i]);
    }
  }
  MultiPoly p(bounds);
  for (std::size_t t = 0; t < exps.size(); ++t) {
    if (exps[t].size() != bounds.size()) throw ParseError("inconsistent number of variables");
    try {
      p.add_term(exps[t], coeffs[t]);
    } catch (const DomainError& e) {
      throw ParseError(e.what());
    }
  }
  return p;
}

}  // namespace rothaff
