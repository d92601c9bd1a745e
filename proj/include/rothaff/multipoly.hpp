#pragma once

#include <map>
#include <string>
#include <vector>

#include "rothaff/numbers.hpp"

namespace rothaff {

using Exponent = std::vector<int>;

/// Degree weights d = (d_1..d_n), all d_i >= 1.
struct IndexWeights {
  std::vector<int> d;

  std::size_t size() const { return d.size(); }
  void validate() const;
};

/// Polynomial in n variables over Q with per-variable degree bounds. Only
/// nonzero coefficients are stored and every exponent respects the bounds.
class MultiPoly {
 public:
  MultiPoly() = default;
  explicit MultiPoly(std::vector<int> bounds);

  std::size_t nvars() const { return bounds_.size(); }
  const std::vector<int>& bounds() const { return bounds_; }
  const std::map<Exponent, BigRat>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  BigRat coeff(const Exponent& k) const;
  // Adds c x^k; throws when k exceeds the bounds.
  void add_term(const Exponent& k, const BigRat& c);
  // Largest exponent of x_i over the stored terms (-1 for zero).
  int degree_in(std::size_t i) const;

  BigRat evaluate(const std::vector<BigRat>& x) const;
  // P(x_1 + c_1, ..., x_n + c_n), exactly.
  MultiPoly shifted(const std::vector<BigRat>& c) const;

  friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

 private:
  std::vector<int> bounds_;
  std::map<Exponent, BigRat> terms_;
};

// d_k = prod (1/k_i!) (d/dx_i)^{k_i}; coefficient of x^{m-k} is prod C(m_i, k_i) a_m.
MultiPoly divided_derivative(const MultiPoly& p, const Exponent& k);

// min { sum k_i/d_i : a_k != 0 } in the expansion of P around xi.
BigRat index(const MultiPoly& p, const std::vector<BigRat>& xi, const IndexWeights& d);

// Header "bounds d_1 ... d_n" then one line "k_1 ... k_n : num/den" per term.
std::string serialize_multipoly(const MultiPoly& p);
MultiPoly parse_multipoly(const std::string& text);

}  // namespace rothaff
