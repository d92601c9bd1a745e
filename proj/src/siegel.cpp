#include "rothaff/siegel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rothaff/errors.hpp"

namespace rothaff {

namespace {

// Pairwise combinations are formed among this many basis vectors.
constexpr std::size_t kPairPool = 64;

std::vector<BigInt> primitive(std::vector<BigInt> v) {
  BigInt g = 0;
  for (const auto& x : v) g = gcd(g, x);
  if (g == 0) return v;
  for (auto& x : v) x /= g;
  auto lead = std::find_if(v.begin(), v.end(), [](const BigInt& x) { return x != 0; });
  if (*lead < 0)
    for (auto& x : v) x = -x;
  return v;
}

BigInt max_abs(const std::vector<BigInt>& v) {
  BigInt m = 0;
  for (const auto& x : v)
    if (abs(x) > m) m = abs(x);
  return m;
}

}  // namespace

KernelVector siegel_kernel(const IntMatrix& a, std::size_t ncols) {
  const std::size_t rows = a.size();
  for (const auto& r : a)
    if (r.size() != ncols) throw DomainError("matrix rows have inconsistent length");
  if (rows >= ncols) throw DomainError("need fewer equations than unknowns (M < N)");

  // Reduced row echelon form over Q.
  std::vector<std::vector<BigRat>> m(rows, std::vector<BigRat>(ncols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < ncols; ++j) m[i][j] = a[i][j];
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    BigRat inv = 1 / m[r][c];
    for (std::size_t j = c; j < ncols; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      BigRat f = m[i][c];
      for (std::size_t j = c; j < ncols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  std::vector<char> is_pivot(ncols, 0);
  for (auto c : pivots) is_pivot[c] = 1;

  std::vector<std::vector<BigInt>> basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<BigRat> v(ncols, BigRat(0));
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][f];
    BigInt den = 1;
    for (const auto& x : v) den = lcm(den, x.get_den());
    std::vector<BigInt> iv(ncols);
    for (std::size_t j = 0; j < ncols; ++j) iv[j] = v[j].get_num() * (den / v[j].get_den());
    basis.push_back(primitive(std::move(iv)));
  }
  if (basis.empty()) throw std::logic_error("siegel_kernel: empty kernel despite M < N");

  KernelVector out;
  out.kernel_dim = basis.size();
  BigInt best_norm = -1;
  auto consider = [&](std::vector<BigInt> v) {
    if (std::all_of(v.begin(), v.end(), [](const BigInt& x) { return x == 0; })) return;
    v = primitive(std::move(v));
    ++out.candidates;
    BigInt n = max_abs(v);
    if (best_norm < 0 || n < best_norm) {
      best_norm = n;
      out.v = std::move(v);
    }
  };
  for (const auto& b : basis) consider(b);
  std::size_t pool = std::min(basis.size(), kPairPool);
  for (std::size_t i = 0; i < pool; ++i)
    for (std::size_t j = i + 1; j < pool; ++j) {
      std::vector<BigInt> s(ncols), d(ncols);
      for (std::size_t k = 0; k < ncols; ++k) {
        s[k] = basis[i][k] + basis[j][k];
        d[k] = basis[i][k] - basis[j][k];
      }
      consider(std::move(s));
      consider(std::move(d));
    }

  for (const auto& row : a) {
    BigInt dot = 0;
    for (std::size_t j = 0; j < ncols; ++j) dot += row[j] * out.v[j];
    if (dot != 0) throw std::logic_error("siegel_kernel: A v != 0");
  }
  out.log_height = log_abs(best_norm);
  return out;
}

}  // namespace rothaff
