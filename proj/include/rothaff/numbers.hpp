#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rothaff {

using BigInt = mpz_class;
// mpq_class keeps gcd(num, den) = 1 and den > 0 after canonicalize().
using BigRat = mpq_class;

BigRat make_rat(const BigInt& num, const BigInt& den);
BigRat parse_rat(const std::string& text);
std::string to_string(const BigInt& x);
std::string to_string(const BigRat& x);

// Natural log of |x| for integers of any size. x must be nonzero.
double log_abs(const BigInt& x);
double log_abs(const BigRat& x);

// Exponent of p in x (x != 0, p prime).
long valuation(const BigInt& x, const BigInt& p);
long valuation(const BigRat& x, const BigInt& p);

bool is_probable_prime(const BigInt& p);

// Prime factorization of |n| (n != 0) by trial division and Pollard rho,
// primes ascending.
std::vector<std::pair<BigInt, long>> factor_integer(const BigInt& n);

BigInt binomial(long n, long k);

// Exact value of a finite double.
BigRat rat_from_double(double x);

}  // namespace rothaff
