#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace unicent {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Factorization {
  // prime -> exponent, sorted by prime
  std::vector<std::pair<BigInt, unsigned>> factors;

  BigInt value() const;
  bool contains(const BigInt& p) const;
};

// Moebius function; n >= 1.
int moebius(std::uint64_t n);

// Largest power of 2 dividing n; n >= 1.
BigInt two_part(const BigInt& n);

// Deterministic Miller-Rabin (fixed witness set, proven below 3.3e24,
// extended base list beyond).
bool is_prime(const BigInt& n);

// Trial division to 10^6, then Pollard rho (Brent) on remaining cofactors.
// budget_ms bounds the rho stage; exceeding it throws ResourceLimitError.
Factorization factorize(const BigInt& n, std::uint64_t budget_ms = 10000);

BigInt pow_bigint(const BigInt& base, std::uint64_t exp);
BigInt gcd_bigint(const BigInt& a, const BigInt& b);
BigInt lcm_bigint(const BigInt& a, const BigInt& b);

// Largest t with t^n <= x; x >= 0, n >= 1.
BigInt nth_root_floor(const BigInt& x, unsigned n);

// Rationals lo <= x^(1/n) < hi with hi - lo = 2^-bits.
std::pair<Rational, Rational> root_bounds(const BigInt& x, unsigned n, unsigned bits);

Rational pow_rational_int(const Rational& base, long long exp);

// "p/q" (or "p" when integral)
std::string to_string(const Rational& r);
// Decimal expansion, truncated toward zero, with the given number of places.
std::string decimal_string(const Rational& r, int places = 12);

}  // namespace unicent
