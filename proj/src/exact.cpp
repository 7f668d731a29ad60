#include "unicent/exact.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>

namespace unicent {

BigInt Factorization::value() const {
  BigInt v = 1;
  for (const auto& [p, e] : factors)
    for (unsigned i = 0; i < e; ++i) v *= p;
  return v;
}

bool Factorization::contains(const BigInt& p) const {
  for (const auto& [q, e] : factors)
    if (q == p) return true;
  return false;
}

int moebius(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("moebius: n must be >= 1");
  int k = 0;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      ++k;
    }
  }
  if (n > 1) ++k;
  return (k % 2 == 0) ? 1 : -1;
}

BigInt two_part(const BigInt& n) {
  if (n <= 0) throw std::invalid_argument("two_part: n must be >= 1");
  unsigned idx = boost::multiprecision::lsb(n);
  return BigInt(1) << idx;
}

BigInt pow_bigint(const BigInt& base, std::uint64_t exp) {
  BigInt r = 1, b = base;
  while (exp) {
    if (exp & 1) r *= b;
    b *= b;
    exp >>= 1;
  }
  return r;
}

BigInt gcd_bigint(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::gcd(a, b);
}

BigInt lcm_bigint(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::abs(a / gcd_bigint(a, b) * b);
}

BigInt nth_root_floor(const BigInt& x, unsigned n) {
  if (x < 0) throw std::invalid_argument("nth_root_floor: x must be >= 0");
  if (n == 0) throw std::invalid_argument("nth_root_floor: n must be >= 1");
  if (n == 1 || x < 2) return x;
  unsigned bits = boost::multiprecision::msb(x) + 1;
  BigInt t = BigInt(1) << (bits + n - 1) / n;  // t^n >= x
  while (true) {
    BigInt next = ((n - 1) * t + x / pow_bigint(t, n - 1)) / n;
    if (next >= t) break;
    t = next;
  }
  while (pow_bigint(t, n) > x) --t;
  while (pow_bigint(t + 1, n) <= x) ++t;
  return t;
}

std::pair<Rational, Rational> root_bounds(const BigInt& x, unsigned n, unsigned bits) {
  BigInt scaled = x << (static_cast<std::uint64_t>(bits) * n);
  BigInt t = nth_root_floor(scaled, n);
  BigInt denom = BigInt(1) << bits;
  return {Rational(t, denom), Rational(t + 1, denom)};
}

Rational pow_rational_int(const Rational& base, long long exp) {
  if (exp == 0) return Rational(1);
  bool neg = exp < 0;
  std::uint64_t e = neg ? static_cast<std::uint64_t>(-exp) : static_cast<std::uint64_t>(exp);
  Rational r = 1, b = base;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  if (neg) {
    if (r == 0) throw std::invalid_argument("pow_rational_int: zero base, negative exponent");
    r = Rational(1) / r;
  }
  return r;
}

namespace {

using boost::multiprecision::powm;

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

bool miller_rabin_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

bool miller_rabin_big(const BigInt& n) {
  static const int bases[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                              41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
  BigInt d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (int a : bases) {
    if (n == a) return true;
    if (n % a == 0) return false;
    BigInt x = powm(BigInt(a), d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = (x * x) % n;
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t pollard_brent_u64(std::uint64_t n, std::uint64_t c0) {
  // Brent cycle detection on x -> x^2 + c mod n; deterministic c sweep.
  for (std::uint64_t c = c0;; ++c) {
    std::uint64_t x = 2, y = 2, d = 1;
    std::uint64_t q = 1;
    int power = 1, lam = 0;
    std::uint64_t ys = y;
    while (d == 1) {
      x = y;
      for (int i = 0; i < power; ++i) y = (mulmod_u64(y, y, n) + c) % n;
      lam = 0;
      while (lam < power && d == 1) {
        ys = y;
        int lim = std::min(128, power - lam);
        for (int i = 0; i < lim; ++i) {
          y = (mulmod_u64(y, y, n) + c) % n;
          std::uint64_t diff = x > y ? x - y : y - x;
          q = mulmod_u64(q, diff == 0 ? 1 : diff, n);
        }
        d = std::gcd(q, n);
        lam += lim;
      }
      power *= 2;
      if (power > (1 << 28)) break;
    }
    if (d == n) {
      // backtrack
      d = 1;
      while (d == 1) {
        ys = (mulmod_u64(ys, ys, n) + c) % n;
        std::uint64_t diff = x > ys ? x - ys : ys - x;
        d = std::gcd(diff == 0 ? n : diff, n);
      }
    }
    if (d != n && d != 1) return d;
  }
}

BigInt pollard_brent_big(const BigInt& n, const std::chrono::steady_clock::time_point& deadline) {
  for (BigInt c = 1;; ++c) {
    BigInt x = 2, y = 2, d = 1, q = 1, ys = y;
    int power = 1;
    while (d == 1) {
      if (std::chrono::steady_clock::now() > deadline)
        throw ResourceLimitError("factorize: time budget exceeded");
      x = y;
      for (int i = 0; i < power; ++i) y = (y * y + c) % n;
      int lam = 0;
      while (lam < power && d == 1) {
        ys = y;
        int lim = std::min(128, power - lam);
        for (int i = 0; i < lim; ++i) {
          y = (y * y + c) % n;
          BigInt diff = boost::multiprecision::abs(x - y);
          if (diff != 0) q = (q * diff) % n;
        }
        d = gcd_bigint(q, n);
        lam += lim;
      }
      power *= 2;
    }
    if (d == n) {
      d = 1;
      while (d == 1) {
        ys = (ys * ys + c) % n;
        BigInt diff = boost::multiprecision::abs(x - ys);
        d = gcd_bigint(diff == 0 ? n : diff, n);
      }
    }
    if (d != n && d != 1) return d;
  }
}

void factor_rec(BigInt n, std::map<BigInt, unsigned>& out,
                const std::chrono::steady_clock::time_point& deadline) {
  if (n == 1) return;
  if (is_prime(n)) {
    out[n] += 1;
    return;
  }
  BigInt d;
  if (n <= std::numeric_limits<std::uint64_t>::max()) {
    d = pollard_brent_u64(static_cast<std::uint64_t>(n), 1);
  } else {
    d = pollard_brent_big(n, deadline);
  }
  factor_rec(d, out, deadline);
  factor_rec(n / d, out, deadline);
}

}  // namespace

bool is_prime(const BigInt& n) {
  if (n <= std::numeric_limits<std::uint64_t>::max())
    return miller_rabin_u64(static_cast<std::uint64_t>(n));
  return miller_rabin_big(n);
}

Factorization factorize(const BigInt& n, std::uint64_t budget_ms) {
  if (n < 2) throw std::invalid_argument("factorize: n must be >= 2");
  auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(budget_ms);
  std::map<BigInt, unsigned> acc;
  BigInt m = n;
  for (std::uint64_t p = 2; p <= 1000000 && BigInt(p) * p <= m; p += (p == 2 ? 1 : 2)) {
    while (m % p == 0) {
      acc[BigInt(p)] += 1;
      m /= p;
    }
  }
  if (m > 1) {
    if (m <= BigInt(1000000) * 1000000 || is_prime(m)) {
      // below 10^12 any remaining cofactor is prime after the sieve above
      acc[m] += 1;
    } else {
      factor_rec(m, acc, deadline);
    }
  }
  Factorization f;
  f.factors.assign(acc.begin(), acc.end());
  return f;
}

std::string to_string(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string decimal_string(const Rational& r, int places) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  bool neg = num < 0;
  if (neg) num = -num;
  BigInt ip = num / den;
  BigInt rem = num % den;
  std::string s = (neg ? "-" : "") + ip.str();
  if (places <= 0) return s;
  s += ".";
  for (int i = 0; i < places; ++i) {
    rem *= 10;
    s += static_cast<char>('0' + static_cast<int>(rem / den));
    rem %= den;
  }
  return s;
}

}  // namespace unicent
