#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "unicent/exact.hpp"

using namespace unicent;

TEST_CASE("moebius small values") {
  CHECK(moebius(1) == 1);
  CHECK(moebius(2) == -1);
  CHECK(moebius(6) == 1);
  CHECK(moebius(12) == 0);
  CHECK(moebius(30) == -1);
  CHECK(moebius(49) == 0);
  CHECK(moebius(210) == 1);
}

TEST_CASE("moebius is multiplicative on coprime arguments") {
  for (std::uint64_t a = 1; a <= 100; ++a)
    for (std::uint64_t b = 1; a * b <= 10000 && b <= 100; ++b) {
      if (std::gcd(a, b) != 1) continue;
      CHECK(moebius(a * b) == moebius(a) * moebius(b));
    }
}

TEST_CASE("two_part") {
  CHECK(two_part(12) == 4);
  CHECK(two_part(7) == 1);
  CHECK(two_part(8) == 8);
  CHECK(two_part(BigInt(1) << 100) == BigInt(1) << 100);
}

TEST_CASE("is_prime spot checks") {
  CHECK(is_prime(2));
  CHECK(is_prime(3));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(561));  // Carmichael
  CHECK(is_prime((BigInt(1) << 61) - 1));
  CHECK_FALSE(is_prime((BigInt(1) << 67) - 1));
  CHECK(is_prime(BigInt("1000000000039")));
}

TEST_CASE("factorize known values") {
  auto f = factorize(96);
  REQUIRE(f.factors.size() == 2);
  CHECK(f.factors[0] == std::pair<BigInt, unsigned>{2, 5});
  CHECK(f.factors[1] == std::pair<BigInt, unsigned>{3, 1});

  auto g = factorize(6560);  // 9^4 - 1
  REQUIRE(g.factors.size() == 3);
  CHECK(g.factors[0] == std::pair<BigInt, unsigned>{2, 5});
  CHECK(g.factors[1] == std::pair<BigInt, unsigned>{5, 1});
  CHECK(g.factors[2] == std::pair<BigInt, unsigned>{41, 1});

  auto h = factorize(2);
  REQUIRE(h.factors.size() == 1);
  CHECK(h.factors[0] == std::pair<BigInt, unsigned>{2, 1});
}

TEST_CASE("factorize reassembles for random 64-bit inputs") {
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 1000; ++i) {
    std::uint64_t n = rng() % 1000000000000ull;
    if (n < 2) n = 2;
    auto f = factorize(BigInt(n));
    CHECK(f.value() == BigInt(n));
    for (const auto& [p, e] : f.factors) CHECK(is_prime(p));
  }
}

TEST_CASE("factorize group-order scale input") {
  // 9^16 - 1 = (3^32 - 1): exercises the rho stage
  BigInt n = pow_bigint(9, 16) - 1;
  auto f = factorize(n);
  CHECK(f.value() == n);
  for (const auto& [p, e] : f.factors) CHECK(is_prime(p));
}

TEST_CASE("rational arithmetic is exact") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 500; ++i) {
    Rational a(static_cast<long long>(rng() % 100000) - 50000,
               static_cast<long long>(rng() % 9999) + 1);
    Rational b(static_cast<long long>(rng() % 100000) - 50000,
               static_cast<long long>(rng() % 9999) + 1);
    CHECK((a + b) - b == a);
    if (b != 0) CHECK((a / b) * b == a);
  }
}

TEST_CASE("rational formatting") {
  CHECK(to_string(Rational(1, 4)) == "1/4");
  CHECK(to_string(Rational(8)) == "8");
  CHECK(decimal_string(Rational(1, 4), 12) == "0.250000000000");
  CHECK(decimal_string(Rational(8, 21), 6) == "0.380952");
  CHECK(decimal_string(Rational(-1, 3), 4) == "-0.3333");
}

TEST_CASE("integer nth roots") {
  CHECK(nth_root_floor(0, 3) == 0);
  CHECK(nth_root_floor(1, 7) == 1);
  CHECK(nth_root_floor(26, 3) == 2);
  CHECK(nth_root_floor(27, 3) == 3);
  CHECK(nth_root_floor(28, 3) == 3);
  CHECK(nth_root_floor(pow_bigint(10, 18), 2) == pow_bigint(10, 9));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    BigInt x = BigInt(rng() % 1000000007) * (rng() % 1000000007);
    unsigned n = 2 + static_cast<unsigned>(rng() % 6);
    BigInt t = nth_root_floor(x, n);
    CHECK(pow_bigint(t, n) <= x);
    CHECK(pow_bigint(t + 1, n) > x);
  }
  CHECK_THROWS_AS(nth_root_floor(-1, 2), std::invalid_argument);
}

TEST_CASE("rational root brackets") {
  auto [lo, hi] = root_bounds(2, 2, 30);
  CHECK(lo * lo <= 2);
  CHECK(hi * hi > 2);
  CHECK(hi - lo == Rational(1, BigInt(1) << 30));
  auto [lo3, hi3] = root_bounds(3, 1, 10);  // trivial n=1 bracket
  CHECK(lo3 == 3);
}

TEST_CASE("integer powers of rationals") {
  CHECK(pow_rational_int(Rational(2, 3), 3) == Rational(8, 27));
  CHECK(pow_rational_int(Rational(2, 3), 0) == 1);
  CHECK(pow_rational_int(Rational(2, 3), -2) == Rational(9, 4));
  CHECK(pow_rational_int(Rational(-1, 2), 3) == Rational(-1, 8));
  CHECK_THROWS_AS(pow_rational_int(Rational(0), -1), std::invalid_argument);
}
