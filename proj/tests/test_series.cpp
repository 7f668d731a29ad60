#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "unicent/counts.hpp"
#include "unicent/series.hpp"

using namespace unicent;
namespace sr = unicent::series;

namespace {

Rational rat(long long n, long long d) { return Rational(BigInt(n), BigInt(d)); }

bool coeff_le(const sr::PowSeries& f, const sr::PowSeries& g) {
  for (unsigned n = 0; n <= f.order(); ++n)
    if (f.at(n) > g.at(n)) return false;
  return true;
}

}  // namespace

TEST_CASE("series arithmetic and rational powers") {
  const BigInt q = 3;

  // geometric series
  sr::PowSeries geo = sr::reciprocal(sr::one_plus_term(16, q, 1, Rational(-1)));
  for (unsigned n = 0; n <= 16; ++n) CHECK(geo.at(n) == 1);

  // square root squared
  sr::PowSeries root = sr::pow_rational(sr::one_plus_term(20, q, 1, Rational(1)), rat(1, 2));
  sr::PowSeries sq = sr::mul(root, root);
  CHECK(sq.at(0) == 1);
  CHECK(sq.at(1) == 1);
  for (unsigned n = 2; n <= 20; ++n) CHECK(sq.at(n) == 0);

  // (1 + u^2/8)^{3/2} starts 1 + (3/16) u^2
  sr::PowSeries f = sr::pow_rational(sr::one_plus_term(8, q, 2, rat(1, 8)), rat(3, 2));
  CHECK(f.at(0) == 1);
  CHECK(f.at(1) == 0);
  CHECK(f.at(2) == rat(3, 16));

  // negative rational exponent agrees with explicit reciprocal
  sr::PowSeries g(12, q);
  g.set(0, Rational(1));
  g.set(1, Rational(1));
  g.set(2, Rational(3));
  CHECK(sr::pow_rational(g, Rational(-2)).coeffs() ==
        sr::reciprocal(sr::mul(g, g)).coeffs());
  CHECK(sr::pow_int(g, 3).coeffs() == sr::mul(sr::mul(g, g), g).coeffs());
  CHECK(sr::pow_int(g, -1).coeffs() == sr::reciprocal(g).coeffs());
  CHECK(sr::pow_int(g, 0).coeffs() == sr::PowSeries::constant(12, q, Rational(1)).coeffs());

  // add/sub/scale
  sr::PowSeries s = sr::sub(sr::add(g, g), g);
  CHECK(s.coeffs() == g.coeffs());
  CHECK(sr::scale(g, rat(1, 3)).at(2) == 1);

  // error paths
  sr::PowSeries zero_const(4, q);
  CHECK_THROWS_AS(sr::reciprocal(zero_const), std::domain_error);
  sr::PowSeries c2 = sr::PowSeries::constant(4, q, Rational(2));
  CHECK_THROWS_AS(sr::pow_rational(c2, rat(1, 2)), std::domain_error);
  sr::PowSeries other_q = sr::PowSeries::constant(4, BigInt(5), Rational(1));
  sr::PowSeries other_T = sr::PowSeries::constant(5, q, Rational(1));
  CHECK_THROWS_AS(sr::mul(sr::PowSeries::constant(4, q, Rational(1)), other_q),
                  std::invalid_argument);
  CHECK_THROWS_AS(sr::add(sr::PowSeries::constant(4, q, Rational(1)), other_T),
                  std::invalid_argument);
  CHECK_THROWS_AS(sr::PowSeries(sr::kMaxOrder + 1, q), std::invalid_argument);
  CHECK_THROWS_AS(zero_const.at(5), std::out_of_range);
}

TEST_CASE("pair proportion series routes agree") {
  for (long long qv : {3, 5, 9}) {
    const BigInt q = qv;
    sr::PowSeries r1 = sr::RU_route1(q, 32);
    sr::PowSeries r2 = sr::RU_route2(q, 32);
    sr::PowSeries r3 = sr::RU_route3(q, 32);
    CHECK(r1.coeffs() == r2.coeffs());
    CHECK(r1.coeffs() == r3.coeffs());
    CHECK(r1.at(0) == 1);
    // dimension 2: only the blocks of the two non-central fixed-norm classes
    // survive, giving (q-2)/(q+1)
    CHECK(r1.at(1) == Rational(BigInt(qv - 2), BigInt(qv + 1)));
    for (unsigned n = 0; n <= 32; ++n) {
      CHECK(r1.at(n) >= 0);
      CHECK(r1.at(n) <= 1);
    }
  }
  CHECK(sr::RU(3, 20).at(1) == rat(1, 4));
  CHECK(sr::RU(5, 20).at(1) == rat(1, 2));
  CHECK(sr::RU(9, 20).at(1) == rat(7, 10));

  // closed form for the rational prefactor coefficients
  for (long long qv : {3, 5}) {
    const BigInt q = qv;
    sr::PowSeries a = sr::AU(q, 20);
    for (unsigned n = 0; n <= 20; ++n) CHECK(a.at(n) == sr::a_coeff(q, n));
    CHECK(sr::a_coeff(q, 0) == 1);
  }
  CHECK(sr::alpha_q(3) == rat(8, 15));

  // larger parameter values dominate coefficientwise
  sr::PowSeries r3q = sr::RU(3, 30);
  CHECK(coeff_le(r3q, sr::RU(5, 30)));
  CHECK(coeff_le(r3q, sr::RU(9, 30)));
}

TEST_CASE("dyadic factor series") {
  const BigInt q = 3;

  // level 0 carries the full degree-1 content: both expressions agreed inside
  // the builder, and the linear coefficient matches the full series
  sr::PowSeries g0 = sr::GUb(q, 0, 16);
  CHECK(g0.at(0) == 1);
  CHECK(g0.at(1) == rat(1, 4));

  // level 1 exercises the genuine half-integer exponent in its second route
  sr::PowSeries g1 = sr::GUb(q, 1, 16);
  CHECK(g1.at(0) == 1);
  CHECK(g1.at(1) == 0);
  CHECK(g1.at(2) == Rational(counts::D(q, 1), BigInt(8)));
  CHECK(g1.at(2) == rat(1, 8));

  // level 2 starts at u^4
  sr::PowSeries g2 = sr::GUb(q, 2, 16);
  for (unsigned n = 1; n <= 3; ++n) CHECK(g2.at(n) == 0);
  CHECK(g2.at(4) == Rational(counts::D(q, 2), BigInt(80)));

  // all factor series have nonnegative coefficients
  for (unsigned b = 0; b <= 4; ++b)
    for (unsigned n = 0; n <= 16; ++n) CHECK(sr::GUb(q, b, 16).at(n) >= 0);

  // the factor series multiply back to the full series
  sr::PowSeries prod = sr::PowSeries::constant(24, q, Rational(1));
  for (unsigned b = 0; b <= 4; ++b) prod = sr::mul(prod, sr::GUb(q, b, 24));
  CHECK(prod.coeffs() == sr::RU(q, 24).coeffs());

  // partial products: both construction routes are compared inside RUb
  for (unsigned b = 1; b <= 4; ++b) {
    sr::PowSeries rb = sr::RUb(q, b, 24);
    CHECK(rb.at(0) == 1);
    CHECK(coeff_le(rb, sr::RU(q, 24)));
  }
  CHECK(sr::RUb(q, 1, 24).coeffs() == sr::GUb(q, 0, 24).coeffs());

  // deeper partial products dominate shallower ones coefficientwise
  for (unsigned b = 2; b <= 4; ++b)
    CHECK(coeff_le(sr::RUb(q, b - 1, 24), sr::RUb(q, b, 24)));

  // inverted tail times the tail is 1
  sr::PowSeries tail = sr::PowSeries::constant(32, q, Rational(1));
  for (unsigned k = 3; (1u << k) <= 32; ++k) tail = sr::mul(tail, sr::GUb(q, k, 32));
  CHECK(sr::mul(tail, sr::TUb_inv(q, 3, 32)).coeffs() ==
        sr::PowSeries::constant(32, q, Rational(1)).coeffs());

  // compressed tail coefficients: the leading one has a closed form
  const auto ts = sr::t_coeffs(q, 3, 6);
  CHECK(ts[0] == Rational(counts::D(q, 4), BigInt(6560)));
  CHECK(ts[0] == rat(5, 82));  // (1/16)(3^4 - 1)/(3^4 + 1)
  for (unsigned k = 1; k <= 6; ++k) CHECK(Rational(8 * k) * ts[k - 1] < rat(5065, 10000));

  CHECK_THROWS_AS(sr::RUb(q, 0, 8), std::invalid_argument);
  CHECK_THROWS_AS(sr::TUb_inv(q, 0, 8), std::invalid_argument);
  CHECK_THROWS_AS(sr::t_coeffs(q, 4, 6), std::invalid_argument);  // order 96 > 64
}

TEST_CASE("minorant series and exact-exponent refusal") {
  const BigInt q = 3;

  sr::PowSeries f3 = sr::FUb(q, 3, 32);
  // ceil(N(9,4)/8) = ceil(1620/8) = 203 over 3^8 - 1
  CHECK(f3.at(8) == rat(203, 6560));
  for (unsigned n = 0; n <= 32; ++n)
    if (n % 8 != 0) CHECK(f3.at(n) == 0);
  CHECK(f3.at(0) == 1);

  // The 0.2117/(dk) coefficient floor holds at odd k but not at even k: the
  // product runs over odd block degrees only, so f(16) carries no linear term
  // from any single factor and collapses to the second-order term of the
  // degree-8 factor, C(203,2)/6560^2.
  const Rational floor_c = rat(2117, 10000);
  CHECK(f3.at(8) >= floor_c / 8);
  CHECK(f3.at(24) >= floor_c / 24);
  CHECK(f3.at(16) == Rational(BigInt(20503), BigInt(43033600)));
  CHECK(f3.at(16) < floor_c / 16);
  {
    sr::PowSeries f5 = sr::FUb(5, 3, 24);
    CHECK(f5.at(8) >= floor_c / 8);
    CHECK(f5.at(24) >= floor_c / 24);
    CHECK(f5.at(16) < floor_c / 16);
    // same structural collapse: C(E,2)/(5^8-1)^2 with E = ceil(N(25,4)/8)
    const BigInt e1 = (unicent::counts::N(BigInt(25), 4) + 7) / 8;
    CHECK(f5.at(16) == Rational(e1 * (e1 - 1) / 2, BigInt(390624) * BigInt(390624)));
  }

  sr::PowSeries f2 = sr::FUb(q, 2, 8);
  CHECK(f2.at(4) == rat(5, 80));

  // with only the power-of-two degree in range the exact exponent is known
  sr::PowSeries gm = sr::GUb_minus(q, 2, 8);
  CHECK(gm.at(4) == rat(5, 80));  // (3^4 - 1)/16 = 5 irreducibles
  CHECK(coeff_le(f2, gm));

  // degree 24 = 8 * 3 has no exact count; the call must refuse...
  CHECK_THROWS_AS(sr::GUb_minus(q, 2, 12), std::domain_error);
  // ...unless a caller-supplied source provides one
  auto source = [](unsigned degree) -> std::optional<BigInt> {
    if (degree == 24) return BigInt(999);
    return std::nullopt;
  };
  sr::PowSeries gm12 = sr::GUb_minus(q, 2, 12, source);
  // degree-24 factor's linear term plus the cross term C(5,3)/80^3 from the
  // degree-8 factor (1 + u^4/80)^5
  CHECK(gm12.at(12) == Rational(BigInt(999), BigInt(531440)) + rat(1, 51200));
  CHECK(gm12.at(4) == rat(5, 80));

  CHECK_THROWS_AS(sr::FUb(q, 0, 8), std::invalid_argument);
}

TEST_CASE("limit of the coefficient sequence") {
  const Rational tol = rat(1, 100000000);
  sr::LimitValue lv = sr::limit_RU(3, tol);
  CHECK(lv.radius <= tol);
  CHECK(lv.lo() > rat(3601, 10000));
  CHECK(lv.hi() < rat(3704, 10000));

  for (long long qv : {3, 5, 9}) {
    const BigInt q = qv;
    sr::LimitValue p = sr::limit_RU_product(q, rat(1, 10000000));
    sr::LimitValue s = sr::limit_RU_sum(q, rat(1, 10000000));
    const Rational diff = p.value > s.value ? p.value - s.value : s.value - p.value;
    CHECK(diff <= p.radius + s.radius);
    CHECK(diff < rat(1, 1000000));
  }

  // every computed coefficient sits inside the certified deviation bound
  sr::PowSeries r = sr::RU(3, 20);
  for (unsigned n = 1; n <= 20; ++n) {
    const Rational dv = r.at(n) > lv.value ? r.at(n) - lv.value : lv.value - r.at(n);
    CHECK(dv <= sr::epsilon_n_upper(3, n) + lv.radius);
  }

  // the two-sided coefficient window for q = 3
  CHECK(r.at(1) == rat(1, 4));
  for (unsigned n = 2; n <= 20; ++n) {
    CHECK(r.at(n) > rat(3433, 10000));
    CHECK(r.at(n) < rat(3795, 10000));
  }

  // general-q window: mu * delta - eps_n < r_n < mu + eps_n
  {
    const BigInt q = 5;
    const Rational mu =
        sr::alpha_q(q) * pow_rational_int(1 - rat(2, 30), 4);  // (1 - 2/(q(q+1)))^{q-1}
    const Rational del = 1 - rat(3, 500);                      // 1 - 3/(4 q^3)
    sr::PowSeries r5 = sr::RU(q, 15);
    for (unsigned n = 2; n <= 15; ++n) {
      CHECK(r5.at(n) < mu + sr::epsilon_n_upper(q, n));
      CHECK(r5.at(n) > mu * del - sr::epsilon_n_upper(q, n));
    }
  }

  CHECK_THROWS_AS(sr::limit_RU(3, Rational(0)), std::invalid_argument);
}

TEST_CASE("balanced-window lower bounds") {
  const BigInt q = 3;

  // coefficient mode: window [m(1-beta), m(1-alpha)] = [4, 8] at m = 8
  const Rational j8 = sr::j_U_lower_coefficient(8, q, Rational(0), rat(1, 2));
  CHECK(j8 > 0);
  CHECK(j8 <= sr::RU(q, 8).at(8));

  // a window with no admissible degrees gives the trivial bound 0
  CHECK(sr::j_U_lower_coefficient(2, q, Rational(0), rat(1, 3)) == 0);

  // beta = 1 admits the constant term and is allowed in coefficient mode
  CHECK(sr::j_U_lower_coefficient(8, q, rat(1, 3), Rational(1)) >= 0);

  CHECK_THROWS_AS(sr::j_U_lower_coefficient(0, q, Rational(0), rat(1, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(sr::j_U_lower_coefficient(8, q, rat(1, 2), rat(1, 2)), std::invalid_argument);
  CHECK_THROWS_AS(sr::j_U_lower_coefficient(80, q, Rational(0), rat(1, 2)),
                  std::invalid_argument);

  // closed form at the documented benchmark point is strictly positive
  const Rational jc = sr::j_U_lower_closed_form(54, q, rat(1, 3), rat(2, 3), 3);
  CHECK(jc > 0);
  // value is (0.05228/8)(log 2 - 8/18) up to the rational log lower bound
  CHECK(jc >= rat(5228, 100000) / 8 * (rat(6931, 10000) - rat(4, 9)));
  CHECK(jc < rat(5228, 100000) / 8 * rat(7, 10));

  // small m drives the subtracted term past the log and the bound goes negative
  CHECK(sr::j_U_lower_closed_form(8, q, rat(1, 3), rat(2, 3), 3) < 0);

  CHECK_THROWS_AS(sr::j_U_lower_closed_form(54, q, rat(1, 3), rat(2, 3), 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(sr::j_U_lower_closed_form(55, q, rat(1, 3), rat(2, 3), 3), std::domain_error);
  CHECK_THROWS_AS(sr::j_U_lower_closed_form(54, q, rat(1, 3), Rational(1), 3),
                  std::invalid_argument);

  // rational logarithm enclosures
  CHECK(sr::log_lower(Rational(2)) < sr::log_upper(Rational(2)));
  CHECK(sr::log_lower(Rational(2)) > rat(6931, 10000));
  CHECK(sr::log_upper(Rational(2)) < rat(6932, 10000));
  CHECK(sr::log_lower(rat(1, 2)) == -sr::log_upper(Rational(2)));
  CHECK(sr::log_lower(Rational(1)) == 0);
  CHECK_THROWS_AS(sr::log_lower(Rational(0)), std::domain_error);
}

TEST_CASE("pair family correction factor") {
  // hand-computed value at the smallest admissible parameters
  CHECK(sr::theta(4, 2, 3) == rat(512, 315));

  for (long long qv : {3, 5, 9}) {
    const BigInt q = qv;
    for (unsigned n = 4; n <= 30; ++n)
      for (unsigned s = (n + 1) / 2; 3 * s <= 2 * n; ++s)
        CHECK(sr::theta(n, s, q) > rat(81, 98));
  }

  CHECK_THROWS_AS(sr::theta(4, 3, 3), std::invalid_argument);
  CHECK_THROWS_AS(sr::theta(3, 2, 3), std::invalid_argument);
  CHECK_THROWS_AS(sr::theta(6, 2, 3), std::invalid_argument);

  // the family bound is the correction factor times the window bound
  CHECK(sr::ell_U_lower_coefficient(6, 4, 3, Rational(0), rat(1, 3)) ==
        sr::theta(6, 4, 3) * sr::j_U_lower_coefficient(2, 3, Rational(0), rat(1, 3)));
  const Rational ell = sr::ell_U_lower_closed_form(162, 108, 3, rat(1, 3), rat(2, 3), 3);
  CHECK(ell == sr::theta(162, 108, 3) * sr::j_U_lower_closed_form(54, 3, rat(1, 3), rat(2, 3), 3));
  CHECK(ell > 0);
}

TEST_CASE("involution pair proportions") {
  CHECK(sr::phi_U(0, 3) == 1);
  CHECK(sr::phi_U(1, 3) == rat(4, 3));
  CHECK(sr::phi_U(2, 3) == rat(32, 27));

  CHECK(sr::Phi_U(1, 3) == rat(8, 3));
  for (long long qv : {3, 5, 9}) {
    const BigInt q = qv;
    // Phi(1,q) = (1 + 1/q)^2 / (1 - 1/q)
    const Rational expect = (1 + Rational(BigInt(1), q)) * (1 + Rational(BigInt(1), q)) /
                            (1 - Rational(BigInt(1), q));
    CHECK(sr::Phi_U(1, q) == expect);
    for (unsigned m = 1; m <= 12; ++m) CHECK(sr::Phi_U(m, q) > 1);
  }

  CHECK(sr::delta_mq(1, 3) == rat(4, 7));

  CHECK(sr::iota_U(2, 3) == rat(2, 3));
  CHECK(sr::iota_U(3, 3) == rat(8, 21));
  CHECK(sr::iota_U(2, 5) == rat(9, 10));
  CHECK_THROWS_AS(sr::iota_U(1, 3), std::invalid_argument);

  const auto tab = sr::iota_table(3, 12);
  for (unsigned n = 2; n <= 12; ++n) CHECK(tab[n - 2] == sr::iota_U(n, 3));

  // the full bound battery over the standard window
  counts::CountReport rep = sr::check_iota_bounds({BigInt(3), BigInt(5), BigInt(7), BigInt(9)}, 40);
  CHECK(rep.all_pass());
  CHECK(rep.claims.size() == 20);

  // limits: the even limit is near the n = 40 value, the odd limit is the
  // even one divided by 1 + 1/q
  const auto lims = sr::iota_limits(3, rat(1, 1000000));
  CHECK(lims.first.radius <= rat(1, 1000000));
  const Rational i40 = sr::iota_U(40, 3);
  const Rational dv = i40 > lims.first.value ? i40 - lims.first.value : lims.first.value - i40;
  CHECK(dv < rat(1, 1000));
  CHECK(lims.second.value == lims.first.value / (1 + rat(1, 3)));
  CHECK(lims.first.lo() > rat(343, 1000));
  CHECK(lims.second.lo() > rat(254, 1000));

  // certified enclosure for the finite-product limit
  const sr::LimitValue ph = sr::phi_U_limit(3, rat(1, 1000000));
  CHECK(ph.contains(sr::phi_U(30, 3)));
}

TEST_CASE("series bound report and coefficient tables") {
  counts::CountReport rep = sr::check_series_bounds({BigInt(3), BigInt(5)}, 24);
  CHECK(rep.all_pass());
  CHECK(rep.failures() == 0);
  CHECK(rep.claims.size() > 10);
  CHECK(!rep.to_table().empty());
  const auto parsed = nlohmann::json::parse(rep.to_json());
  CHECK(parsed["schema"] == "count-report/1");

  sr::CoeffTable tab = sr::coeff_table(sr::RU(3, 8), "RU");
  CHECK(tab.idx.size() == 9);
  const std::string csv = tab.to_csv();
  CHECK(csv.find("n,exact,decimal") == 0);
  CHECK(csv.find("1,1/4,0.250000000000") != std::string::npos);
  const auto jt = nlohmann::json::parse(tab.to_json());
  CHECK(jt["schema"] == "coeff-table/1");
  CHECK(jt["table"] == "RU");
  CHECK(jt["rows"].size() == 9);
}
