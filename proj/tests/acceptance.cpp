// Release gate: ten self-contained checks, one pass/fail line each.
// Run all with no arguments, or a single one with --criterion N.

#include <cstring>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "unicent/counts.hpp"
#include "unicent/exact.hpp"
#include "unicent/mc.hpp"
#include "unicent/series.hpp"

using namespace unicent;

namespace {

std::string rat_str(const Rational& r) {
  return to_string(r) + " (" + decimal_string(r, 12) + ")";
}

std::string extra_value(const mc::ExperimentReport& rep, const std::string& key) {
  for (const auto& [k, v] : rep.extra)
    if (k == key) return v;
  return "<missing>";
}

bool same_series(const series::PowSeries& f, const series::PowSeries& g) {
  if (f.order() != g.order()) return false;
  for (unsigned n = 0; n <= f.order(); ++n)
    if (f.at(n) != g.at(n)) return false;
  return true;
}

// 1. First coefficient exactly 1/4, and the even-dimension pair proportion
//    stays inside (0.3433, 0.3795) for dimensions 4..40.
bool crit1(std::ostream& os) {
  const series::PowSeries r = series::RU(3, 20);
  if (r.at(1) != Rational(1, 4)) {
    os << "first coefficient is " << to_string(r.at(1)) << ", expected 1/4";
    return false;
  }
  const Rational lo(3433, 10000), hi(3795, 10000);
  for (unsigned n = 2; n <= 20; ++n) {
    if (!(lo < r.at(n) && r.at(n) < hi)) {
      os << "coefficient n=" << n << " = " << rat_str(r.at(n)) << " outside (0.3433, 0.3795)";
      return false;
    }
  }
  os << "[u^1] = 1/4 exactly; coefficients n=2..20 inside (0.3433, 0.3795)";
  return true;
}

// 2. Level-3 partial-product coefficients are at least 1/4 up to n = 23.
bool crit2(std::ostream& os) {
  const series::PowSeries r = series::RUb(3, 3, 23);
  for (unsigned n = 1; n <= 23; ++n) {
    if (r.at(n) < Rational(1, 4)) {
      os << "coefficient n=" << n << " = " << rat_str(r.at(n)) << " below 1/4";
      return false;
    }
  }
  os << "level-3 coefficients n=1..23 all >= 1/4";
  return true;
}

// 3. The three independent product constructions agree to order 32, and the
//    level-split identities (partial product of level factors; full series
//    times inverted tail) agree for b <= 4.
bool crit3(std::ostream& os) {
  for (long long q : {3, 5, 9}) {
    const series::PowSeries r1 = series::RU_route1(q, 32);
    const series::PowSeries r2 = series::RU_route2(q, 32);
    const series::PowSeries r3 = series::RU_route3(q, 32);
    if (!same_series(r1, r2) || !same_series(r1, r3)) {
      os << "route disagreement at q=" << q;
      return false;
    }
  }
  for (long long q : {3, 5, 9}) {
    const series::PowSeries full = series::RU(q, 24);
    for (unsigned b = 1; b <= 4; ++b) {
      series::PowSeries prod = series::PowSeries::constant(24, BigInt(q), Rational(1));
      for (unsigned k = 0; k < b; ++k) prod = series::mul(prod, series::GUb(q, k, 24));
      const series::PowSeries split = series::RUb(q, b, 24);
      if (!same_series(split, prod)) {
        os << "partial product mismatch at q=" << q << " b=" << b;
        return false;
      }
      if (!same_series(split, series::mul(full, series::TUb_inv(q, b, 24)))) {
        os << "inverted-tail mismatch at q=" << q << " b=" << b;
        return false;
      }
    }
  }
  os << "three routes agree to order 32 for q in {3,5,9}; split identities hold for b <= 4";
  return true;
}

// 4. Pair count in dimension 2 at q=3 equals 24 by exhaustive enumeration,
//    by the spectrum-priced polynomial sum, and by the series coefficient;
//    the dimension-4 polynomial count equals the series value.
bool crit4(std::ostream& os) {
  const mc::OracleResult d23 = mc::brute_delta(2, 3);
  if (!d23.equal || d23.counted != Rational(24)) {
    os << "dimension 2: counted " << to_string(d23.counted) << " (" << d23.detail << ")";
    return false;
  }
  if (d23.detail.find("exhaustive route") == std::string::npos) {
    os << "dimension 2: exhaustive route missing (" << d23.detail << ")";
    return false;
  }
  const mc::OracleResult d43 = mc::brute_delta(4, 3);
  if (!d43.equal) {
    os << "dimension 4: " << d43.detail;
    return false;
  }
  os << "dimension 2 count 24 by all three routes; dimension 4 polynomial route matches series";
  return true;
}

// 5. Centralizer orders and balanced inverting-involution counts for one
//    constructed element of each type: C (m=1, q=3), B (m=1, q=5),
//    D (m=1, q=3).
bool crit5(std::ostream& os) {
  struct Expect {
    long long q;
    const char* kind;
    int m;
    Rational centralizer;
    Rational inverters;
  };
  const std::vector<Expect> expects = {
      {3, "C", 1, Rational(16), Rational(4)},  // (q+1)^2, q+1
      {5, "B", 1, Rational(24), Rational(4)},  // q^2-1, q-1
      {3, "D", 1, Rational(64), Rational(8)},  // (q^2-1)^2, q^2-1
  };
  for (const Expect& e : expects) {
    const auto results = mc::brute_inverter_counts(e.q, {{e.kind, e.m}});
    for (const mc::OracleResult& r : results) {
      if (!r.equal) {
        os << r.name << ": counted " << to_string(r.counted) << ", predicted "
           << to_string(r.predicted);
        return false;
      }
      const bool is_centralizer = r.name.find("centralizer") != std::string::npos;
      const Rational& want = is_centralizer ? e.centralizer : e.inverters;
      if (r.counted != want) {
        os << r.name << ": counted " << to_string(r.counted) << ", pinned value "
           << to_string(want);
        return false;
      }
    }
  }
  os << "type C: 16/4, type B: 24/4, type D: 64/8 (centralizer order / inverting involutions)";
  return true;
}

// 6. Balanced-pair proportions by exhaustive enumeration match the closed
//    form in dimensions (2,3) and (3,3), and the proportion bounds hold for
//    all n <= 40, q in {3,5,7,9}.
bool crit6(std::ostream& os) {
  const mc::OracleResult i23 = mc::brute_iota(2, 3);
  if (!i23.equal || i23.counted != Rational(2, 3)) {
    os << "balanced-pair proportion (2,3): counted " << to_string(i23.counted);
    return false;
  }
  const mc::OracleResult i33 = mc::brute_iota(3, 3);
  if (!i33.equal || i33.counted != Rational(8, 21)) {
    os << "balanced-pair proportion (3,3): counted " << to_string(i33.counted);
    return false;
  }
  const counts::CountReport rep = series::check_iota_bounds({3, 5, 7, 9}, 40);
  if (!rep.all_pass()) {
    os << "proportion bounds: " << rep.failures() << " of " << rep.claims.size()
       << " claims failed";
    return false;
  }
  os << "iota(2,3) = 2/3 and iota(3,3) = 8/21 exhaustively; " << rep.claims.size()
     << " bound claims hold for n <= 40, q in {3,5,7,9}";
  return true;
}

// 7. Closed-form polynomial counts equal enumerated counts for q in {3,5} up
//    to factor degree 3, and the counting-function inequalities hold on the
//    tested grid.
bool crit7(std::ostream& os) {
  for (long long q : {3, 5}) {
    const counts::CountReport rep = counts::cross_validate_enumeration(BigInt(q), 3);
    if (!rep.all_pass()) {
      os << "enumeration mismatch at q=" << q << ": " << rep.failures() << " failures";
      return false;
    }
  }
  const counts::CountReport ids = counts::check_count_identities({3, 5}, 6);
  if (!ids.all_pass()) {
    os << "identity/inequality failures: " << ids.failures() << " of " << ids.claims.size();
    return false;
  }
  os << "closed forms equal enumeration for q in {3,5}, degree <= 3; " << ids.claims.size()
     << " identity and inequality claims hold";
  return true;
}

// 8. Coefficient-bound suite.  Four families, exact rational comparisons:
//    (a) convergent-factor decay |b_n| <= (q/(q-1)) q^(-n/2) for n <= 40;
//    (b) tail coefficients d k |t_k| < 0.5065 at level 3 for d k <= e^(d/2);
//    (c) level-3 minorant floor f(2dk) >= 0.2117/(dk) for k <= 3;
//    (d) theta(n,s,q) > 81/98 on the full valid grid with n <= 30.
//    The floor (c) is false at k = 2: the even-index minorant coefficient
//    collapses, and the check reports the exact counterexample.
bool crit8(std::ostream& os) {
  std::ostringstream fails;
  for (long long q : {3, 5}) {
    const Rational qr{BigInt(q)};
    const series::PowSeries b = series::BU(q, 40);
    for (unsigned n = 0; n <= 40; ++n) {
      // squared form of |b_n| <= (q/(q-1)) q^(-n/2)
      const Rational lhs = Rational(b.at(n) * b.at(n)) * pow_bigint(BigInt(q), n);
      const Rational rhs = Rational(qr * qr) / Rational((qr - 1) * (qr - 1));
      if (lhs > rhs) fails << " decay(q=" << q << ",n=" << n << ");";
    }

    const unsigned d = 8;  // level b=3; k <= 6 is exactly dk <= e^(d/2) = e^4
    const std::vector<Rational> t = series::t_coeffs(q, 3, 6);
    for (unsigned k = 1; k <= 6; ++k) {
      const Rational tk = t[k - 1] < 0 ? Rational(-t[k - 1]) : t[k - 1];
      if (!(Rational(Rational(d * k) * tk) < Rational(5065, 10000)))
        fails << " tail(q=" << q << ",k=" << k << ");";
    }

    const series::PowSeries f = series::FUb(q, 3, 24);
    for (unsigned k = 1; k <= 3; ++k) {
      const Rational floor_k = Rational(2117, 10000) / Rational(BigInt(d * k));
      if (f.at(d * k) < floor_k)
        fails << " minorant floor q=" << q << ", k=" << k << ": coefficient "
              << to_string(f.at(d * k)) << " < " << to_string(floor_k) << ";";
    }

    for (unsigned n = 4; n <= 30; ++n)
      for (unsigned s = (n + 1) / 2; 3 * s <= 2 * n; ++s)
        if (!(series::theta(n, s, q) > Rational(81, 98)))
          fails << " theta(n=" << n << ",s=" << s << ",q=" << q << ");";
  }
  if (!fails.str().empty()) {
    os << "violations:" << fails.str();
    return false;
  }
  os << "decay, tail, minorant floor, and theta bounds all hold";
  return true;
}

// 9. The two limit constructions produce overlapping certified enclosures at
//    tolerance 1e-6 for q in {3,5,9}, and the q=3 limit lies inside
//    (0.3601, 0.3704).
bool crit9(std::ostream& os) {
  const Rational tol(BigInt(1), BigInt(1000000));
  for (long long q : {3, 5, 9}) {
    const series::LimitValue prod = series::limit_RU_product(q, tol);
    const series::LimitValue sum = series::limit_RU_sum(q, tol);
    if (prod.lo() > sum.hi() || sum.lo() > prod.hi()) {
      os << "enclosures disjoint at q=" << q;
      return false;
    }
  }
  const series::LimitValue lim3 = series::limit_RU(3, tol);
  if (!(lim3.lo() > Rational(3601, 10000) && lim3.hi() < Rational(3704, 10000))) {
    os << "q=3 enclosure [" << decimal_string(lim3.lo(), 12) << ", "
       << decimal_string(lim3.hi(), 12) << "] not inside (0.3601, 0.3704)";
    return false;
  }
  os << "product and sum enclosures overlap for q in {3,5,9}; q=3 limit inside (0.3601, 0.3704)";
  return true;
}

// 10. Seeded statistical suite: sampler uniformity in the 96-element group,
//     Monte Carlo proportion interval containing the exact value, the
//     pair-family identity within three sigma, and zero commuting violations
//     in the generation pipeline.
bool crit10(std::ostream& os) {
  const mc::ExperimentReport uni = mc::uniformity_chi_square(2, 3, 100000, 13);
  if (uni.verdict != "consistent") {
    os << "uniformity p-value " << decimal_string(uni.estimate, 6) << " below 0.001";
    return false;
  }
  const mc::ExperimentReport iota = mc::estimate_iota(4, 3, 100000, 7);
  if (iota.verdict != "consistent") {
    os << "iota interval [" << decimal_string(iota.ci_lo, 6) << ", "
       << decimal_string(iota.ci_hi, 6) << "] misses " << to_string(*iota.reference);
    return false;
  }
  const mc::ExperimentReport lj = mc::estimate_ell_and_j(6, 4, 3, 10000, 9);
  if (lj.verdict != "consistent") {
    os << "pair-family identity outside three sigma: difference "
       << extra_value(lj, "difference") << ", sigma^2 " << extra_value(lj, "combined_sigma_sq");
    return false;
  }
  const mc::ExperimentReport pipe = mc::pipeline_demo(6, 3, 18, 100, 1);
  if (extra_value(pipe, "centralizer_violations") != "0") {
    os << "pipeline commuting violations: " << extra_value(pipe, "centralizer_violations");
    return false;
  }
  os << "uniformity p = " << decimal_string(uni.estimate, 4) << "; interval contains "
     << to_string(*iota.reference) << "; identity within 3 sigma; 0 commuting violations";
  return true;
}

using CritFn = bool (*)(std::ostream&);
const CritFn kCriteria[10] = {crit1, crit2, crit3, crit4, crit5,
                              crit6, crit7, crit8, crit9, crit10};

bool run_one(int k) {
  std::ostringstream msg;
  bool pass = false;
  try {
    pass = kCriteria[k - 1](msg);
  } catch (const std::exception& e) {
    msg << "exception: " << e.what();
  }
  std::cout << "criterion " << k << ": " << (pass ? "PASS" : "FAIL") << " -- " << msg.str()
            << std::endl;
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[i + 1]);
      ++i;
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 2;
    }
  }
  if (only < 0 || only > 10) {
    std::cerr << "criterion must be 1..10\n";
    return 2;
  }
  bool all_pass = true;
  if (only != 0) {
    all_pass = run_one(only);
  } else {
    for (int k = 1; k <= 10; ++k) all_pass = run_one(k) && all_pass;
  }
  return all_pass ? 0 : 1;
}
