#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include <json.hpp>

#include "unicent/mc.hpp"
#include "unicent/series.hpp"

using namespace unicent;
namespace mc = unicent::mc;

namespace {

Rational rat(long long n, long long d) { return Rational(BigInt(n), BigInt(d)); }

std::string extra_value(const mc::ExperimentReport& rep, const std::string& key) {
  for (const auto& [k, v] : rep.extra)
    if (k == key) return v;
  return "<missing>";
}

}  // namespace

TEST_CASE("confidence interval and p-value machinery") {
  // empty data: the interval is the whole unit range
  auto empty = mc::wilson_99(0, 0);
  CHECK(empty.first == 0);
  CHECK(empty.second == 1);
  CHECK_THROWS_AS(mc::wilson_99(3, 2), std::invalid_argument);

  // 50/100: symmetric bracket around the center, near [0.376, 0.624]
  auto mid = mc::wilson_99(50, 100);
  CHECK(mid.first > rat(37, 100));
  CHECK(mid.first < rat(38, 100));
  CHECK(mid.second > rat(62, 100));
  CHECK(mid.second < rat(63, 100));
  CHECK(mid.first + mid.second == 1);  // exact symmetry at p = 1/2

  // one-sided edges clamp to the unit interval
  auto zero = mc::wilson_99(0, 50);
  CHECK(zero.first == 0);
  CHECK(zero.second > 0);
  auto full = mc::wilson_99(50, 50);
  CHECK(full.second == 1);
}

TEST_CASE("p-value machinery") {
  // dof 2: survival function is exp(-x/2)
  for (double x : {0.5, 1.0, 3.21, 8.0}) {
    const double p = mc::chi_square_pvalue(x, 2);
    CHECK(std::fabs(p - std::exp(-x / 2)) < 1e-12);
  }
  // 95th percentile of chi-square with 1 dof
  CHECK(std::fabs(mc::chi_square_pvalue(3.8414588206941236, 1) - 0.05) < 1e-9);
  CHECK(mc::chi_square_pvalue(0.0, 5) == 1.0);
  CHECK(mc::chi_square_pvalue(10.0, 4) > mc::chi_square_pvalue(20.0, 4));
  CHECK_THROWS_AS(mc::chi_square_pvalue(1.0, 0), std::invalid_argument);

  // deterministic, stream-separated generators
  auto r1 = mc::trial_rng(1, 2, 3);
  auto r2 = mc::trial_rng(1, 2, 3);
  auto r3 = mc::trial_rng(1, 2, 4);
  const auto a = r1(), b = r2(), c = r3();
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("field contexts from q") {
  auto f3 = mc::field_for_q(3);
  CHECK(f3->Q == 9);
  auto f9 = mc::field_for_q(9);
  CHECK(f9->Q == 81);
  CHECK(f9->q_sub == 9);
  CHECK_THROWS_AS(mc::field_for_q(4), std::invalid_argument);
  CHECK_THROWS_AS(mc::field_for_q(6), std::invalid_argument);
}

TEST_CASE("centralizer and inverter prices from the spectrum") {
  const BigInt q = 3;
  auto ctx = mc::field_for_q(q);

  // single 2x2 rotation block in dimension 2
  auto pc = mc::lemma_prices(parse_upoly(ctx, "X^2+1"), q);
  CHECK(pc.centralizer_order == 16);
  CHECK(pc.inverter_count == 4);

  // both eigenvalues +-1 in dimension 2: doubling factor applies
  auto pe = mc::lemma_prices(parse_upoly(ctx, "X^2+2"), q);  // (X-1)(X+1)
  CHECK(pe.centralizer_order == 16);
  CHECK(pe.inverter_count == 2);

  // the documented four-dimensional mixed spectrum
  auto pm = mc::lemma_prices(mul(parse_upoly(ctx, "X^2+1"), parse_upoly(ctx, "X^2+2")), q);
  CHECK(pm.centralizer_order == 256);
  CHECK(pm.inverter_count == 8);

  // B-type pair over q = 5
  auto ctx5 = mc::field_for_q(5);
  auto pb = mc::lemma_prices(mul(upoly_linear(ctx5, 2), upoly_linear(ctx5, 3)), BigInt(5));
  CHECK(pb.centralizer_order == 24);
  CHECK(pb.inverter_count == 4);

  // rejected inputs: repeated factor, spectrum not closed under inversion
  CHECK_THROWS_AS(mc::lemma_prices(mul(upoly_linear(ctx, 1), upoly_linear(ctx, 1)), q),
                  std::invalid_argument);
  int gen = 0;
  for (int a = 2; a < ctx->Q; ++a) {
    UPoly f = upoly_linear(ctx, a);
    if (omega(f) == 8) {
      gen = a;
      break;
    }
  }
  CHECK_THROWS_AS(mc::lemma_prices(upoly_linear(ctx, gen), q), std::invalid_argument);
}

TEST_CASE("pair counts by three routes") {
  auto d23 = mc::brute_delta(2, 3);
  CHECK(d23.equal);
  CHECK(d23.counted == Rational(24));
  CHECK(d23.predicted == Rational(24));
  CHECK(d23.detail.find("exhaustive route 24") != std::string::npos);

  auto d43 = mc::brute_delta(4, 3);  // too large to enumerate, two routes remain
  CHECK(d43.equal);
  CHECK(d43.detail.find("exhaustive") == std::string::npos);

  auto d25 = mc::brute_delta(2, 5);
  CHECK(d25.equal);
  CHECK(d25.detail.find("exhaustive route") != std::string::npos);
  CHECK(d25.detail.find("non-balanced inverters 0") != std::string::npos);

  CHECK_THROWS_AS(mc::brute_delta(3, 3), std::invalid_argument);
}

TEST_CASE("balanced involution pair proportion") {
  auto i23 = mc::brute_iota(2, 3);
  CHECK(i23.equal);
  CHECK(i23.counted == rat(2, 3));

  auto i33 = mc::brute_iota(3, 3);
  CHECK(i33.equal);
  CHECK(i33.counted == rat(8, 21));
  CHECK(i33.detail.find("class size 63") != std::string::npos);

  auto i25 = mc::brute_iota(2, 5);
  CHECK(i25.equal);
  CHECK(i25.counted == i25.predicted);

  CHECK_THROWS_AS(mc::brute_iota(4, 3), ResourceLimitError);

  nlohmann::json j = nlohmann::json::parse(i33.to_json());
  CHECK(j["schema"] == "oracle-result/1");
  CHECK(j["equal"] == true);
  CHECK(j["counted"]["exact"] == "8/21");
}

TEST_CASE("inverter counts for constructed spectra") {
  std::vector<mc::InverterCase> cases{{"C", 1}, {"D", 1}, {"A", 2}, {"mixed", 1}};
  auto res = mc::brute_inverter_counts(3, cases);
  REQUIRE(res.size() == 8);
  for (const auto& r : res) CHECK(r.equal);

  CHECK(res[0].counted == Rational(16));  // C m=1: centralizer
  CHECK(res[1].counted == Rational(4));   // C m=1: inverters
  CHECK(res[0].detail.find("table route 16") != std::string::npos);
  CHECK(res[2].counted == Rational(64));  // D m=1: centralizer
  CHECK(res[3].counted == Rational(8));   // D m=1: inverters
  CHECK(res[3].detail.find("table route skipped") != std::string::npos);
  CHECK(res[4].counted == Rational(80));  // A m=2: centralizer
  CHECK(res[5].counted == Rational(10));  // A m=2: inverters
  CHECK(res[6].counted == Rational(256));  // mixed: centralizer
  CHECK(res[7].counted == Rational(8));    // mixed: inverters with doubling

  auto res5 = mc::brute_inverter_counts(5, {{"B", 1}});
  REQUIRE(res5.size() == 2);
  CHECK(res5[0].equal);
  CHECK(res5[1].equal);
  CHECK(res5[0].counted == Rational(24));
  CHECK(res5[1].counted == Rational(4));

  CHECK_THROWS_AS(mc::brute_inverter_counts(3, {{"Z", 1}}), std::invalid_argument);
}

TEST_CASE("level-split pair counts") {
  auto a22 = mc::brute_akl(2, 2, 2, 3);
  CHECK(a22.equal);
  CHECK(a22.counted == 0);
  CHECK(a22.predicted == 0);

  auto a20 = mc::brute_akl(2, 0, 2, 3);
  CHECK(a20.equal);
  CHECK(a20.counted > 0);

  auto a31 = mc::brute_akl(3, 1, 2, 3);
  CHECK(a31.equal);
  CHECK(a31.counted == 0);

  auto a44 = mc::brute_akl(4, 4, 2, 3);
  CHECK(a44.equal);
  CHECK(a44.counted == Rational(ugroup::gu_order(8, 3) / 16));

  CHECK_THROWS_AS(mc::brute_akl(2, 1, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(mc::brute_akl(1, 2, 2, 3), std::invalid_argument);
}

TEST_CASE("uniform-pair frequency experiments") {
  auto r = mc::estimate_iota(2, 3, 2000, 11);
  CHECK(r.verdict == "consistent");
  CHECK(*r.reference == rat(2, 3));
  CHECK(r.ci_lo <= r.estimate);
  CHECK(r.estimate <= r.ci_hi);
  CHECK(r.to_json() == mc::estimate_iota(2, 3, 2000, 11).to_json());

  auto r3 = mc::estimate_iota(3, 3, 2000, 17);
  CHECK(r3.verdict == "consistent");
  CHECK(*r3.reference == rat(8, 21));

  auto r4 = mc::estimate_iota(4, 3, 20000, 7);
  CHECK(r4.verdict == "consistent");
  CHECK(r4.ci_hi - r4.ci_lo < rat(2, 100));

  nlohmann::json j = nlohmann::json::parse(r4.to_json());
  CHECK(j["schema"] == "experiment-report/1");
  CHECK(j["experiment"] == "iota");
  CHECK(j["params"]["n"] == "4");
  CHECK(j["trials"] == 20000);
  CHECK(j["verdict"] == "consistent");
  CHECK(j["reference"]["exact"] == to_string(series::iota_U(4, 3)));
}

TEST_CASE("coverage across replications") {
  int covered = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto rep = mc::estimate_iota(2, 3, 400, seed);
    if (rep.verdict == "consistent") ++covered;
  }
  CHECK(covered >= 37);
}

TEST_CASE("eigenspace balance frequencies") {
  auto pp = mc::estimate_pi_plus(6, 4, 3, 4000, 5);
  CHECK(pp.verdict == "consistent");
  CHECK(extra_value(pp, "commute_violations") == "0");
  CHECK(extra_value(pp, "window") == "[0, 1/3]");
  REQUIRE(pp.lower_bound.has_value());
  CHECK(*pp.lower_bound == 0);  // the coefficient window at these parameters is empty
  CHECK(pp.estimate > 0);

  auto pm = mc::estimate_pi_minus(6, 4, 3, 4000, 5);
  CHECK(pm.verdict == "consistent");
  CHECK(extra_value(pm, "window") == "[1/3, 2/3]");
  REQUIRE(pm.lower_bound.has_value());
  CHECK(*pm.lower_bound >= 0);

  auto p42 = mc::estimate_pi_plus(4, 2, 3, 2000, 3);
  CHECK(p42.verdict == "consistent");
  CHECK(extra_value(p42, "window") == "[1/3, 2/3]");

  CHECK_THROWS_AS(mc::estimate_pi_plus(6, 5, 3, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(mc::estimate_pi_plus(6, 2, 3, 10, 1), std::invalid_argument);
}

TEST_CASE("pair family versus balanced-inverter identity") {
  auto rep = mc::estimate_ell_and_j(6, 4, 3, 3000, 9);
  CHECK(rep.verdict == "consistent");
  CHECK(extra_value(rep, "dimension_table_violations") == "0");
  CHECK(extra_value(rep, "coprime_violations") == "0");
  CHECK(extra_value(rep, "theta") == to_string(series::theta(6, 4, 3)));
  CHECK(rep.estimate > 0);
  CHECK(rep.to_json() == mc::estimate_ell_and_j(6, 4, 3, 3000, 9).to_json());

  CHECK_THROWS_AS(mc::estimate_ell_and_j(6, 6, 3, 10, 1), std::invalid_argument);
}

TEST_CASE("generation pipeline") {
  auto rep = mc::pipeline_demo(4, 3, 12, 10, 2);
  CHECK(rep.verdict == "no-reference");
  CHECK(extra_value(rep, "centralizer_violations") == "0");
  CHECK(extra_value(rep, "eigenspaces_skipped") == "0");
  CHECK(rep.trials >= 8);  // strong involutions found in nearly every trial
  CHECK(rep.successes >= 1);

  auto rep6 = mc::pipeline_demo(6, 3, 18, 6, 4);
  CHECK(rep6.verdict == "no-reference");
  CHECK(extra_value(rep6, "centralizer_violations") == "0");
  CHECK(std::stoi(extra_value(rep6, "eigenspaces_checked")) >= 1);
}

TEST_CASE("sampler uniformity") {
  auto rep = mc::uniformity_chi_square(2, 3, 20000, 13);
  CHECK(rep.verdict == "consistent");
  CHECK(*rep.lower_bound == rat(1, 1000));
  CHECK(extra_value(rep, "cells") == "96");
  CHECK(rep.to_json() == mc::uniformity_chi_square(2, 3, 20000, 13).to_json());

  CHECK_THROWS_AS(mc::uniformity_chi_square(4, 3, 100, 1), ResourceLimitError);
}
