#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "unicent/counts.hpp"
#include "unicent/mc.hpp"
#include "unicent/series.hpp"
#include "unicent/ugroup.hpp"
#include "unicent/upoly.hpp"

using namespace unicent;
using nlohmann::ordered_json;

namespace {

struct Config {
  std::vector<long long> qs{3};
  long long q = 3;
  unsigned rmax = 4;
  unsigned T = 20;
  int b = -1;
  unsigned n_max = 40;
  int n = 0;
  int s = -1;
  int num_random = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t cap = 10000000;
  std::string format = "table";
  std::string which;
  std::string suite = "all";
  std::string experiment;
  std::string field_spec;
  std::string poly;
};

std::string rat_line(const Rational& r) {
  return to_string(r) + " (" + decimal_string(r, 12) + ")";
}

// Certified enclosures can carry numerators with hundreds of digits; widen
// them outward to denominator 10^15 so the endpoints stay printable while the
// interval still contains the limit.
series::LimitValue rounded_outward(const series::LimitValue& lim) {
  const BigInt den = pow_bigint(BigInt(10), 15);
  auto floor_to = [&den](const Rational& x) {
    const BigInt num = numerator(Rational(x * den));
    const BigInt d = denominator(Rational(x * den));
    BigInt fl = num / d;
    if (fl * d > num) --fl;
    return Rational(fl, den);
  };
  auto ceil_to = [&den](const Rational& x) {
    const BigInt num = numerator(Rational(x * den));
    const BigInt d = denominator(Rational(x * den));
    BigInt ce = num / d;
    if (ce * d < num) ++ce;
    return Rational(ce, den);
  };
  const Rational lo = floor_to(lim.lo());
  const Rational hi = ceil_to(lim.hi());
  series::LimitValue out;
  out.value = Rational((lo + hi) / 2);
  out.radius = Rational((hi - lo) / 2);
  return out;
}

BigInt require_odd_prime_power(long long q) {
  if (q < 3) throw std::invalid_argument("q must be an odd prime power >= 3");
  const Factorization f = factorize(BigInt(q));
  if (f.factors.size() != 1 || f.factors[0].first == 2)
    throw std::invalid_argument("q must be an odd prime power, got " + std::to_string(q));
  return BigInt(q);
}

void print_count_report(const counts::CountReport& rep, const std::string& format) {
  if (format == "json")
    std::cout << rep.to_json() << "\n";
  else if (format == "csv")
    std::cout << rep.to_csv();
  else
    std::cout << rep.to_table();
}

int run_counts(const Config& cfg) {
  std::vector<BigInt> qs;
  for (long long q : cfg.qs) qs.push_back(require_odd_prime_power(q));
  const counts::CountReport rep = counts::check_count_identities(qs, cfg.rmax);
  print_count_report(rep, cfg.format);
  return rep.all_pass() ? 0 : 1;
}

void print_coeff_table(const series::CoeffTable& tab, const std::string& format) {
  if (format == "json") {
    std::cout << tab.to_json() << "\n";
    return;
  }
  if (format == "csv") {
    std::cout << tab.to_csv();
    return;
  }
  std::cout << tab.name << ", q = " << tab.q.str() << "\n";
  for (size_t i = 0; i < tab.idx.size(); ++i)
    std::cout << "  n=" << tab.idx[i] << "  " << rat_line(tab.vals[i]) << "\n";
}

void print_limit_rows(const std::vector<std::pair<std::string, series::LimitValue>>& rows,
                      const std::string& format) {
  if (format == "json") {
    ordered_json j;
    j["schema"] = "limit-table/1";
    j["rows"] = ordered_json::array();
    for (const auto& [name, lim] : rows) {
      ordered_json row;
      row["name"] = name;
      row["lo"] = {{"exact", to_string(lim.lo())}, {"decimal", decimal_string(lim.lo(), 12)}};
      row["hi"] = {{"exact", to_string(lim.hi())}, {"decimal", decimal_string(lim.hi(), 12)}};
      j["rows"].push_back(row);
    }
    std::cout << j.dump(2) << "\n";
    return;
  }
  for (const auto& [name, lim] : rows) {
    if (format == "csv")
      std::cout << name << "," << to_string(lim.lo()) << "," << decimal_string(lim.lo(), 12)
                << "," << to_string(lim.hi()) << "," << decimal_string(lim.hi(), 12) << "\n";
    else
      std::cout << name << ": [" << rat_line(lim.lo()) << ", " << rat_line(lim.hi()) << "]\n";
  }
}

int run_series(const Config& cfg) {
  const BigInt q = require_odd_prime_power(cfg.q);
  if (cfg.T == 0 || cfg.T > series::kMaxOrder)
    throw std::invalid_argument("truncation order must be in [1, " +
                                std::to_string(series::kMaxOrder) + "]");
  auto need_b = [&cfg]() -> unsigned {
    if (cfg.b < 1) throw std::invalid_argument("this series needs --b >= 1");
    return static_cast<unsigned>(cfg.b);
  };
  if (cfg.which == "RU") {
    print_coeff_table(series::coeff_table(series::RU(q, cfg.T), "RU"), cfg.format);
  } else if (cfg.which == "RUb") {
    const unsigned b = need_b();
    print_coeff_table(
        series::coeff_table(series::RUb(q, b, cfg.T), "RU_" + std::to_string(b)), cfg.format);
  } else if (cfg.which == "FUb") {
    const unsigned b = need_b();
    print_coeff_table(
        series::coeff_table(series::FUb(q, b, cfg.T), "F_" + std::to_string(b)), cfg.format);
  } else if (cfg.which == "TUbinv") {
    const unsigned b = need_b();
    print_coeff_table(
        series::coeff_table(series::TUb_inv(q, b, cfg.T), "Tinv_" + std::to_string(b)),
        cfg.format);
  } else if (cfg.which == "iota") {
    const counts::CountReport rep = series::check_iota_bounds({q}, cfg.n_max);
    print_count_report(rep, cfg.format);
    return rep.all_pass() ? 0 : 1;
  } else if (cfg.which == "limits") {
    const Rational tol(BigInt(1), BigInt(1000000));
    std::vector<std::pair<std::string, series::LimitValue>> rows;
    rows.emplace_back("pair-count coefficient limit", rounded_outward(series::limit_RU(q, tol)));
    auto [even_lim, odd_lim] = series::iota_limits(q, tol);
    rows.emplace_back("balanced-pair proportion limit (even)", rounded_outward(even_lim));
    rows.emplace_back("balanced-pair proportion limit (odd)", rounded_outward(odd_lim));
    print_limit_rows(rows, cfg.format);
  } else {
    throw std::invalid_argument("unknown series: " + cfg.which);
  }
  return 0;
}

struct VerifyLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

void oracle_line(std::vector<VerifyLine>& lines, const mc::OracleResult& r) {
  lines.push_back({r.name, r.equal,
                   "counted " + to_string(r.counted) + ", predicted " + to_string(r.predicted)});
}

void report_lines(std::vector<VerifyLine>& lines, const counts::CountReport& rep,
                  const std::string& prefix) {
  lines.push_back({prefix, rep.all_pass(),
                   std::to_string(rep.claims.size()) + " claims, " +
                       std::to_string(rep.failures()) + " failures"});
}

void verify_counts(std::vector<VerifyLine>& lines, std::uint64_t cap) {
  report_lines(lines, counts::check_count_identities({3, 5, 7, 9}, 6),
               "counting-function identities, q in {3,5,7,9}, r <= 6");
  for (long long q : {3, 5})
    report_lines(lines, counts::cross_validate_enumeration(BigInt(q), 3, cap),
                 "closed forms vs enumeration, q = " + std::to_string(q) + ", r <= 3");
}

void verify_series(std::vector<VerifyLine>& lines) {
  for (long long q : {3, 5, 9}) {
    const series::PowSeries r1 = series::RU_route1(q, 32);
    const series::PowSeries r2 = series::RU_route2(q, 32);
    const series::PowSeries r3 = series::RU_route3(q, 32);
    bool same = true;
    for (unsigned n = 0; n <= 32; ++n)
      same = same && r1.at(n) == r2.at(n) && r1.at(n) == r3.at(n);
    lines.push_back({"pair-series route agreement, q = " + std::to_string(q), same,
                     "three constructions to order 32"});
  }
  for (unsigned b = 1; b <= 4; ++b) {
    bool ok = true;
    std::string detail = "partial product vs inverted tail, order 16";
    try {
      series::RUb(3, b, 16);
    } catch (const std::logic_error& e) {
      ok = false;
      detail = e.what();
    }
    lines.push_back({"level-" + std::to_string(b) + " split identity, q = 3", ok, detail});
  }
  report_lines(lines, series::check_series_bounds({3, 5}, 40),
               "series coefficient bounds, q in {3,5}");
  report_lines(lines, series::check_iota_bounds({3, 5, 7, 9}, 40),
               "balanced-pair proportion bounds, q in {3,5,7,9}, n <= 40");
  const series::LimitValue lim = series::limit_RU(3, Rational(BigInt(1), BigInt(1000000)));
  lines.push_back({"pair-count limit enclosure, q = 3", lim.radius > 0,
                   "[" + decimal_string(lim.lo(), 12) + ", " + decimal_string(lim.hi(), 12) + "]"});
}

void verify_oracle(std::vector<VerifyLine>& lines) {
  oracle_line(lines, mc::brute_delta(2, 3));
  oracle_line(lines, mc::brute_delta(4, 3));
  oracle_line(lines, mc::brute_delta(2, 5));
  oracle_line(lines, mc::brute_iota(2, 3));
  oracle_line(lines, mc::brute_iota(3, 3));
  oracle_line(lines, mc::brute_iota(2, 5));
  for (const auto& r : mc::brute_inverter_counts(3, {{"C", 1}, {"D", 1}, {"A", 2}, {"mixed", 1}}))
    oracle_line(lines, r);
  for (const auto& r : mc::brute_inverter_counts(5, {{"B", 1}}))
    oracle_line(lines, r);
  oracle_line(lines, mc::brute_akl(2, 2, 2, 3));
  oracle_line(lines, mc::brute_akl(2, 0, 2, 3));
  oracle_line(lines, mc::brute_akl(4, 4, 2, 3));
}

int run_verify(const Config& cfg) {
  std::vector<VerifyLine> lines;
  if (cfg.suite == "counts" || cfg.suite == "all") verify_counts(lines, cfg.cap);
  if (cfg.suite == "series" || cfg.suite == "all") verify_series(lines);
  if (cfg.suite == "oracle" || cfg.suite == "all") verify_oracle(lines);
  if (lines.empty()) throw std::invalid_argument("unknown suite: " + cfg.suite);

  size_t failures = 0;
  for (const auto& l : lines)
    if (!l.pass) ++failures;

  if (cfg.format == "json") {
    ordered_json j;
    j["schema"] = "verify-report/1";
    j["suite"] = cfg.suite;
    j["checks"] = ordered_json::array();
    for (const auto& l : lines)
      j["checks"].push_back({{"name", l.name}, {"pass", l.pass}, {"detail", l.detail}});
    j["failures"] = failures;
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& l : lines)
      std::cout << (l.pass ? "[ ok ] " : "[FAIL] ") << l.name << " -- " << l.detail << "\n";
    std::cout << lines.size() << " checks, " << failures << " failures\n";
  }
  return failures == 0 ? 0 : 1;
}

void print_report(const mc::ExperimentReport& rep, const std::string& format) {
  if (format == "json") {
    std::cout << rep.to_json() << "\n";
    return;
  }
  if (format == "csv") {
    std::cout << "field,value\n";
    std::cout << "experiment," << rep.experiment << "\n";
    for (const auto& [k, v] : rep.params) std::cout << k << "," << v << "\n";
    std::cout << "seed," << rep.seed << "\n";
    std::cout << "trials," << rep.trials << "\n";
    std::cout << "successes," << rep.successes << "\n";
    std::cout << "estimate," << to_string(rep.estimate) << "\n";
    std::cout << "ci99_lo," << to_string(rep.ci_lo) << "\n";
    std::cout << "ci99_hi," << to_string(rep.ci_hi) << "\n";
    if (rep.reference) std::cout << "reference," << to_string(*rep.reference) << "\n";
    if (rep.lower_bound) std::cout << "lower_bound," << to_string(*rep.lower_bound) << "\n";
    std::cout << "verdict," << rep.verdict << "\n";
    for (const auto& [k, v] : rep.extra) std::cout << k << "," << v << "\n";
    return;
  }
  std::cout << "experiment: " << rep.experiment << "\n";
  for (const auto& [k, v] : rep.params) std::cout << "  " << k << ": " << v << "\n";
  std::cout << "  seed: " << rep.seed << "\n";
  std::cout << "  trials: " << rep.trials << "  successes: " << rep.successes << "\n";
  std::cout << "  estimate: " << rat_line(rep.estimate) << "\n";
  std::cout << "  ci99: [" << rat_line(rep.ci_lo) << ", " << rat_line(rep.ci_hi) << "]\n";
  if (rep.reference) std::cout << "  reference: " << rat_line(*rep.reference) << "\n";
  if (rep.lower_bound) std::cout << "  lower bound: " << rat_line(*rep.lower_bound) << "\n";
  std::cout << "  verdict: " << rep.verdict << "\n";
  for (const auto& [k, v] : rep.extra) std::cout << "  " << k << ": " << v << "\n";
}

int run_mc(const Config& cfg) {
  const BigInt q = require_odd_prime_power(cfg.q);
  if (cfg.n < 1) throw std::invalid_argument("--n is required and must be positive");
  mc::ExperimentReport rep;
  if (cfg.experiment == "iota") {
    rep = mc::estimate_iota(cfg.n, q, cfg.trials, cfg.seed);
  } else if (cfg.experiment == "pi_plus" || cfg.experiment == "pi_minus") {
    if (cfg.s < 0) throw std::invalid_argument("--s is required for this experiment");
    rep = cfg.experiment == "pi_plus"
              ? mc::estimate_pi_plus(cfg.n, cfg.s, q, cfg.trials, cfg.seed)
              : mc::estimate_pi_minus(cfg.n, cfg.s, q, cfg.trials, cfg.seed);
  } else if (cfg.experiment == "ell_j") {
    if (cfg.s < 0) throw std::invalid_argument("--s is required for this experiment");
    rep = mc::estimate_ell_and_j(cfg.n, cfg.s, q, cfg.trials, cfg.seed);
  } else if (cfg.experiment == "pipeline") {
    const int nr = cfg.num_random > 0
                       ? cfg.num_random
                       : static_cast<int>(std::ceil(10.0 * std::log(cfg.n)));
    rep = mc::pipeline_demo(cfg.n, q, nr, cfg.trials, cfg.seed);
  } else if (cfg.experiment == "uniformity") {
    rep = mc::uniformity_chi_square(cfg.n, q, cfg.trials, cfg.seed);
  } else {
    throw std::invalid_argument("unknown experiment: " + cfg.experiment);
  }
  print_report(rep, cfg.format);
  return rep.verdict == "inconsistent" ? 1 : 0;
}

int run_classify(const Config& cfg) {
  FieldPtr ctx = FieldCtx::parse_spec(cfg.field_spec);
  const UPoly f = parse_upoly(ctx, cfg.poly);
  if (f.deg() < 1) throw std::invalid_argument("polynomial must have positive degree");

  const bool closed = is_ustar_closed(f);
  const bool irred = closed && is_ustar_irreducible(f);
  std::optional<char> type;
  std::optional<int> factor_degree;
  std::optional<BigInt> om, om2;
  bool minus_member = false;
  if (irred) {
    const UStarType t = classify_type(f);
    type = type_letter(t);
    factor_degree = factorize_poly(f).factors[0].first.deg();
    om = omega(f);
    om2 = omega2(f);
    minus_member =
        t == UStarType::D &&
        *om2 == two_part(pow_bigint(BigInt(ctx->Q), static_cast<unsigned>(*factor_degree)) - 1);
  }

  if (cfg.format == "json") {
    ordered_json j;
    j["schema"] = "classify/1";
    j["field"] = ctx->spec_string();
    j["poly"] = upoly_str(f);
    j["ustar_closed"] = closed;
    j["ustar_irreducible"] = irred;
    if (irred) {
      j["type"] = std::string(1, *type);
      j["factor_degree"] = *factor_degree;
      j["omega"] = om->str();
      j["omega2"] = om2->str();
      j["minus_member"] = minus_member;
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "field: " << ctx->spec_string() << "\n";
    std::cout << "poly: " << upoly_str(f) << "\n";
    std::cout << "ustar_closed: " << (closed ? "yes" : "no") << "\n";
    std::cout << "ustar_irreducible: " << (irred ? "yes" : "no") << "\n";
    if (irred) {
      std::cout << "type: " << *type << "\n";
      std::cout << "factor_degree: " << *factor_degree << "\n";
      std::cout << "omega: " << om->str() << "\n";
      std::cout << "omega2: " << om2->str() << "\n";
      std::cout << "minus_member: " << (minus_member ? "yes" : "no") << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact and statistical toolkit for involution pairs in finite unitary groups"};
  app.require_subcommand(1);
  Config cfg;
  if (const char* env = std::getenv("UNICENT_CAP")) cfg.cap = std::strtoull(env, nullptr, 10);

  auto* counts_cmd =
      app.add_subcommand("counts", "polynomial-count tables with identity checks");
  counts_cmd->add_option("--q", cfg.qs, "odd prime powers")->capture_default_str();
  counts_cmd->add_option("--rmax", cfg.rmax, "largest factor degree")->capture_default_str();
  counts_cmd->add_option("--format", cfg.format, "table|csv|json")->capture_default_str();

  auto* series_cmd = app.add_subcommand("series", "generating-function coefficient tables");
  series_cmd->add_option("--q", cfg.q, "odd prime power")->capture_default_str();
  series_cmd->add_option("--T", cfg.T, "truncation order")->capture_default_str();
  series_cmd->add_option("--which", cfg.which, "RU|RUb|FUb|TUbinv|iota|limits")->required();
  series_cmd->add_option("--b", cfg.b, "dyadic level for RUb/FUb/TUbinv");
  series_cmd->add_option("--n", cfg.n_max, "largest dimension for iota")->capture_default_str();
  series_cmd->add_option("--format", cfg.format, "table|csv|json")->capture_default_str();

  auto* verify_cmd = app.add_subcommand("verify", "aggregated exact check suites");
  verify_cmd->add_option("--suite", cfg.suite, "counts|series|oracle|all")
      ->capture_default_str();
  verify_cmd->add_option("--cap", cfg.cap, "enumeration cap (default from UNICENT_CAP)")
      ->capture_default_str();
  verify_cmd->add_option("--format", cfg.format, "table|json")->capture_default_str();

  auto* mc_cmd = app.add_subcommand("mc", "seeded statistical experiments");
  mc_cmd->add_option("--exp", cfg.experiment, "iota|pi_plus|pi_minus|ell_j|pipeline|uniformity")
      ->required();
  mc_cmd->add_option("--n", cfg.n, "dimension")->required();
  mc_cmd->add_option("--q", cfg.q, "odd prime power")->capture_default_str();
  mc_cmd->add_option("--s", cfg.s, "positive eigenspace dimension (pi_*, ell_j)");
  mc_cmd->add_option("--num-random", cfg.num_random,
                     "random elements per pipeline trial (default ceil(10 log n))");
  mc_cmd->add_option("--trials", cfg.trials, "trial count")->required();
  mc_cmd->add_option("--seed", cfg.seed, "master seed")->required();
  mc_cmd->add_option("--format", cfg.format, "table|csv|json")->capture_default_str();

  auto* classify_cmd = app.add_subcommand("classify", "orbit type of a polynomial");
  classify_cmd->add_option("--field", cfg.field_spec, "field spec p^k:c0,c1,...,ck")->required();
  classify_cmd->add_option("--poly", cfg.poly, "polynomial, e.g. \"X^2+1\"")->required();
  classify_cmd->add_option("--format", cfg.format, "table|json")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (counts_cmd->parsed()) return run_counts(cfg);
    if (series_cmd->parsed()) return run_series(cfg);
    if (verify_cmd->parsed()) return run_verify(cfg);
    if (mc_cmd->parsed()) return run_mc(cfg);
    if (classify_cmd->parsed()) return run_classify(cfg);
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "aborted: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
