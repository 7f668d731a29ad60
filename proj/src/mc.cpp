#include "unicent/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "unicent/counts.hpp"
#include "unicent/series.hpp"

namespace unicent::mc {

namespace {

using ugroup::UMat;

std::string rat_str(const Rational& r) { return unicent::to_string(r); }

nlohmann::ordered_json rational_json(const Rational& r) {
  return {{"exact", rat_str(r)}, {"decimal", decimal_string(r, 12)}};
}

Rational rat_of(std::uint64_t num, std::uint64_t den) {
  return Rational(BigInt(num), BigInt(den));
}

// shared per-block pricing for the centralizer order and the perfectly
// balanced inverter count of a regular semisimple element
void price_block(UStarType type, int m, const BigInt& q, BigInt& cz, BigInt& invc) {
  switch (type) {
    case UStarType::A:
      cz *= pow_bigint(q, 2 * m) - 1;
      invc *= pow_bigint(q, m) + 1;
      break;
    case UStarType::B:
      cz *= pow_bigint(q, 2 * m) - 1;
      invc *= pow_bigint(q, m) - 1;
      break;
    case UStarType::C: {
      const BigInt c = pow_bigint(q, m) + 1;
      cz *= c * c;
      invc *= c;
      break;
    }
    case UStarType::D: {
      const BigInt c = pow_bigint(q, 2 * m) - 1;
      cz *= c * c;
      invc *= c;
      break;
    }
    case UStarType::E:
      throw std::logic_error("price_block: degree-one blocks are priced separately");
  }
}

BlockPrices prices_from_blocks(const std::vector<UStarBlock>& blocks, const BigInt& q) {
  BlockPrices out{1, 1};
  for (const auto& blk : blocks)
    price_block(blk.type, blk.factor_degree, q, out.centralizer_order, out.inverter_count);
  return out;
}

// number of pairs (t, y) with c_y equal to the given admissible polynomial:
// conjugates of y times perfectly balanced inverters of y
BigInt pair_count_for(const UPoly& poly, const std::vector<UStarBlock>& blocks,
                      const BigInt& gu, const BigInt& q) {
  (void)poly;
  const BlockPrices pr = prices_from_blocks(blocks, q);
  if (gu % pr.centralizer_order != 0)
    throw std::logic_error("pair_count_for: centralizer order does not divide the group order");
  return gu / pr.centralizer_order * pr.inverter_count;
}

UMat diag_involution(ugroup::FormPtr form, int dim_plus) {
  std::vector<int> e(static_cast<size_t>(form->n) * form->n, 0);
  for (int i = 0; i < form->n; ++i)
    e[static_cast<size_t>(i) * form->n + i] = i < dim_plus ? 1 : form->ctx->neg(1);
  return ugroup::mat_from_entries(form, std::move(e));
}

UPoly x_squared_minus_one(FieldPtr ctx) {
  return upoly_from(ctx, {ctx->neg(1), 0, 1});
}

bool coprime_to_x2m1(const UPoly& f) {
  return gcd_poly(f, x_squared_minus_one(f.ctx)).deg() == 0;
}

std::string decimal_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

Rational sq(const Rational& x) { return x * x; }

// upper enclosure of sqrt(x) for x >= 0: sqrt(a/b) = sqrt(a*b)/b
Rational sqrt_upper(const Rational& x) {
  if (x == 0) return Rational(0);
  if (x < 0) throw std::invalid_argument("sqrt_upper: negative argument");
  const BigInt a = boost::multiprecision::numerator(x);
  const BigInt b = boost::multiprecision::denominator(x);
  return root_bounds(a * b, 2, 96).second / Rational(b);
}

const Rational& wilson_z_upper() {
  static const Rational z(BigInt("25758293035489004"), BigInt("10000000000000000"));
  return z;
}

void set_verdict(ExperimentReport& rep) {
  if (rep.reference) {
    rep.verdict =
        (rep.ci_lo <= *rep.reference && *rep.reference <= rep.ci_hi) ? "consistent" : "inconsistent";
  } else if (rep.lower_bound) {
    rep.verdict = rep.ci_hi >= *rep.lower_bound ? "consistent" : "inconsistent";
  } else {
    rep.verdict = "no-reference";
  }
}

void fill_binomial(ExperimentReport& rep, std::uint64_t successes, std::uint64_t trials) {
  rep.trials = trials;
  rep.successes = successes;
  rep.estimate = trials == 0 ? Rational(0) : rat_of(successes, trials);
  auto ci = wilson_99(successes, trials);
  rep.ci_lo = ci.first;
  rep.ci_hi = ci.second;
}

}  // namespace

std::mt19937_64 trial_rng(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<unsigned>(master & 0xffffffffu),
                    static_cast<unsigned>(master >> 32),
                    static_cast<unsigned>(stream & 0xffffffffu),
                    static_cast<unsigned>(stream >> 32),
                    static_cast<unsigned>(index & 0xffffffffu),
                    static_cast<unsigned>(index >> 32)};
  return std::mt19937_64(seq);
}

std::pair<Rational, Rational> wilson_99(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) return {Rational(0), Rational(1)};
  if (successes > trials) throw std::invalid_argument("wilson_99: successes exceed trials");
  const Rational z = wilson_z_upper();
  const Rational z2 = z * z;
  const Rational n{BigInt(trials)};
  const Rational p = rat_of(successes, trials);
  const Rational denom = 1 + z2 / n;
  const Rational center = (p + z2 / (2 * n)) / denom;
  const Rational disc = p * (1 - p) / n + z2 / (4 * n * n);
  const Rational half = z * sqrt_upper(disc) / denom;
  Rational lo = center - half, hi = center + half;
  if (lo < 0) lo = 0;
  if (hi > 1) hi = 1;
  return {lo, hi};
}

double chi_square_pvalue(double stat, int dof) {
  if (dof <= 0) throw std::invalid_argument("chi_square_pvalue: dof must be positive");
  if (stat <= 0) return 1.0;
  const double a = dof / 2.0, x = stat / 2.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    // series for the lower regularized gamma P(a, x); Q = 1 - P
    double term = 1.0 / a, sum = term, ap = a;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    const double p = sum * std::exp(-x + a * std::log(x) - lg);
    return std::min(1.0, std::max(0.0, 1.0 - p));
  }
  // Lentz continued fraction for the upper regularized gamma Q(a, x)
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  const double qv = std::exp(-x + a * std::log(x) - lg) * h;
  return std::min(1.0, std::max(0.0, qv));
}

FieldPtr field_for_q(const BigInt& q) {
  if (q < 3) throw std::invalid_argument("field_for_q: q must be an odd prime power >= 3");
  const Factorization f = factorize(q);
  if (f.factors.size() != 1 || f.factors[0].first == 2)
    throw std::invalid_argument("field_for_q: q must be an odd prime power");
  const int p = static_cast<int>(f.factors[0].first);
  const int k = static_cast<int>(f.factors[0].second);
  return FieldCtx::create(p, 2 * k);
}

BlockPrices lemma_prices(const UPoly& c_y, const BigInt& q) {
  std::vector<UPoly> fs;
  for (const auto& [f, e] : factorize_poly(c_y).factors) {
    if (e != 1)
      throw std::invalid_argument("lemma_prices: characteristic polynomial must be separable");
    fs.push_back(f);
  }
  auto take = [&fs](const UPoly& f) {
    auto it = std::find_if(fs.begin(), fs.end(), [&](const UPoly& g) { return g.c == f.c; });
    if (it == fs.end()) return false;
    fs.erase(it);
    return true;
  };
  BlockPrices out{1, 1};
  bool has_plus = false, has_minus = false;
  while (!fs.empty()) {
    const UPoly f = fs.front();
    std::vector<UPoly> orbit{f};
    for (const UPoly& g : {sigma_conj(f), star_conj(f), tilde_conj(f)}) {
      bool seen = false;
      for (const auto& h : orbit) seen = seen || h.c == g.c;
      if (!seen) orbit.push_back(g);
    }
    UPoly block = upoly_one(f.ctx);
    for (const auto& h : orbit) {
      block = mul(block, h);
      if (!take(h))
        throw std::invalid_argument(
            "lemma_prices: spectrum is not closed under inversion and conjugation");
    }
    if (classify_type(block) == UStarType::E) {
      if (eval(block, 1) == 0)
        has_plus = true;
      else if (eval(block, block.ctx->neg(1)) == 0)
        has_minus = true;
      else
        throw std::invalid_argument("lemma_prices: degree-one block with eigenvalue not +-1");
      out.centralizer_order *= q + 1;
    } else {
      price_block(classify_type(block), f.deg(), q, out.centralizer_order, out.inverter_count);
    }
  }
  if (has_plus && has_minus) out.inverter_count *= 2;
  return out;
}

OracleResult brute_delta(int n, const BigInt& q, std::uint64_t group_cap) {
  if (n <= 0 || n % 2 != 0)
    throw std::invalid_argument("brute_delta: dimension must be positive and even");
  FieldPtr ctx = field_for_q(q);
  const BigInt gu = ugroup::gu_order(n, q);

  BigInt poly_count = 0;
  for (const auto& item : enumerate_PiU(n, ctx))
    poly_count += pair_count_for(item.poly, item.blocks, gu, q);

  const unsigned half = static_cast<unsigned>(n / 2);
  const Rational series_rat = series::RU(q, half).at(half) * Rational(gu);
  if (boost::multiprecision::denominator(series_rat) != 1)
    throw std::logic_error("brute_delta: series value times group order is not an integer");
  const BigInt series_count = boost::multiprecision::numerator(series_rat);

  std::optional<BigInt> group_count;
  std::uint64_t stray_inverters = 0;  // inverters that are not perfectly balanced (expect 0)
  if (gu <= group_cap) {
    auto form = ugroup::UnitaryForm::identity(ctx, n);
    auto table = ugroup::enumerate_GU(form, 1, group_cap);
    std::vector<UMat> invs;
    for (int i = 0; i < table.size(); ++i) {
      UMat x = table.at(i);
      if (ugroup::is_involution(x)) invs.push_back(std::move(x));
    }
    BigInt cnt = 0;
    for (int i = 0; i < table.size(); ++i) {
      const UMat y = table.at(i);
      if (!ugroup::is_regular_semisimple(y)) continue;
      if (!coprime_to_x2m1(ugroup::char_poly(y))) continue;
      const UMat yi = ugroup::inverse(y);
      for (const UMat& t : invs)
        if (ugroup::mul(ugroup::mul(t, y), t) == yi) {
          if (ugroup::is_perfectly_balanced(t))
            ++cnt;
          else
            ++stray_inverters;
        }
    }
    group_count = cnt;
  }

  OracleResult out;
  out.name = "pair-count for dimension " + std::to_string(n) + ", q=" + q.str();
  out.counted = Rational(group_count ? *group_count : poly_count);
  out.predicted = Rational(series_count);
  out.equal = poly_count == series_count && (!group_count || *group_count == poly_count) &&
              stray_inverters == 0;
  out.detail = "polynomial route " + poly_count.str() + "; series route " + series_count.str();
  if (group_count)
    out.detail += "; exhaustive route " + group_count->str() + "; non-balanced inverters " +
                  std::to_string(stray_inverters);
  return out;
}

OracleResult brute_iota(int n, const BigInt& q, std::uint64_t group_cap) {
  if (n < 2) throw std::invalid_argument("brute_iota: dimension must be at least 2");
  FieldPtr ctx = field_for_q(q);
  const BigInt gu = ugroup::gu_order(n, q);
  if (gu > group_cap)
    throw ResourceLimitError("brute_iota: group order " + gu.str() + " exceeds cap");
  auto form = ugroup::UnitaryForm::identity(ctx, n);
  auto table = ugroup::enumerate_GU(form, 1, group_cap);

  std::vector<UMat> cls;
  for (int i = 0; i < table.size(); ++i) {
    UMat x = table.at(i);
    if (ugroup::is_involution(x) && ugroup::is_perfectly_balanced(x)) cls.push_back(std::move(x));
  }
  const int m = n / 2;
  const BigInt expected_class =
      gu / (ugroup::gu_order(m, q) * ugroup::gu_order(n - m, q));
  if (BigInt(cls.size()) != expected_class)
    throw std::logic_error("brute_iota: class size disagrees with the order formula");

  BigInt pairs = 0;
  for (const UMat& t : cls)
    for (const UMat& tp : cls)
      if (ugroup::is_regular_semisimple(ugroup::mul(t, tp))) ++pairs;

  OracleResult out;
  out.name = "balanced-pair proportion for dimension " + std::to_string(n) + ", q=" + q.str();
  out.counted = Rational(pairs) / Rational(BigInt(cls.size()) * BigInt(cls.size()));
  out.predicted = series::iota_U(static_cast<unsigned>(n), q);
  out.equal = out.counted == out.predicted;
  out.detail = "class size " + std::to_string(cls.size()) + "; product pairs " + pairs.str();
  return out;
}

std::vector<OracleResult> brute_inverter_counts(const BigInt& q,
                                                const std::vector<InverterCase>& cases,
                                                std::uint64_t group_cap) {
  FieldPtr ctx = field_for_q(q);
  std::vector<OracleResult> out;

  for (const auto& cs : cases) {
    UMat y;
    std::string label;
    std::optional<BigInt> attached_cz, attached_inv;
    if (cs.kind == "A" || cs.kind == "B" || cs.kind == "C" || cs.kind == "D") {
      const UStarType type = cs.kind == "A"   ? UStarType::A
                             : cs.kind == "B" ? UStarType::B
                             : cs.kind == "C" ? UStarType::C
                                              : UStarType::D;
      auto te = ugroup::construct_type_element(type, cs.m, ctx, 1);
      y = te.y;
      attached_cz = te.expected_centralizer_order;
      attached_inv = te.expected_inverter_count;
      label = "type " + cs.kind + " m=" + std::to_string(cs.m) + " q=" + q.str();
    } else if (cs.kind == "mixed") {
      // a two-dimensional block with both eigenvalues +1 and -1 appended to a
      // type C element: the inverter count picks up the doubling factor
      auto te = ugroup::construct_type_element(UStarType::C, cs.m, ctx, 1);
      const int n = te.y.n() + 2;
      auto form = ugroup::UnitaryForm::identity(ctx, n);
      auto form2 = ugroup::UnitaryForm::identity(ctx, 2);
      UMat e2 = ugroup::mat_from_entries(form2, {1, 0, 0, ctx->neg(1)});
      y = ugroup::block_diag(form, {te.y, e2});
      label = "mixed type C+E m=" + std::to_string(cs.m) + " q=" + q.str();
    } else {
      throw std::invalid_argument("brute_inverter_counts: unknown case kind " + cs.kind);
    }

    const int n = y.n();
    // move to the identity-Gram form so the exhaustive route can sample
    y = ugroup::to_form(y, ugroup::UnitaryForm::identity(ctx, n));
    const BigInt gu = ugroup::gu_order(n, q);
    const BlockPrices pr = lemma_prices(ugroup::char_poly(y), q);
    if (attached_cz && (*attached_cz != pr.centralizer_order || *attached_inv != pr.inverter_count))
      throw std::logic_error("brute_inverter_counts: constructed element disagrees with pricing");

    const auto filter = std::make_pair(n / 2, n - n / 2);
    BigInt solve_cz = BigInt(ugroup::centralizer_via_solve(y).size());
    BigInt solve_inv = BigInt(ugroup::inverting_involutions_via_solve(y, filter).size());
    std::optional<BigInt> table_cz, table_inv;
    if (gu <= group_cap) {
      auto table = ugroup::enumerate_GU(y.form, 1, group_cap);
      table_cz = BigInt(ugroup::brute_centralizer(y, table).size());
      table_inv = BigInt(ugroup::brute_inverting_involutions(y, table, filter).size());
    }

    OracleResult cz;
    cz.name = label + " centralizer order";
    cz.counted = Rational(solve_cz);
    cz.predicted = Rational(pr.centralizer_order);
    cz.equal = solve_cz == pr.centralizer_order && (!table_cz || *table_cz == solve_cz);
    cz.detail = "solve route " + solve_cz.str() +
                (table_cz ? "; table route " + table_cz->str() : "; table route skipped");
    out.push_back(std::move(cz));

    OracleResult iv;
    iv.name = label + " balanced inverting involutions";
    iv.counted = Rational(solve_inv);
    iv.predicted = Rational(pr.inverter_count);
    iv.equal = solve_inv == pr.inverter_count && (!table_inv || *table_inv == solve_inv);
    iv.detail = "solve route " + solve_inv.str() +
                (table_inv ? "; table route " + table_inv->str() : "; table route skipped");
    out.push_back(std::move(iv));
  }
  return out;
}

OracleResult brute_akl(int k, int l, int b, const BigInt& q) {
  if (b < 2) throw std::invalid_argument("brute_akl: level must be at least 2");
  if (k <= 0 || l < 0 || l > k) throw std::invalid_argument("brute_akl: need k >= l >= 0, k > 0");
  FieldPtr ctx = field_for_q(q);
  const BigInt gu = ugroup::gu_order(2 * k, q);
  const BigInt minus_omega2 = (BigInt(1) << (b - 1)) * two_part(q * q - 1);
  const BigInt minus_deg2 = BigInt(1) << (b + 1);

  // the two block pools are disjoint, so the admissible polynomials split as
  // products of one subset from each and the pair counts factorize
  std::vector<UStarBlock> minus_blocks, plus_blocks;
  for (int d = 2; d <= 2 * l; d += 2) {
    if (two_part(BigInt(d)) != minus_deg2) continue;
    UStarEnumOptions opts;
    opts.type = UStarType::D;
    opts.minus_only = true;
    for (auto& blk : enumerate_ustar_irreducibles(ctx, d, opts)) {
      if (omega2(blk.g) != minus_omega2)
        throw std::logic_error("brute_akl: maximal 2-adic root order disagrees with the level");
      minus_blocks.push_back(std::move(blk));
    }
  }
  for (int d = 2; d <= 2 * (k - l); d += 2) {
    for (auto& blk : enumerate_ustar_irreducibles(ctx, d)) {
      const bool deg_ok =
          blk.type != UStarType::D || two_part(BigInt(d)) <= (BigInt(1) << b);
      if (!deg_ok) continue;
      if (omega2(blk.g) > minus_omega2 / 2)
        throw std::logic_error("brute_akl: small-degree block with large 2-adic root order");
      plus_blocks.push_back(std::move(blk));
    }
  }

  // sum over subsets of distinct blocks with the prescribed total degree of
  // the per-polynomial pair-count weight prod(inverters / centralizer order)
  auto subset_weight = [&q](const std::vector<UStarBlock>& pool, int target) {
    Rational total = 0;
    std::function<void(size_t, int, Rational)> dfs = [&](size_t start, int remaining,
                                                         Rational w) {
      if (remaining == 0) {
        total += w;
        return;
      }
      for (size_t i = start; i < pool.size(); ++i) {
        if (pool[i].g.deg() > remaining) continue;
        BigInt cz = 1, invc = 1;
        price_block(pool[i].type, pool[i].factor_degree, q, cz, invc);
        dfs(i + 1, remaining - pool[i].g.deg(), Rational(w * invc) / Rational(cz));
      }
    };
    dfs(0, target, Rational(1));
    return total;
  };
  const Rational counted_rat =
      subset_weight(minus_blocks, 2 * l) * subset_weight(plus_blocks, 2 * (k - l)) *
      Rational(gu);
  if (boost::multiprecision::denominator(counted_rat) != 1)
    throw std::logic_error("brute_akl: counted pair total is not an integer");
  const BigInt counted = boost::multiprecision::numerator(counted_rat);

  const Rational r_part = k == l ? Rational(1)
                                 : series::RUb(q, static_cast<unsigned>(b),
                                               static_cast<unsigned>(k - l))
                                       .at(static_cast<unsigned>(k - l));
  const Rational g_part = l == 0 ? Rational(1)
                                 : series::GUb_minus(q, static_cast<unsigned>(b),
                                                     static_cast<unsigned>(l))
                                       .at(static_cast<unsigned>(l));
  const Rational predicted_rat = r_part * g_part * Rational(gu);
  if (boost::multiprecision::denominator(predicted_rat) != 1)
    throw std::logic_error("brute_akl: predicted pair count is not an integer");

  OracleResult out;
  out.name = "split pair-count k=" + std::to_string(k) + " l=" + std::to_string(l) +
             " level=" + std::to_string(b) + " q=" + q.str();
  out.counted = Rational(counted);
  out.predicted = predicted_rat;
  out.equal = out.counted == out.predicted;
  out.detail = "coefficient factors " + rat_str(r_part) + " * " + rat_str(g_part);
  return out;
}

ExperimentReport estimate_iota(int n, const BigInt& q, std::uint64_t trials,
                               std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("estimate_iota: dimension must be at least 2");
  FieldPtr ctx = field_for_q(q);
  auto form = ugroup::UnitaryForm::identity(ctx, n);
  const UMat rep = diag_involution(form, n / 2);

  std::uint64_t successes = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    auto rng = trial_rng(seed, 0, i);
    const UMat t = ugroup::conj(rep, ugroup::sample_uniform(form, rng));
    const UMat tp = ugroup::conj(rep, ugroup::sample_uniform(form, rng));
    if (ugroup::is_regular_semisimple(ugroup::mul(t, tp))) ++successes;
  }

  ExperimentReport report;
  report.experiment = "iota";
  report.params = {{"n", std::to_string(n)}, {"q", q.str()}};
  report.seed = seed;
  fill_binomial(report, successes, trials);
  report.reference = series::iota_U(static_cast<unsigned>(n), q);
  set_verdict(report);
  return report;
}

namespace {

ExperimentReport estimate_pi(int n, int s, const BigInt& q, std::uint64_t trials,
                             std::uint64_t seed, int sign) {
  if (n < 3 || 2 * s < n || 3 * s > 2 * n)
    throw std::invalid_argument("estimate_pi: need n >= 3 and n/2 <= s <= 2n/3");
  FieldPtr ctx = field_for_q(q);
  auto form = ugroup::UnitaryForm::identity(ctx, n);
  const UMat t = diag_involution(form, s);
  const auto basis = ugroup::eigenspace(t, sign);

  const Rational third(1, 3), two_thirds(2, 3);
  std::uint64_t successes = 0, commute_violations = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    auto rng = trial_rng(seed, sign > 0 ? 1 : 2, i);
    const UMat g = ugroup::sample_uniform(form, rng);
    const UMat y = ugroup::mul(t, ugroup::conj(t, g));
    const UMat z = ugroup::inv_of(y);
    if (ugroup::mul(z, t) != ugroup::mul(t, z)) {
      ++commute_violations;
      continue;
    }
    if (ugroup::is_identity(z)) continue;
    if (ugroup::is_balanced(ugroup::restrict_to(z, basis), third, two_thirds)) ++successes;
  }

  ExperimentReport report;
  report.experiment = sign > 0 ? "pi_plus" : "pi_minus";
  report.params = {{"n", std::to_string(n)}, {"s", std::to_string(s)}, {"q", q.str()}};
  report.seed = seed;
  fill_binomial(report, successes, trials);

  Rational alpha, beta;
  if (sign > 0) {
    const Rational a = 1 - Rational(2 * s, 3 * (n - s));
    alpha = a > 0 ? a : Rational(0);
    beta = 1 - Rational(s, 3 * (n - s));
  } else {
    alpha = third;
    beta = two_thirds;
  }
  report.extra.push_back({"window", "[" + rat_str(alpha) + ", " + rat_str(beta) + "]"});
  if (n >= 4) {
    report.lower_bound = series::ell_U_lower_coefficient(
        static_cast<unsigned>(n), static_cast<unsigned>(s), q, alpha, beta);
  } else {
    report.extra.push_back({"lower_bound", "outside the pair-family domain"});
  }
  report.extra.push_back({"commute_violations", std::to_string(commute_violations)});
  set_verdict(report);
  if (commute_violations != 0) report.verdict = "inconsistent";
  return report;
}

}  // namespace

ExperimentReport estimate_pi_plus(int n, int s, const BigInt& q, std::uint64_t trials,
                                  std::uint64_t seed) {
  return estimate_pi(n, s, q, trials, seed, +1);
}

ExperimentReport estimate_pi_minus(int n, int s, const BigInt& q, std::uint64_t trials,
                                   std::uint64_t seed) {
  return estimate_pi(n, s, q, trials, seed, -1);
}

ExperimentReport estimate_ell_and_j(int n, int s, const BigInt& q, std::uint64_t trials,
                                    std::uint64_t seed) {
  if (n < 4 || 2 * s < n || 3 * s > 2 * n || s >= n)
    throw std::invalid_argument("estimate_ell_and_j: need n/2 <= s <= 2n/3, s < n, n >= 4");
  if (trials == 0) throw std::invalid_argument("estimate_ell_and_j: need at least one trial");
  FieldPtr ctx = field_for_q(q);

  const Rational a0 = 1 - Rational(2 * s, 3 * (n - s));
  const Rational alpha = a0 > 0 ? a0 : Rational(0);
  const Rational beta = 1 - Rational(s, 3 * (n - s));
  const Rational theta =
      series::theta(static_cast<unsigned>(n), static_cast<unsigned>(s), q);
  const int m = n - s;
  const int h = 2 * s - n;

  // membership frequency over conjugate involution pairs of type (s, n-s)
  auto form = ugroup::UnitaryForm::identity(ctx, n);
  const UMat ts = diag_involution(form, s);
  std::uint64_t ell_successes = 0, table_violations = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    auto rng = trial_rng(seed, 1, i);
    const UMat t = ugroup::conj(ts, ugroup::sample_uniform(form, rng));
    const UMat tp = ugroup::conj(ts, ugroup::sample_uniform(form, rng));
    const auto chk = ugroup::check_LU_pair(t, tp, s, alpha, beta);
    if (!chk.member) continue;
    ++ell_successes;
    const bool table_ok = chk.h == h && chk.v1_nondegenerate &&
                          chk.dim_v1_cap_eplus_t == h && chk.k_plus + chk.k_minus == m &&
                          chk.dim_v2p_cap_eplus_t == chk.k_plus &&
                          chk.dim_v2p_cap_eminus_t == chk.k_plus &&
                          chk.dim_v2m_cap_eplus_t == chk.k_minus &&
                          chk.dim_v2m_cap_eminus_t == chk.k_minus &&
                          chk.z_on_eplus_t_third_balanced;
    if (!table_ok) ++table_violations;
  }
  const Rational ell_hat = rat_of(ell_successes, trials);

  // balanced-inverter frequency over sampled balanced-involution pairs in
  // dimension 2m, rescaled from class-pair measure to group measure
  auto form2 = ugroup::UnitaryForm::identity(ctx, 2 * m);
  const UMat rep2 = diag_involution(form2, m);
  std::uint64_t accepted = 0, j_successes = 0, coprime_violations = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    auto rng = trial_rng(seed, 2, i);
    const UMat t = ugroup::conj(rep2, ugroup::sample_uniform(form2, rng));
    const UMat tp = ugroup::conj(rep2, ugroup::sample_uniform(form2, rng));
    const UMat y = ugroup::mul(t, tp);
    if (!ugroup::is_regular_semisimple(y)) continue;
    ++accepted;
    if (!coprime_to_x2m1(ugroup::char_poly(y))) ++coprime_violations;
    const UMat z = ugroup::inv_of(y);
    if (!ugroup::is_identity(z) && ugroup::is_balanced(z, alpha, beta)) ++j_successes;
  }
  if (Rational(BigInt(accepted), BigInt(trials)) < Rational(1, 10000))
    throw std::runtime_error(
        "estimate_ell_and_j: rejection acceptance below 1e-4 (" + std::to_string(accepted) +
        "/" + std::to_string(trials) + " at n=" + std::to_string(n) +
        ", s=" + std::to_string(s) + ", q=" + q.str() + ")");

  const BigInt gu2m = ugroup::gu_order(2 * m, q);
  const BigInt gum = ugroup::gu_order(m, q);
  const Rational scale = Rational(gu2m) / Rational(gum * gum * gum * gum);
  const Rational pj = rat_of(j_successes, trials);
  const Rational j_hat = pj * scale;

  const Rational nrat{BigInt(trials)};
  const Rational sigma2 = ell_hat * (1 - ell_hat) / nrat +
                          sq(theta * scale) * pj * (1 - pj) / nrat;
  const Rational diff = ell_hat - theta * j_hat;
  const bool identity_ok = sq(diff) <= 9 * sigma2;

  ExperimentReport report;
  report.experiment = "ell_and_j";
  report.params = {{"n", std::to_string(n)}, {"s", std::to_string(s)}, {"q", q.str()}};
  report.seed = seed;
  fill_binomial(report, ell_successes, trials);
  report.verdict = identity_ok && table_violations == 0 && coprime_violations == 0
                       ? "consistent"
                       : "inconsistent";
  report.extra = {
      {"window", "[" + rat_str(alpha) + ", " + rat_str(beta) + "]"},
      {"theta", rat_str(theta)},
      {"j_estimate", rat_str(j_hat)},
      {"theta_times_j", rat_str(theta * j_hat)},
      {"difference", rat_str(diff)},
      {"combined_sigma_sq", rat_str(sigma2)},
      {"acceptance_rate", rat_str(rat_of(accepted, trials))},
      {"dimension_table_violations", std::to_string(table_violations)},
      {"coprime_violations", std::to_string(coprime_violations)},
  };
  return report;
}

ExperimentReport pipeline_demo(int n, const BigInt& q, int num_random,
                               std::uint64_t trials, std::uint64_t seed) {
  if (n < 2 || n > 9) throw std::invalid_argument("pipeline_demo: dimension must be in [2, 9]");
  if (num_random < 1) throw std::invalid_argument("pipeline_demo: need at least one element");
  FieldPtr ctx = field_for_q(q);
  auto form = ugroup::UnitaryForm::identity(ctx, n);

  std::uint64_t checked_trials = 0, successes = 0;
  std::uint64_t no_strong = 0, bray_violations = 0, spaces_checked = 0, spaces_skipped = 0,
                 spaces_contained = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    auto rng = trial_rng(seed, 3, i);
    auto found = ugroup::find_strong_involution(form, rng, 200);
    if (!found.t) {
      ++no_strong;
      continue;
    }
    const UMat t = *found.t;
    std::vector<std::vector<std::vector<int>>> bases = {ugroup::eigenspace(t, +1),
                                                        ugroup::eigenspace(t, -1)};
    std::vector<std::vector<UMat>> restricted(2);
    for (int j = 0; j < num_random; ++j) {
      const UMat g = ugroup::sample_uniform(form, rng);
      const UMat r = ugroup::bray_R(g, t);
      if (ugroup::mul(r, t) != ugroup::mul(t, r)) {
        ++bray_violations;
        continue;
      }
      for (int e = 0; e < 2; ++e) restricted[e].push_back(ugroup::restrict_to(r, bases[e]));
    }
    bool any_checked = false, all_ok = true;
    for (int e = 0; e < 2; ++e) {
      if (restricted[e].empty() || bases[e].empty()) continue;
      try {
        const bool ok = ugroup::contains_SU(restricted[e], 100000);
        ++spaces_checked;
        any_checked = true;
        if (ok)
          ++spaces_contained;
        else
          all_ok = false;
      } catch (const ResourceLimitError&) {
        ++spaces_skipped;
      }
    }
    if (any_checked) {
      ++checked_trials;
      if (all_ok) ++successes;
    }
  }

  ExperimentReport report;
  report.experiment = "pipeline";
  report.params = {{"n", std::to_string(n)},
                   {"q", q.str()},
                   {"num_random", std::to_string(num_random)}};
  report.seed = seed;
  fill_binomial(report, successes, checked_trials);
  report.extra = {
      {"requested_trials", std::to_string(trials)},
      {"no_strong_involution", std::to_string(no_strong)},
      {"centralizer_violations", std::to_string(bray_violations)},
      {"eigenspaces_checked", std::to_string(spaces_checked)},
      {"eigenspaces_skipped", std::to_string(spaces_skipped)},
      {"eigenspaces_containing", std::to_string(spaces_contained)},
  };
  set_verdict(report);
  if (bray_violations != 0) report.verdict = "inconsistent";
  return report;
}

ExperimentReport uniformity_chi_square(int n, const BigInt& q, std::uint64_t trials,
                                       std::uint64_t seed) {
  FieldPtr ctx = field_for_q(q);
  const BigInt gu = ugroup::gu_order(n, q);
  if (gu > 5000)
    throw ResourceLimitError("uniformity_chi_square: group order " + gu.str() + " exceeds cap");
  if (trials == 0) throw std::invalid_argument("uniformity_chi_square: need trials");
  auto form = ugroup::UnitaryForm::identity(ctx, n);
  auto table = ugroup::enumerate_GU(form, 1, 5000);

  std::vector<std::uint64_t> hits(static_cast<size_t>(table.size()), 0);
  for (std::uint64_t i = 0; i < trials; ++i) {
    auto rng = trial_rng(seed, 4, i);
    const int idx = table.index_of(ugroup::sample_uniform(form, rng));
    if (idx < 0) throw std::logic_error("uniformity_chi_square: sample outside the group");
    ++hits[static_cast<size_t>(idx)];
  }
  const double expected = static_cast<double>(trials) / table.size();
  double stat = 0;
  for (std::uint64_t h : hits) {
    const double d = static_cast<double>(h) - expected;
    stat += d * d / expected;
  }
  const double p = chi_square_pvalue(stat, table.size() - 1);

  ExperimentReport report;
  report.experiment = "uniformity";
  report.params = {{"n", std::to_string(n)}, {"q", q.str()}};
  report.seed = seed;
  report.trials = trials;
  report.successes = trials;
  report.estimate = Rational(p);
  report.ci_lo = report.estimate;
  report.ci_hi = report.estimate;
  report.lower_bound = Rational(1, 1000);
  report.extra = {{"cells", std::to_string(table.size())},
                  {"statistic", decimal_double(stat)}};
  set_verdict(report);
  return report;
}

std::string ExperimentReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = "experiment-report/1";
  j["experiment"] = experiment;
  nlohmann::ordered_json p = nlohmann::ordered_json::object();
  for (const auto& [k, v] : params) p[k] = v;
  j["params"] = p;
  j["seed"] = seed;
  j["trials"] = trials;
  j["successes"] = successes;
  j["estimate"] = rational_json(estimate);
  j["ci99"] = {{"lo", rational_json(ci_lo)}, {"hi", rational_json(ci_hi)}};
  j["reference"] = reference ? rational_json(*reference) : nlohmann::ordered_json(nullptr);
  j["lower_bound"] = lower_bound ? rational_json(*lower_bound) : nlohmann::ordered_json(nullptr);
  j["verdict"] = verdict;
  nlohmann::ordered_json e = nlohmann::ordered_json::object();
  for (const auto& [k, v] : extra) e[k] = v;
  j["extra"] = e;
  return j.dump(2);
}

std::string OracleResult::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = "oracle-result/1";
  j["name"] = name;
  j["counted"] = rational_json(counted);
  j["predicted"] = rational_json(predicted);
  j["equal"] = equal;
  j["detail"] = detail;
  return j.dump(2);
}

}  // namespace unicent::mc
