#include "unicent/series.hpp"

#include <json.hpp>

#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace unicent {
namespace series {

namespace {

// Rational upper bound for e, used in the exp(d/2) window guards.
const Rational kEUpper = Rational(BigInt(271829), BigInt(100000));

void require_compat(const PowSeries& f, const PowSeries& g) {
  if (f.order() != g.order())
    throw std::invalid_argument("series truncation orders differ");
  if (f.q() != g.q()) throw std::invalid_argument("series parameter values differ");
}

BigInt qpow(const BigInt& q, unsigned r) { return pow_bigint(q, r); }

// q^r - (-1)^r
BigInt q_pm(const BigInt& q, unsigned r) {
  BigInt v = pow_bigint(q, r);
  return r % 2 == 0 ? BigInt(v - 1) : BigInt(v + 1);
}

bool same_coeffs(const PowSeries& f, const PowSeries& g) { return f.coeffs() == g.coeffs(); }

PowSeries one(unsigned T, const BigInt& q) { return PowSeries::constant(T, q, Rational(1)); }

// (1 + u^r c)^e folded into acc.
PowSeries fold_term(PowSeries acc, unsigned r, const Rational& c, const Rational& e) {
  return mul(acc, pow_rational(one_plus_term(acc.order(), acc.q(), r, c), e));
}

}  // namespace

PowSeries::PowSeries(unsigned T, BigInt q) : T_(T), q_(std::move(q)), c_(T + 1, Rational(0)) {
  if (T > kMaxOrder) throw std::invalid_argument("truncation order exceeds the supported maximum");
}

PowSeries PowSeries::constant(unsigned T, const BigInt& q, const Rational& c0) {
  PowSeries f(T, q);
  f.c_[0] = c0;
  return f;
}

const Rational& PowSeries::at(unsigned n) const {
  if (n > T_) throw std::out_of_range("coefficient index beyond truncation order");
  return c_[n];
}

void PowSeries::set(unsigned n, const Rational& v) {
  if (n > T_) throw std::out_of_range("coefficient index beyond truncation order");
  c_[n] = v;
}

PowSeries add(const PowSeries& f, const PowSeries& g) {
  require_compat(f, g);
  PowSeries h(f.order(), f.q());
  for (unsigned n = 0; n <= f.order(); ++n) h.set(n, f.at(n) + g.at(n));
  return h;
}

PowSeries sub(const PowSeries& f, const PowSeries& g) {
  require_compat(f, g);
  PowSeries h(f.order(), f.q());
  for (unsigned n = 0; n <= f.order(); ++n) h.set(n, f.at(n) - g.at(n));
  return h;
}

PowSeries mul(const PowSeries& f, const PowSeries& g) {
  require_compat(f, g);
  PowSeries h(f.order(), f.q());
  for (unsigned n = 0; n <= f.order(); ++n) {
    Rational acc(0);
    for (unsigned k = 0; k <= n; ++k) {
      if (f.at(k) == 0 || g.at(n - k) == 0) continue;
      acc += f.at(k) * g.at(n - k);
    }
    h.set(n, acc);
  }
  return h;
}

PowSeries scale(const PowSeries& f, const Rational& c) {
  PowSeries h(f.order(), f.q());
  for (unsigned n = 0; n <= f.order(); ++n) h.set(n, f.at(n) * c);
  return h;
}

PowSeries reciprocal(const PowSeries& f) {
  if (f.at(0) == 0) throw std::domain_error("reciprocal needs a nonzero constant term");
  PowSeries h(f.order(), f.q());
  h.set(0, Rational(1) / f.at(0));
  for (unsigned n = 1; n <= f.order(); ++n) {
    Rational acc(0);
    for (unsigned k = 1; k <= n; ++k) {
      if (f.at(k) == 0) continue;
      acc += f.at(k) * h.at(n - k);
    }
    h.set(n, -acc / f.at(0));
  }
  return h;
}

PowSeries pow_int(const PowSeries& f, long long e) {
  if (e < 0) return reciprocal(pow_int(f, -e));
  PowSeries r = one(f.order(), f.q());
  PowSeries base = f;
  unsigned long long k = static_cast<unsigned long long>(e);
  while (k != 0) {
    if (k & 1) r = mul(r, base);
    k >>= 1;
    if (k != 0) base = mul(base, base);
  }
  return r;
}

PowSeries pow_rational(const PowSeries& f, const Rational& alpha) {
  if (f.at(0) != 1) throw std::domain_error("pow_rational needs constant term exactly 1");
  unsigned T = f.order();
  PowSeries h(T, f.q());
  h.set(0, Rational(1));
  // h = f^alpha satisfies h' f = alpha h f'; equating u^(n-1) coefficients
  // gives n h_n = sum_j ((alpha+1) j - n) f_j h_{n-j}.
  for (unsigned n = 1; n <= T; ++n) {
    Rational acc(0);
    for (unsigned j = 1; j <= n; ++j) {
      if (f.at(j) == 0) continue;
      acc += ((alpha + 1) * j - n) * f.at(j) * h.at(n - j);
    }
    h.set(n, acc / n);
  }
  return h;
}

PowSeries one_plus_term(unsigned T, const BigInt& q, unsigned r, const Rational& c) {
  PowSeries f(T, q);
  f.set(0, Rational(1));
  if (r >= 1 && r <= T) f.set(r, c);
  return f;
}

// --- the three product expressions -------------------------------------------

PowSeries RU_route1(const BigInt& q, unsigned T) {
  PowSeries f = fold_term(one(T, q), 1, Rational(BigInt(1), BigInt(q + 1)), Rational(-1));
  for (unsigned r = 1; r <= T; ++r)
    f = fold_term(std::move(f), r, Rational(BigInt(1), q_pm(q, r)), Rational(counts::N(q, r)));
  return f;
}

namespace {

PowSeries S0_series(const BigInt& q, unsigned T) {
  PowSeries a = fold_term(one(T, q), 1, Rational(BigInt(1), BigInt(q - 1)), Rational(-1));
  return fold_term(std::move(a), 1, Rational(BigInt(1), BigInt(q + 1)), Rational(-3));
}

}  // namespace

PowSeries RU_route2(const BigInt& q, unsigned T) {
  const BigInt q2 = q * q;
  PowSeries f = S0_series(q, T);
  if (T >= 2)
    f = fold_term(std::move(f), 2, Rational(BigInt(1), BigInt(q2 - 1)), Rational(BigInt(3), BigInt(2)));
  for (unsigned r = 1; r <= T; ++r) {
    f = fold_term(std::move(f), r, Rational(BigInt(1), BigInt(qpow(q, r) - 1)),
                  Rational(counts::Nstar(q2, r)) / 2);
    f = fold_term(std::move(f), r, Rational(BigInt(1), BigInt(qpow(q, r) + 1)),
                  Rational(counts::Nsim(q, r)));
    if (2 * r <= T)
      f = fold_term(std::move(f), 2 * r, Rational(BigInt(1), BigInt(qpow(q, 2 * r) - 1)),
                    (Rational(counts::Mstar(q2, r)) - Rational(counts::Nsim(q, r))) / 2);
  }
  return f;
}

PowSeries AU(const BigInt& q, unsigned T) {
  PowSeries num = one_plus_term(T, q, 1, Rational(BigInt(-1), q));
  PowSeries den1 = one_plus_term(T, q, 1, Rational(-1));
  PowSeries den2 = one_plus_term(T, q, 1, Rational(BigInt(1), BigInt(q + 1)));
  return mul(num, reciprocal(mul(den1, den2)));
}

PowSeries BU(const BigInt& q, unsigned T) {
  PowSeries f = one(T, q);
  for (unsigned r = 1; r <= T; ++r) {
    const Rational c(BigInt(1), BigInt(qpow(q, r) * q_pm(q, r)));
    // 1 - u^r (u^r - (-1)^r) / (q^r (q^r - (-1)^r))
    PowSeries base(T, q);
    base.set(0, Rational(1));
    base.set(r, r % 2 == 0 ? c : -c);
    if (2 * r <= T) base.set(2 * r, -c);
    f = mul(f, pow_rational(base, Rational(counts::N(q, r))));
  }
  return f;
}

PowSeries RU_route3(const BigInt& q, unsigned T) { return mul(AU(q, T), BU(q, T)); }

Rational alpha_q(const BigInt& q) { return Rational(BigInt(q * q - 1), BigInt(q * q + 2 * q)); }

Rational a_coeff(const BigInt& q, unsigned n) {
  const Rational c(BigInt(2 * q + 1), BigInt(q * (q + 2) * pow_bigint(q + 1, n)));
  return n % 2 == 0 ? alpha_q(q) + c : alpha_q(q) - c;
}

namespace {

PowSeries ru_checked(const BigInt& q, unsigned T) {
  PowSeries r1 = RU_route1(q, T);
  PowSeries r2 = RU_route2(q, T);
  PowSeries r3 = RU_route3(q, T);
  if (!same_coeffs(r1, r2) || !same_coeffs(r1, r3))
    throw std::logic_error("product expressions for the pair proportion series disagree");
  return r1;
}

const PowSeries& ru_cached(const BigInt& q, unsigned T) {
  static std::map<std::pair<std::string, unsigned>, PowSeries> cache;
  const auto key = std::make_pair(q.str(), T);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, ru_checked(q, T)).first;
  return it->second;
}

PowSeries gub_build(const BigInt& q, unsigned b, unsigned T) {
  if (b > 31) throw std::invalid_argument("dyadic level out of range");
  const BigInt q2 = q * q;
  if (b == 0) {
    PowSeries f = one(T, q);
    for (unsigned r = 1; r <= T; ++r) {
      f = fold_term(std::move(f), r, Rational(BigInt(1), BigInt(qpow(q, r) - 1)),
                    Rational(counts::A(q, r)));
      f = fold_term(std::move(f), r, Rational(BigInt(1), BigInt(qpow(q, r) + 1)),
                    Rational(BigInt(counts::B(q, r) + counts::C(q, r))));
    }
    PowSeries g = S0_series(q, T);
    for (unsigned r = 1; r <= T; ++r) {
      g = fold_term(std::move(g), r, Rational(BigInt(1), BigInt(qpow(q, r) - 1)),
                    Rational(counts::Nstar(q2, r)) / 2);
      g = fold_term(std::move(g), r, Rational(BigInt(1), BigInt(qpow(q, r) + 1)),
                    Rational(counts::Nsim(q, r)));
    }
    if (!same_coeffs(f, g))
      throw std::logic_error("level-0 factor series expressions disagree");
    return f;
  }
  PowSeries f = one(T, q);
  for (unsigned long long m = 1; (m << b) <= T; m += 2) {
    const unsigned deg = static_cast<unsigned>(m << b);
    const unsigned half = static_cast<unsigned>(m << (b - 1));
    f = fold_term(std::move(f), deg, Rational(BigInt(1), BigInt(qpow(q, deg) - 1)),
                  Rational(counts::D(q, half)));
  }
  if (b == 1) {
    PowSeries g = one(T, q);
    if (T >= 2)
      g = fold_term(std::move(g), 2, Rational(BigInt(1), BigInt(q2 - 1)),
                    Rational(BigInt(3), BigInt(2)));
    for (unsigned long long m = 1; 2 * m <= T; m += 2) {
      const unsigned deg = static_cast<unsigned>(2 * m);
      const unsigned mm = static_cast<unsigned>(m);
      g = fold_term(std::move(g), deg, Rational(BigInt(1), BigInt(qpow(q, deg) - 1)),
                    (Rational(counts::Mstar(q2, mm)) - Rational(counts::Nsim(q, mm))) / 2);
    }
    if (!same_coeffs(f, g))
      throw std::logic_error("level-1 factor series expressions disagree");
  }
  return f;
}

const PowSeries& gub_cached(const BigInt& q, unsigned b, unsigned T) {
  static std::map<std::tuple<std::string, unsigned, unsigned>, PowSeries> cache;
  const auto key = std::make_tuple(q.str(), b, T);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, gub_build(q, b, T)).first;
  return it->second;
}

}  // namespace

PowSeries RU(const BigInt& q, unsigned T) { return ru_cached(q, T); }

PowSeries GUb(const BigInt& q, unsigned b, unsigned T) { return gub_cached(q, b, T); }

PowSeries TUb_inv(const BigInt& q, unsigned b, unsigned T) {
  if (b < 1) throw std::invalid_argument("tail inverse needs level b >= 1");
  if (b > 31) throw std::invalid_argument("dyadic level out of range");
  PowSeries f = one(T, q);
  for (unsigned long long m = 1; (m << b) <= T; ++m) {
    const unsigned deg = static_cast<unsigned>(m << b);
    const unsigned half = static_cast<unsigned>(m << (b - 1));
    f = fold_term(std::move(f), deg, Rational(BigInt(1), BigInt(qpow(q, deg) - 1)),
                  -Rational(counts::D(q, half)));
  }
  return f;
}

PowSeries RUb(const BigInt& q, unsigned b, unsigned T) {
  if (b < 1) throw std::invalid_argument("partial product needs level b >= 1");
  PowSeries f = one(T, q);
  for (unsigned k = 0; k < b && (1ull << k) <= T; ++k) f = mul(f, gub_cached(q, k, T));
  PowSeries g = mul(ru_cached(q, T), TUb_inv(q, b, T));
  if (!same_coeffs(f, g))
    throw std::logic_error("partial product and inverted-tail expressions disagree");
  return f;
}

std::vector<Rational> t_coeffs(const BigInt& q, unsigned b, unsigned kmax) {
  if (b < 1) throw std::invalid_argument("tail coefficients need level b >= 1");
  const unsigned long long T = (1ull << b) * kmax;
  if (T > kMaxOrder)
    throw std::invalid_argument("tail coefficient window exceeds the supported order");
  PowSeries ti = TUb_inv(q, b, static_cast<unsigned>(T));
  std::vector<Rational> out;
  out.reserve(kmax);
  for (unsigned k = 1; k <= kmax; ++k)
    out.push_back(-ti.at(static_cast<unsigned>((1ull << b) * k)));
  return out;
}

PowSeries FUb(const BigInt& q, unsigned b, unsigned T) {
  if (b < 1) throw std::invalid_argument("minorant series needs level b >= 1");
  if (b > 31) throw std::invalid_argument("dyadic level out of range");
  const BigInt q2 = q * q;
  PowSeries f = one(T, q);
  for (unsigned long long m = 1; (m << b) <= T; m += 2) {
    const unsigned deg = static_cast<unsigned>(m << b);
    const unsigned half = static_cast<unsigned>(m << (b - 1));
    const BigInt e = (counts::N(q2, half) + 7) / 8;  // ceil(N/8)
    f = fold_term(std::move(f), deg, Rational(BigInt(1), BigInt(qpow(q, deg) - 1)), Rational(e));
  }
  return f;
}

PowSeries GUb_minus(const BigInt& q, unsigned b, unsigned T, const ExactExponentSource& source) {
  if (b < 1) throw std::invalid_argument("this series needs level b >= 1");
  if (b > 30) throw std::invalid_argument("dyadic level out of range");
  PowSeries f = one(T, q);
  for (unsigned long long m = 1; (m << b) <= T; m += 2) {
    const unsigned deg = static_cast<unsigned>(m << b);
    const unsigned poly_deg = static_cast<unsigned>(m << (b + 1));
    std::optional<BigInt> e;
    if (source) e = source(poly_deg);
    if (!e) {
      const counts::NUminusValue nv = counts::NU_minus(q, poly_deg);
      if (nv.exact) e = nv.value;
    }
    if (!e)
      throw std::domain_error("no exact exponent available for degree " +
                              std::to_string(poly_deg));
    f = fold_term(std::move(f), deg, Rational(BigInt(1), BigInt(qpow(q, deg) - 1)), Rational(*e));
  }
  return f;
}

// --- limits -------------------------------------------------------------------

LimitValue limit_RU_product(const BigInt& q, const Rational& tol) {
  if (tol <= 0) throw std::invalid_argument("tolerance must be positive");
  const Rational pref =
      (1 - Rational(BigInt(1), q)) / (1 + Rational(BigInt(1), BigInt(q + 1)));
  Rational lo = pref, hi = pref;
  for (unsigned r = 1; r <= 41; r += 2) {
    const BigInt qr = qpow(q, r);
    const BigInt den = qr * (qr + 1);
    const BigInt n_r = counts::N(q, r);
    // choose exact exponentiation while the result stays small, otherwise use
    // the certified bracket 1 - x <= (1 - a)^N <= 1 - x + x^2/2 with x = N a
    const unsigned long long den_bits = boost::multiprecision::msb(den) + 1;
    if (n_r * den_bits <= 200000) {
      const Rational factor =
          pow_rational_int(1 - Rational(BigInt(2), den), n_r.convert_to<long long>());
      lo *= factor;
      hi *= factor;
    } else {
      const Rational x = Rational(BigInt(2 * n_r), den);
      lo *= 1 - x;
      hi *= 1 - x + x * x / 2;
    }
    // remaining odd degrees contribute a factor in [1 - gap, 1]
    const Rational gap = Rational(BigInt(2 * q * q),
                                  BigInt(BigInt(r + 2) * qpow(q, r + 2) * (q * q - 1)));
    if (gap >= 1) continue;
    const Rational enc_lo = lo * (1 - gap);
    const Rational radius = (hi - enc_lo) / 2;
    if (radius <= tol) return LimitValue{(hi + enc_lo) / 2, radius};
  }
  throw ResourceLimitError("limit tolerance not reachable within the truncation budget");
}

LimitValue limit_RU_sum(const BigInt& q, const Rational& tol) {
  if (tol <= 0) throw std::invalid_argument("tolerance must be positive");
  const auto rb = root_bounds(q, 2, 48);
  const Rational& s_lo = rb.first;
  const Rational a = alpha_q(q);
  for (unsigned T = 16; T <= kMaxOrder; T += 8) {
    const Rational tail =
        Rational(q, BigInt(q - 1)) / (pow_rational_int(s_lo, T) * (s_lo - 1));
    const Rational radius = a * tail;
    if (radius > tol) continue;
    PowSeries b = BU(q, T);
    Rational sum(0);
    for (unsigned n = 0; n <= T; ++n) sum += b.at(n);
    return LimitValue{a * sum, radius};
  }
  throw ResourceLimitError("limit tolerance not reachable within the truncation budget");
}

LimitValue limit_RU(const BigInt& q, const Rational& tol) {
  const LimitValue p = limit_RU_product(q, tol);
  const LimitValue s = limit_RU_sum(q, tol);
  const Rational diff = p.value > s.value ? p.value - s.value : s.value - p.value;
  if (diff > p.radius + s.radius)
    throw std::logic_error("limit routes produce disjoint enclosures");
  return p.radius <= s.radius ? p : s;
}

Rational epsilon_n_upper(const BigInt& q, unsigned n) {
  if (n < 1) throw std::invalid_argument("deviation bound needs n >= 1");
  const auto rb = root_bounds(q, 2, 48);
  const Rational& s_lo = rb.first;
  const Rational& s_hi = rb.second;
  const Rational num = alpha_q(q) * s_hi + 2;
  const Rational q_half_pow = (n - 1) % 2 == 0
                                  ? Rational(pow_bigint(q, (n - 1) / 2))
                                  : Rational(pow_bigint(q, (n - 2) / 2)) * s_lo;
  return num / (q_half_pow * (q - 1) * (s_lo - 1));
}

// --- balanced-window lower bounds ----------------------------------------------

Rational j_U_lower_coefficient(unsigned m, const BigInt& q, const Rational& alpha,
                               const Rational& beta) {
  if (m < 1) throw std::invalid_argument("dimension parameter must be positive");
  if (m > kMaxOrder) throw std::invalid_argument("dimension parameter exceeds the supported order");
  if (!(alpha >= 0 && alpha < beta && beta <= 1))
    throw std::invalid_argument("need 0 <= alpha < beta <= 1");
  const unsigned T = m;
  Rational total(0);
  for (unsigned b = 2; (1ull << b) <= m; ++b) {
    PowSeries f = FUb(q, b, T);
    PowSeries ft(T, q);
    for (unsigned l = 0; l <= T; ++l) {
      if (f.at(l) == 0) continue;
      const Rational deg(l);
      if (Rational(m) * (1 - beta) <= deg && deg <= Rational(m) * (1 - alpha)) ft.set(l, f.at(l));
    }
    total += mul(RUb(q, b, T), ft).at(m);
  }
  return total;
}

Rational j_U_lower_closed_form(unsigned m, const BigInt& q, const Rational& alpha,
                               const Rational& beta, unsigned b) {
  if (b < 3) throw std::invalid_argument("closed-form bound needs level b >= 3");
  if (b > 31) throw std::invalid_argument("dyadic level out of range");
  if (m < 1) throw std::invalid_argument("dimension parameter must be positive");
  if (!(alpha >= 0 && alpha < beta && beta < 1))
    throw std::invalid_argument("need 0 <= alpha < beta < 1");
  const unsigned long long d = 1ull << b;
  // domain guard m <= e^(d/2), checked against a rational upper bound for e
  if (Rational(m) > pow_rational_int(kEUpper, static_cast<long long>(d / 2)))
    throw std::domain_error("dimension parameter exceeds the exp(d/2) window");
  const Rational ratio = (1 - alpha) / (1 - beta);
  const Rational lg = log_lower(ratio);
  return Rational(BigInt(5228), BigInt(100000)) / d *
         (lg - Rational(d) / (Rational(m) * (1 - beta)));
}

Rational phi_U(unsigned m, const BigInt& q) {
  Rational p(1);
  for (unsigned i = 1; i <= m; ++i) {
    const Rational t(BigInt(1), pow_bigint(q, i));
    p *= i % 2 == 0 ? Rational(1 - t) : Rational(1 + t);  // 1 - (-1)^i q^{-i}
  }
  return p;
}

LimitValue phi_U_limit(const BigInt& q, const Rational& tol) {
  if (tol <= 0) throw std::invalid_argument("tolerance must be positive");
  for (unsigned M = 8; M <= 256; M += 8) {
    const Rational P = phi_U(M, q);
    // the remaining factors multiply to something in [1 - S, 1/(1 - S)]
    const Rational S = Rational(BigInt(1), BigInt(pow_bigint(q, M) * (q - 1)));
    if (S >= 1) continue;
    const Rational lo = P * (1 - S);
    const Rational hi = P / (1 - S);
    const Rational radius = (hi - lo) / 2;
    if (radius <= tol) return LimitValue{(hi + lo) / 2, radius};
  }
  throw ResourceLimitError("limit tolerance not reachable within the truncation budget");
}

Rational theta(unsigned n, unsigned s, const BigInt& q) {
  if (!(3 * s <= 2 * n && 2 * s >= n && n >= 4))
    throw std::invalid_argument("need 2n/3 >= s >= n/2 >= 2");
  const Rational top = phi_U(n - s, q) * phi_U(n - s, q) * phi_U(s, q) * phi_U(s, q);
  return top / (phi_U(n, q) * phi_U(2 * s - n, q));
}

Rational ell_U_lower_coefficient(unsigned n, unsigned s, const BigInt& q, const Rational& alpha,
                                 const Rational& beta) {
  return theta(n, s, q) * j_U_lower_coefficient(n - s, q, alpha, beta);
}

Rational ell_U_lower_closed_form(unsigned n, unsigned s, const BigInt& q, const Rational& alpha,
                                 const Rational& beta, unsigned b) {
  return theta(n, s, q) * j_U_lower_closed_form(n - s, q, alpha, beta, b);
}

// --- involution pair proportions -----------------------------------------------

Rational Phi_U(unsigned m, const BigInt& q) {
  const Rational p = phi_U(m, q);
  return p * p * p * p / phi_U(2 * m, q);
}

Rational delta_mq(unsigned m, const BigInt& q) {
  const Rational t(BigInt(1), pow_bigint(q, m + 1));
  const Rational base =
      (m + 1) % 2 == 0 ? Rational(1 - t) : Rational(1 + t);  // 1 - (-q)^{-(m+1)}
  const Rational den =
      (1 + Rational(BigInt(1), pow_bigint(q, 2 * m + 1))) * (1 + Rational(BigInt(1), q));
  return base * base / den;
}

namespace {

Rational iota_from(const PowSeries& R, unsigned n, const BigInt& q) {
  const unsigned m = n / 2;
  const Rational r = R.at(m);
  const Rational even = r * Phi_U(m, q);
  if (n % 2 == 0) return even;
  const Rational odd1 = even * delta_mq(m, q);
  const Rational pm = phi_U(m, q), pm1 = phi_U(m + 1, q);
  const Rational odd2 =
      r * pm * pm * pm1 * pm1 / ((1 + Rational(BigInt(1), q)) * phi_U(2 * m + 1, q));
  if (odd1 != odd2)
    throw std::logic_error("odd-dimension proportion expressions disagree");
  return odd1;
}

}  // namespace

Rational iota_U(unsigned n, const BigInt& q) {
  if (n < 2) throw std::invalid_argument("pair proportion needs n >= 2");
  return iota_from(ru_cached(q, n / 2), n, q);
}

std::vector<Rational> iota_table(const BigInt& q, unsigned n_max) {
  if (n_max < 2) throw std::invalid_argument("pair proportion needs n >= 2");
  const PowSeries& R = ru_cached(q, n_max / 2);
  std::vector<Rational> out;
  out.reserve(n_max - 1);
  for (unsigned n = 2; n <= n_max; ++n) out.push_back(iota_from(R, n, q));
  return out;
}

std::pair<LimitValue, LimitValue> iota_limits(const BigInt& q, const Rational& tol) {
  if (tol <= 0) throw std::invalid_argument("tolerance must be positive");
  Rational part = tol / 16;
  for (int attempt = 0; attempt < 4; ++attempt, part /= 8) {
    const LimitValue r = limit_RU(q, part);
    const LimitValue p = phi_U_limit(q, part);
    const Rational plo = p.lo(), phi3_lo = plo * plo * plo;
    const Rational phi = p.hi(), phi3_hi = phi * phi * phi;
    const Rational lo = r.lo() * phi3_lo;
    const Rational hi = r.hi() * phi3_hi;
    const LimitValue even{(hi + lo) / 2, (hi - lo) / 2};
    if (even.radius > tol) continue;
    const Rational f = Rational(1) / (1 + Rational(BigInt(1), q));
    const LimitValue odd{even.value * f, even.radius * f};
    return {even, odd};
  }
  throw ResourceLimitError("limit tolerance not reachable within the truncation budget");
}

// --- bound reports --------------------------------------------------------------

namespace {

std::string rat_str(const Rational& r) { return to_string(r) + " ~ " + decimal_string(r, 6); }

}  // namespace

counts::CountReport check_series_bounds(const std::vector<BigInt>& qs, unsigned T) {
  counts::CountReport rep;
  rep.title = "series bound report";
  {
    std::ostringstream os;
    os << "q in {";
    for (std::size_t i = 0; i < qs.size(); ++i) os << (i ? "," : "") << qs[i].str();
    os << "}, T=" << T;
    rep.param_range = os.str();
  }
  auto claim = [&rep](const std::string& name, const std::string& params, const std::string& lhs,
                      const std::string& rel, const std::string& rhs, bool pass) {
    rep.claims.push_back({name, params, lhs, rel, rhs, pass});
  };

  const PowSeries base3 = RU(BigInt(3), std::min(T, 30u));
  for (const BigInt& q : qs) {
    const std::string qs_str = "q=" + q.str();

    {  // geometric decay of the convergent-product coefficients
      const unsigned Tb = std::min(T, 40u);
      const PowSeries b = BU(q, Tb);
      const Rational beta2 = Rational(q, BigInt(q - 1)) * Rational(q, BigInt(q - 1));
      bool ok = true;
      Rational worst(0);
      for (unsigned n = 0; n <= Tb; ++n) {
        const Rational v = b.at(n) * b.at(n) * Rational(pow_bigint(q, n));
        if (v > worst) worst = v;
        if (v > beta2) ok = false;
      }
      claim("B-coefficient decay", qs_str + ", n<=" + std::to_string(Tb),
            "max_n b_n^2 q^n = " + rat_str(worst), "<=", "(q/(q-1))^2 = " + rat_str(beta2), ok);
    }

    {  // tail coefficients at level 3: d k t_k < 0.5065 while d k <= exp(d/2)
      const auto ts = t_coeffs(q, 3, 6);
      const Rational cap(BigInt(5065), BigInt(10000));
      bool ok = true;
      Rational worst(0);
      for (unsigned k = 1; k <= 6; ++k) {
        const Rational v = Rational(8 * k) * ts[k - 1];
        if (v > worst) worst = v;
        if (v >= cap) ok = false;
      }
      claim("tail coefficient window", qs_str + ", b=3, k<=6",
            "max_k 8k t_k = " + rat_str(worst), "<", "0.5065", ok);
    }

    {  // level-3 partial-product coefficients stay above 0.247
      const unsigned Tb = std::min(T, 54u);
      const PowSeries r3 = RUb(q, 3, Tb);
      const Rational floor_c(BigInt(247), BigInt(1000));
      bool ok = true;
      Rational worst(1);
      for (unsigned n = 1; n <= Tb; ++n) {
        if (r3.at(n) < worst) worst = r3.at(n);
        if (!(r3.at(n) > floor_c)) ok = false;
      }
      claim("level-3 coefficient floor", qs_str + ", n<=" + std::to_string(Tb),
            "min_n coefficient = " + rat_str(worst), ">", "0.247", ok);

      // level-3 partial proportions never exceed the full proportions
      const PowSeries r = RU(q, Tb);
      bool ok2 = true;
      for (unsigned n = 0; n <= Tb; ++n)
        if (!(Rational(0) <= r3.at(n) && r3.at(n) <= r.at(n) && r.at(n) <= 1)) ok2 = false;
      claim("coefficient sandwich", qs_str + ", n<=" + std::to_string(Tb),
            "0 <= partial <= full", "<=", "1", ok2);
    }

    if (q != 3) {  // coefficientwise domination by larger parameter values
      const unsigned Tb = std::min(T, 30u);
      const PowSeries rq = RU(q, Tb);
      bool ok = true;
      for (unsigned n = 0; n <= Tb; ++n)
        if (!(base3.at(n) <= rq.at(n))) ok = false;
      claim("parameter monotonicity", "q=3 vs " + qs_str + ", n<=" + std::to_string(Tb),
            "coefficients at q=3", "<=", "coefficients at " + qs_str, ok);
    }

    {  // deviation from the limit
      const unsigned Tb = std::min(T, 40u);
      const LimitValue lim = limit_RU(q, Rational(BigInt(1), BigInt(1000000000)));
      const PowSeries r = RU(q, Tb);
      bool ok = true;
      for (unsigned n = 1; n <= Tb; ++n) {
        const Rational dv =
            r.at(n) > lim.value ? r.at(n) - lim.value : lim.value - r.at(n);
        if (!(dv <= epsilon_n_upper(q, n) + lim.radius)) ok = false;
      }
      claim("deviation bound", qs_str + ", n<=" + std::to_string(Tb),
            "|coefficient - limit|", "<=", "certified deviation bound", ok);
    }

    {  // correction factor stays above 81/98 on the admissible range
      bool ok = true;
      Rational worst(2);
      for (unsigned n = 4; n <= 30; ++n)
        for (unsigned s = (n + 1) / 2; 3 * s <= 2 * n; ++s) {
          const Rational th = theta(n, s, q);
          if (th < worst) worst = th;
          if (!(th > Rational(81, 98))) ok = false;
        }
      claim("correction factor floor", qs_str + ", 4<=n<=30",
            "min theta = " + rat_str(worst), ">", "81/98", ok);
    }
  }
  return rep;
}

counts::CountReport check_iota_bounds(const std::vector<BigInt>& qs, unsigned n_max) {
  counts::CountReport rep;
  rep.title = "involution pair proportion bounds";
  {
    std::ostringstream os;
    os << "q in {";
    for (std::size_t i = 0; i < qs.size(); ++i) os << (i ? "," : "") << qs[i].str();
    os << "}, 2<=n<=" << n_max;
    rep.param_range = os.str();
  }
  for (const BigInt& q : qs) {
    const std::string qs_str = "q=" + q.str();
    const auto tab = iota_table(q, n_max);
    bool two_ok = true, three_ok = true, even_ok = true, odd_ok = true, quarter_ok = true;
    for (unsigned n = 2; n <= n_max; ++n) {
      const Rational& v = tab[n - 2];
      if (n == 2 && !(v > Rational(1, 4))) two_ok = false;
      if (n == 3 && !(v > Rational(BigInt(142), BigInt(1000)))) three_ok = false;
      if (n != 3 && !(v > Rational(1, 4))) quarter_ok = false;
      if (n >= 4 && n % 2 == 0 && !(v > Rational(BigInt(343), BigInt(1000)))) even_ok = false;
      if (n >= 5 && n % 2 == 1 && !(v > Rational(BigInt(254), BigInt(1000)))) odd_ok = false;
    }
    rep.claims.push_back({"pair proportion floor (n=2)", qs_str, "iota(2)", ">", "0.25", two_ok});
    rep.claims.push_back(
        {"pair proportion floor (n=3)", qs_str, "iota(3)", ">", "0.142", three_ok});
    rep.claims.push_back(
        {"pair proportion floor (n != 3)", qs_str, "iota(n)", ">", "0.25", quarter_ok});
    rep.claims.push_back(
        {"pair proportion floor (even n >= 4)", qs_str, "iota(n)", ">", "0.343", even_ok});
    rep.claims.push_back(
        {"pair proportion floor (odd n >= 5)", qs_str, "iota(n)", ">", "0.254", odd_ok});
  }
  return rep;
}

// --- export ---------------------------------------------------------------------

std::string CoeffTable::to_csv() const {
  std::ostringstream os;
  os << "n,exact,decimal\n";
  for (std::size_t i = 0; i < idx.size(); ++i)
    os << idx[i] << "," << to_string(vals[i]) << "," << decimal_string(vals[i], 12) << "\n";
  return os.str();
}

std::string CoeffTable::to_json() const {
  nlohmann::json j;
  j["schema"] = "coeff-table/1";
  j["table"] = name;
  j["q"] = q.str();
  j["rows"] = nlohmann::json::array();
  for (std::size_t i = 0; i < idx.size(); ++i)
    j["rows"].push_back({{"n", idx[i]},
                         {"exact", to_string(vals[i])},
                         {"decimal", decimal_string(vals[i], 12)}});
  return j.dump(2);
}

CoeffTable coeff_table(const PowSeries& f, const std::string& name) {
  CoeffTable t;
  t.name = name;
  t.q = f.q();
  for (unsigned n = 0; n <= f.order(); ++n) {
    t.idx.push_back(n);
    t.vals.push_back(f.at(n));
  }
  return t;
}

// --- rational logarithm bounds ----------------------------------------------------

Rational log_lower(const Rational& x, unsigned terms) {
  if (x <= 0) throw std::domain_error("log of a nonpositive value");
  if (x == 1) return Rational(0);
  if (x < 1) return -log_upper(Rational(1) / x, terms);
  const Rational z = (x - 1) / (x + 1);
  const Rational z2 = z * z;
  Rational pw = z, s(0);
  for (unsigned k = 0; k < terms; ++k) {
    s += pw / (2 * k + 1);
    pw *= z2;
  }
  return 2 * s;
}

Rational log_upper(const Rational& x, unsigned terms) {
  if (x <= 0) throw std::domain_error("log of a nonpositive value");
  if (x == 1) return Rational(0);
  if (x < 1) return -log_lower(Rational(1) / x, terms);
  const Rational z = (x - 1) / (x + 1);
  const Rational z2 = z * z;
  Rational pw = z, s(0);
  for (unsigned k = 0; k < terms; ++k) {
    s += pw / (2 * k + 1);
    pw *= z2;
  }
  // remaining terms are bounded by the geometric tail pw/( (2 terms + 1)(1 - z^2) )
  s += pw / ((2 * terms + 1) * (1 - z2));
  return 2 * s;
}

}  // namespace series
}  // namespace unicent
