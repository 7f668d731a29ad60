#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unicent/counts.hpp"
#include "unicent/exact.hpp"

namespace unicent {
namespace series {

// Hard ceiling for truncation orders.  Everything in this module works with
// exact rational coefficients, so cost grows quickly with the order; 64 is
// enough for every bound we certify.
inline constexpr unsigned kMaxOrder = 64;

// Truncated power series in u with exact rational coefficients.  A series
// carries its truncation order T (coefficients 0..T are meaningful) and the
// prime power q it was built for, so that mixing series from different
// parameter values is caught at run time.
class PowSeries {
 public:
  PowSeries() = default;
  PowSeries(unsigned T, BigInt q);

  static PowSeries constant(unsigned T, const BigInt& q, const Rational& c0);

  unsigned order() const { return T_; }
  const BigInt& q() const { return q_; }

  const Rational& at(unsigned n) const;
  void set(unsigned n, const Rational& v);
  const std::vector<Rational>& coeffs() const { return c_; }

 private:
  unsigned T_ = 0;
  BigInt q_ = 0;
  std::vector<Rational> c_;
};

// Elementwise arithmetic.  All binary operations require matching truncation
// order and matching q tag and throw std::invalid_argument otherwise.
PowSeries add(const PowSeries& f, const PowSeries& g);
PowSeries sub(const PowSeries& f, const PowSeries& g);
PowSeries mul(const PowSeries& f, const PowSeries& g);
PowSeries scale(const PowSeries& f, const Rational& c);

// Multiplicative inverse; requires a nonzero constant term.
PowSeries reciprocal(const PowSeries& f);

// f^e for integer e (negative exponents go through reciprocal).
PowSeries pow_int(const PowSeries& f, long long e);

// f^alpha for rational alpha, via the first-order recurrence satisfied by
// h = f^alpha, namely h' f = alpha h f'.  Requires constant term exactly 1.
PowSeries pow_rational(const PowSeries& f, const Rational& alpha);

// 1 + c u^r, truncated at T.
PowSeries one_plus_term(unsigned T, const BigInt& q, unsigned r, const Rational& c);

// --- generating series -----------------------------------------------------
//
// RU(q,T) is the series whose u^n coefficient is the proportion of pairs
// (t, y) in GU(2n,q) x GU(2n,q) with t a perfectly balanced involution
// inverting the regular semisimple element y, normalised by the group order.
// Three independently derived product expressions are evaluated and compared
// coefficient by coefficient; a mismatch means an internal fault and throws
// std::logic_error.
PowSeries RU(const BigInt& q, unsigned T);
PowSeries RU_route1(const BigInt& q, unsigned T);  // single product over all degrees
PowSeries RU_route2(const BigInt& q, unsigned T);  // split into conjugacy-type factors
PowSeries RU_route3(const BigInt& q, unsigned T);  // rational prefactor times product

// The rational prefactor and the convergent product from the third route,
// exposed separately because the limit computation needs their coefficients.
PowSeries AU(const BigInt& q, unsigned T);
PowSeries BU(const BigInt& q, unsigned T);

// Closed form for the coefficients of AU: a_n = alpha_q + c_n with
// alpha_q = (q^2-1)/(q^2+2q) and c_n a geometrically decaying correction.
Rational alpha_q(const BigInt& q);
Rational a_coeff(const BigInt& q, unsigned n);

// Factor series indexed by the dyadic level b >= 0; RU factors as the product
// of GUb over all b.  For b = 0 and b = 1 two distinct expressions are
// checked against each other (the b = 1 alternative exercises a genuine
// half-integer exponent).
PowSeries GUb(const BigInt& q, unsigned b, unsigned T);

// Partial product over levels < b (b >= 1): the series of proportions where
// every elementary divisor has multiplicative order with 2-part strictly
// below 2^b times the 2-part of q+1.  Verified two ways: as a direct product
// of GUb factors and as RU times the inverted tail.
PowSeries RUb(const BigInt& q, unsigned b, unsigned T);

// Inverse of the tail product over levels >= b (b >= 1), as a closed product
// with negative exponents.
PowSeries TUb_inv(const BigInt& q, unsigned b, unsigned T);

// Coefficients t_1..t_kmax of the tail-defect series 1 - TUb_inv in the
// compressed variable U = u^(2^b).
std::vector<Rational> t_coeffs(const BigInt& q, unsigned b, unsigned kmax);

// Minorant series at level b >= 1 with universal exponents ceil(N(q^2,.)/8);
// nonzero coefficients only at multiples of 2^b.
PowSeries FUb(const BigInt& q, unsigned b, unsigned T);

// Series with exponents given by the count of irreducibles of maximal 2-part
// order.  Those exponents are only known exactly when the relevant degree is
// a power of two; for other degrees a caller-supplied exact source must
// provide the value, otherwise std::domain_error is thrown.
using ExactExponentSource = std::function<std::optional<BigInt>(unsigned degree)>;
PowSeries GUb_minus(const BigInt& q, unsigned b, unsigned T,
                    const ExactExponentSource& source = nullptr);

// --- limits ------------------------------------------------------------------

// A certified enclosure: the limit lies within [value - radius, value + radius].
struct LimitValue {
  Rational value;
  Rational radius;

  Rational lo() const { return value - radius; }
  Rational hi() const { return value + radius; }
  bool contains(const Rational& x) const { return lo() <= x && x <= hi(); }
};

// Limit of the u^n coefficients of RU(q,.) as n grows, via a convergent
// infinite product and independently via the summed coefficients of BU.
// Each route certifies its truncation error; the two enclosures must overlap
// (std::logic_error otherwise).  Returns the tighter enclosure.
LimitValue limit_RU(const BigInt& q, const Rational& tol);
LimitValue limit_RU_product(const BigInt& q, const Rational& tol);
LimitValue limit_RU_sum(const BigInt& q, const Rational& tol);

// Certified upper bound on the deviation |r_U(2n,q) - limit|.
Rational epsilon_n_upper(const BigInt& q, unsigned n);

// --- lower bounds for balanced pairs ----------------------------------------

// Lower bound for the proportion of pairs (t, y) in dimension 2m whose
// involution t is (alpha,beta)-balanced, obtained as a coefficient of a sum
// of level-b products with the minorant series truncated to the window
// m(1-beta) <= degree <= m(1-alpha).
Rational j_U_lower_coefficient(unsigned m, const BigInt& q, const Rational& alpha,
                               const Rational& beta);

// Closed-form lower bound valid for b >= 3, m <= e^(2^(b-1)) and
// 0 <= alpha < beta < 1.
Rational j_U_lower_closed_form(unsigned m, const BigInt& q, const Rational& alpha,
                               const Rational& beta, unsigned b);

// Finite Euler factor prod_{i<=m} (1 - (-1)^i z^{-i}) evaluated at z = q.
Rational phi_U(unsigned m, const BigInt& q);

// Certified enclosure of the limit of phi_U(m,q) as m grows.
LimitValue phi_U_limit(const BigInt& q, const Rational& tol);

// Correction factor theta(n,s,q) relating pair proportions in GU(2n-2s,q) to
// proportions of decomposable pairs in GU(n,q); requires 2n/3 >= s >= n/2 >= 2.
Rational theta(unsigned n, unsigned s, const BigInt& q);

// theta times the corresponding j lower bound (same preconditions).
Rational ell_U_lower_coefficient(unsigned n, unsigned s, const BigInt& q,
                                 const Rational& alpha, const Rational& beta);
Rational ell_U_lower_closed_form(unsigned n, unsigned s, const BigInt& q,
                                 const Rational& alpha, const Rational& beta, unsigned b);

// --- proportions of involution pairs with regular semisimple product --------

// Phi_U(m,q) = phi_U(m,q)^4 / phi_U(2m,q).
Rational Phi_U(unsigned m, const BigInt& q);

// Odd-dimension correction delta(m,q); iota_U(2m+1,q) = iota_U(2m,q) delta(m,q).
Rational delta_mq(unsigned m, const BigInt& q);

// Exact proportion, among ordered pairs of perfectly balanced involutions in
// GU(n,q), of pairs whose product is regular semisimple (n >= 2).  Odd n is
// computed through two algebraically equal expressions that are compared.
Rational iota_U(unsigned n, const BigInt& q);

// iota_U(n,q) for n = 2..n_max, sharing one series evaluation.
std::vector<Rational> iota_table(const BigInt& q, unsigned n_max);

// Certified enclosures for the limits of iota_U over even and odd dimensions.
std::pair<LimitValue, LimitValue> iota_limits(const BigInt& q, const Rational& tol);

// --- bound reports -----------------------------------------------------------

// Checks the quantitative series bounds (coefficient decay, tail coefficient
// windows, level-3 coefficient floors, coefficient sandwiches, deviation
// bounds, comparison between parameter values) and returns one claim per
// check.
counts::CountReport check_series_bounds(const std::vector<BigInt>& qs, unsigned T);

// Checks the involution-pair proportion bounds for 2 <= n <= n_max.
counts::CountReport check_iota_bounds(const std::vector<BigInt>& qs, unsigned n_max);

// --- export ------------------------------------------------------------------

struct CoeffTable {
  std::string name;
  BigInt q;
  std::vector<unsigned> idx;
  std::vector<Rational> vals;

  std::string to_csv() const;   // columns: n, exact, decimal (12 places)
  std::string to_json() const;  // schema coeff-table/1
};

CoeffTable coeff_table(const PowSeries& f, const std::string& name);

// Rational log bounds used by the closed-form estimates: lower/upper bounds
// for log(x), x > 0, certified by the alternating tail of the atanh series.
Rational log_lower(const Rational& x, unsigned terms = 24);
Rational log_upper(const Rational& x, unsigned terms = 24);

}  // namespace series
}  // namespace unicent
