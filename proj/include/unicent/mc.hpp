#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "unicent/exact.hpp"
#include "unicent/gfq.hpp"
#include "unicent/ugroup.hpp"
#include "unicent/upoly.hpp"

namespace unicent::mc {

// Deterministic per-trial generator: identical (master, stream, index) always
// yields the same stream, so aggregated results are independent of any
// parallel scheduling of trials.
std::mt19937_64 trial_rng(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

// Wilson score interval at the 99% level. The normal quantile and the square
// root are replaced by exact rational upper enclosures, so the interval can
// only be wider than the textbook one (coverage is conservative). Returns
// [0, 1] for zero trials.
std::pair<Rational, Rational> wilson_99(std::uint64_t successes, std::uint64_t trials);

// Upper-tail probability of a chi-square variable with dof degrees of
// freedom, via the regularized incomplete gamma function Q(dof/2, stat/2).
double chi_square_pvalue(double stat, int dof);

struct ExperimentReport {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> params;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  Rational estimate;
  Rational ci_lo;
  Rational ci_hi;
  std::optional<Rational> reference;    // exact value when one exists
  std::optional<Rational> lower_bound;  // claimed bound when one applies
  std::string verdict;                  // "consistent" | "inconsistent" | "no-reference"
  std::vector<std::pair<std::string, std::string>> extra;

  std::string to_json() const;  // schema "experiment-report/1"
};

struct OracleResult {
  std::string name;
  Rational counted;    // exhaustively counted quantity
  Rational predicted;  // closed-form / series prediction
  bool equal = false;
  std::string detail;

  std::string to_json() const;  // schema "oracle-result/1"
};

// F_{q^2} context for a prime-power q.
FieldPtr field_for_q(const BigInt& q);

// Per-block centralizer order and perfectly-balanced inverter count for a
// regular semisimple element with the given separable characteristic
// polynomial (which must be a product of U*-irreducible blocks, possibly
// including X-1 and X+1 once each). The inverter count carries the factor 2
// when both X-1 and X+1 divide.
struct BlockPrices {
  BigInt centralizer_order;
  BigInt inverter_count;
};
BlockPrices lemma_prices(const UPoly& c_y, const BigInt& q);

// |Delta_U(n, q)| (n even) three ways: summing per-polynomial pair counts
// over the degree-n admissible characteristic polynomials, reading the
// coefficient of the pair-proportion series, and — when the full group fits
// under group_cap — exhaustive pair counting. counted is the enumeration
// value (group route when it ran, else polynomial route), predicted the
// series value; equal demands every computed route agree.
OracleResult brute_delta(int n, const BigInt& q, std::uint64_t group_cap = 2000);

// iota_U(n, q) by exhaustive enumeration of ordered pairs of perfectly
// balanced involutions with regular semisimple product, versus the series
// formula.
OracleResult brute_iota(int n, const BigInt& q, std::uint64_t group_cap = 200000);

// kind: "A", "B", "C", "D" for a constructed single-block element with
// factor degree m, or "mixed" for the two-eigenvalue-extended element whose
// characteristic polynomial picks up both X-1 and X+1 (the doubled-count
// case). Each case yields two results: centralizer order and perfectly
// balanced inverting-involution count, counted by full-table scan when the
// ambient group is small enough and by the linear-solve route otherwise
// (both, with agreement required, when the table is available).
struct InverterCase {
  std::string kind;
  int m = 1;
};
std::vector<OracleResult> brute_inverter_counts(const BigInt& q,
                                                const std::vector<InverterCase>& cases,
                                                std::uint64_t group_cap = 2000);

// Number of pairs (t, y) in Delta_U(2k, q) whose characteristic polynomial
// splits as c_y^- * c_y^+, where c_y^- (degree 2l) collects the Type-D blocks
// of maximal 2-adic root order with degree 2-part 2^{b+1}, and every other
// block has degree 2-part at most 2^b. Counted over the full degree-2k
// polynomial enumeration; predicted as r_{U,b}(2k-2l) * g^-_{U,b}(2l) times
// the group order.
OracleResult brute_akl(int k, int l, int b, const BigInt& q);

// Samples ordered pairs of uniform perfectly balanced involutions (fixed
// representative conjugated by uniform group elements) and estimates the
// probability of a regular semisimple product; reference is the exact series
// value.
ExperimentReport estimate_iota(int n, const BigInt& q, std::uint64_t trials,
                               std::uint64_t seed);

// Fixes t of type (s, n-s), samples uniform g, and tests whether
// inv(t * t^g) restricted to the chosen eigenspace of t is (1/3, 2/3)-
// balanced. The plus variant restricts to E_+(t) and carries the window
// (max{0, 1 - 2s/(3(n-s))}, 1 - s/(3(n-s))); the minus variant restricts to
// E_-(t) and carries (1/3, 2/3). The corresponding pair-family lower bound
// is attached when its domain applies.
ExperimentReport estimate_pi_plus(int n, int s, const BigInt& q, std::uint64_t trials,
                                  std::uint64_t seed);
ExperimentReport estimate_pi_minus(int n, int s, const BigInt& q, std::uint64_t trials,
                                   std::uint64_t seed);

// Estimates ell (pair-family membership frequency over conjugate involution
// pairs of type (s, n-s)) and j (balanced-inverter frequency over the
// rejection-sampled involution-pair family in dimension 2(n-s), rescaled to
// a group-proportion), and verifies ell ~= theta * j within combined 3 sigma.
// Aborts with diagnostics when the rejection acceptance rate drops below
// 1e-4. Every accepted pair is exact-checked against the membership
// dimension table; violation counts are reported.
ExperimentReport estimate_ell_and_j(int n, int s, const BigInt& q, std::uint64_t trials,
                                    std::uint64_t seed);

// Per trial: find a strong involution t by powering random elements, draw
// num_random further elements g, form the centralizer elements R(g, t), and
// check exactly that each centralizes t; where the eigenspace restriction is
// small enough to close, decide whether the generated subgroup contains the
// special-determinant subgroup on that eigenspace. Reports the frequency of
// full containment among trials where at least one eigenspace was decidable.
ExperimentReport pipeline_demo(int n, const BigInt& q, int num_random,
                               std::uint64_t trials, std::uint64_t seed);

// Chi-square goodness of fit of the uniform sampler against the enumerated
// group (every element is a cell). estimate / ci collapse to the p-value;
// consistent iff p > 0.001.
ExperimentReport uniformity_chi_square(int n, const BigInt& q, std::uint64_t trials,
                                       std::uint64_t seed);

}  // namespace unicent::mc
