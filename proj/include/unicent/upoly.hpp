#pragma once

#include <optional>
#include <string>
#include <vector>

#include "unicent/exact.hpp"
#include "unicent/gfq.hpp"

namespace unicent {

// Polynomial over a field context, low-degree-first coefficient indices.
// The zero polynomial has an empty coefficient vector.
struct UPoly {
  FieldPtr ctx;
  std::vector<int> c;

  int deg() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  bool is_monic() const { return !c.empty() && c.back() == 1; }
  int constant_term() const { return c.empty() ? 0 : c[0]; }
  void trim();

  friend bool operator==(const UPoly& a, const UPoly& b) {
    return a.ctx.get() == b.ctx.get() && a.c == b.c;
  }
};

bool upoly_less(const UPoly& a, const UPoly& b);  // degree, then coefficients

UPoly upoly_from(FieldPtr ctx, const std::vector<int>& coeffs);
UPoly upoly_zero(FieldPtr ctx);
UPoly upoly_one(FieldPtr ctx);
UPoly upoly_X(FieldPtr ctx);
// X - a
UPoly upoly_linear(FieldPtr ctx, int a);

UPoly add(const UPoly& f, const UPoly& g);
UPoly sub(const UPoly& f, const UPoly& g);
UPoly mul(const UPoly& f, const UPoly& g);
UPoly mul_scalar(const UPoly& f, int s);
std::pair<UPoly, UPoly> divmod(const UPoly& f, const UPoly& g);
UPoly poly_mod(const UPoly& f, const UPoly& g);
UPoly gcd_poly(UPoly f, UPoly g);  // monic
UPoly derivative(const UPoly& f);
int eval(const UPoly& f, int a);
UPoly monic_scale(const UPoly& f);
UPoly powmod(const UPoly& base, BigInt e, const UPoly& mod);

// coefficient-wise x -> x^q
UPoly sigma_conj(const UPoly& f);
// monic reversal X^n f(1/X)/f(0): roots become inverses
UPoly star_conj(const UPoly& f);
UPoly tilde_conj(const UPoly& f);

bool is_separable(const UPoly& f);

struct FactorMultiset {
  std::vector<std::pair<UPoly, int>> factors;  // distinct monic irreducibles
  UPoly product() const;
  bool squarefree() const;
};

FactorMultiset factorize_poly(const UPoly& f, std::uint64_t seed = 1);

enum class UStarType { A, B, C, D, E };
char type_letter(UStarType t);

bool is_ustar_closed(const UPoly& g);
bool is_ustar_irreducible(const UPoly& g);
// Throws if g is not U*-irreducible.
UStarType classify_type(const UPoly& g);

// Multiplicative order of a root of an irreducible factor of g, and its
// 2-part. g must be irreducible or U*-irreducible, with nonzero constant.
BigInt omega(const UPoly& g);
BigInt omega2(const UPoly& g);

// All monic irreducibles of degree r over the context field (X included).
// Candidate count Q^r must not exceed cap.
std::vector<UPoly> monic_irreducibles(FieldPtr ctx, int r, std::uint64_t cap = 10000000);

struct UStarBlock {
  UPoly g;
  UStarType type;
  int factor_degree;
};

struct UStarEnumOptions {
  std::optional<UStarType> type;
  bool minus_only = false;  // Type D with maximal omega_2
  std::uint64_t cap = 10000000;
};

// All U*-irreducible polynomials of the given degree (E types at degree 1).
std::vector<UStarBlock> enumerate_ustar_irreducibles(FieldPtr ctx, int degree,
                                                     const UStarEnumOptions& opts = {});

struct PiUItem {
  UPoly poly;
  std::vector<UStarBlock> blocks;
};

// Separable monic U*-closed polynomials of degree n with no roots in
// {0, 1, -1}: all products of distinct non-E U*-irreducible blocks.
std::vector<PiUItem> enumerate_PiU(int n, FieldPtr ctx, std::uint64_t cap = 10000000);

// "X^2+(1,1)*X+(2,0)" style; integer coefficients embed as constants
std::string upoly_str(const UPoly& f);
UPoly parse_upoly(FieldPtr ctx, const std::string& s);

}  // namespace unicent
