#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "unicent/exact.hpp"

namespace unicent {

// F_{p^k} with elements encoded as integers in [0, Q): the index of the
// coefficient vector c0 + c1*p + ... + c_{k-1}*p^{k-1}. Index 0 is the zero
// element, index 1 the one element. Full operation tables are precomputed
// when Q <= 121 (all desk-scale fields); larger fields fall back to direct
// coefficient arithmetic.
class FieldCtx {
 public:
  // modulus: monic irreducible of degree k over F_p, low-degree-first,
  // length k+1. If absent, the lexicographically smallest monic irreducible
  // (by the integer encoding of its lower coefficients) is chosen.
  static std::shared_ptr<const FieldCtx> create(
      int p, int k, const std::optional<std::vector<int>>& modulus = std::nullopt);

  // "p^k:c0,c1,...,ck"
  static std::shared_ptr<const FieldCtx> parse_spec(const std::string& spec);
  std::string spec_string() const;

  int p;
  int k;
  long long Q;
  int q_sub;                 // p^{k/2} when k is even, else 0 (no sigma)
  std::vector<int> modulus;  // length k+1, monic
  Factorization mult_group_order_factors;  // factorization of Q-1

  int add(int a, int b) const;
  int sub(int a, int b) const;
  int neg(int a) const;
  int mul(int a, int b) const;
  int inv(int a) const;
  int div(int a, int b) const;
  int pow(int a, BigInt e) const;
  int sigma(int a) const;  // x -> x^q, requires even k
  BigInt order(int a) const;
  bool in_subfield(int a) const;  // fixed by sigma
  int norm(int a) const;          // x * sigma(x), lands in the subfield
  // some c with c*sigma(c) == a (a in subfield), found by scan; -1 if none
  int solve_norm(int a) const;

  int from_coeffs(const std::vector<int>& c) const;
  std::vector<int> coeffs(int a) const;
  int from_int(long long c) const;  // embed an integer constant

  std::string elem_str(int a) const;        // "c0,c1,..."
  int parse_elem(const std::string& s) const;

  bool has_tables() const { return !mul_table.empty(); }

 private:
  FieldCtx() = default;
  void build(int p, int k, const std::vector<int>& mod);

  std::vector<int> add_table, mul_table;   // Q*Q when tabled
  std::vector<int> neg_table, inv_table, sigma_table;

  std::vector<int> mul_direct(int a, int b) const;  // helper on coeff vectors
};

using FieldPtr = std::shared_ptr<const FieldCtx>;

// Convenience value type used by tests and the CLI; hot paths use
// (FieldCtx, int) directly.
struct FieldElem {
  const FieldCtx* ctx = nullptr;
  int v = 0;

  friend FieldElem operator+(FieldElem a, FieldElem b) { return {a.require(b), a.ctx->add(a.v, b.v)}; }
  friend FieldElem operator-(FieldElem a, FieldElem b) { return {a.require(b), a.ctx->sub(a.v, b.v)}; }
  friend FieldElem operator*(FieldElem a, FieldElem b) { return {a.require(b), a.ctx->mul(a.v, b.v)}; }
  friend FieldElem operator/(FieldElem a, FieldElem b) { return {a.require(b), a.ctx->div(a.v, b.v)}; }
  friend bool operator==(FieldElem a, FieldElem b) { return a.ctx == b.ctx && a.v == b.v; }

 private:
  const FieldCtx* require(const FieldElem& o) const {
    if (ctx != o.ctx) throw std::invalid_argument("field context mismatch");
    return ctx;
  }
};

}  // namespace unicent
