#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "unicent/exact.hpp"
#include "unicent/gfq.hpp"
#include "unicent/upoly.hpp"

namespace unicent::ugroup {

// Hermitian form on F_{q^2}^n. Gram matrix G satisfies G = G^{sigma T} and is
// nonsingular. Vectors are rows; the form is (u, w) = u G w^{sigma T} and h is
// an isometry iff h G h^{sigma T} = G.
struct UnitaryForm {
  FieldPtr ctx;  // F_{q^2}: requires even extension degree
  int n = 0;
  std::vector<int> gram;  // n*n row-major

  long long q() const { return ctx->q_sub; }
  int at(int i, int j) const { return gram[static_cast<size_t>(i) * n + j]; }
  bool is_identity_gram() const;

  static std::shared_ptr<const UnitaryForm> identity(FieldPtr ctx, int n);
  // (0 I; I 0) in half-dimension blocks; n even
  static std::shared_ptr<const UnitaryForm> split(FieldPtr ctx, int n);
  // diag(split, split); n divisible by 4
  static std::shared_ptr<const UnitaryForm> split_pair(FieldPtr ctx, int n);
  static std::shared_ptr<const UnitaryForm> with_gram(FieldPtr ctx, std::vector<int> gram);
};

using FormPtr = std::shared_ptr<const UnitaryForm>;

struct UMat {
  FormPtr form;
  std::vector<int> a;  // n*n row-major

  int n() const { return form->n; }
  const FieldCtx& F() const { return *form->ctx; }
  int at(int i, int j) const { return a[static_cast<size_t>(i) * form->n + j]; }
  int& at(int i, int j) { return a[static_cast<size_t>(i) * form->n + j]; }

  friend bool operator==(const UMat& x, const UMat& y) {
    return x.form->n == y.form->n && x.form->ctx.get() == y.form->ctx.get() && x.a == y.a;
  }
  friend bool operator!=(const UMat& x, const UMat& y) { return !(x == y); }
};

UMat mat_identity(FormPtr form);
UMat mat_from_entries(FormPtr form, std::vector<int> entries);
// Entries of x reinterpreted under another form of the same dimension/field.
UMat with_form(const UMat& x, FormPtr form);

UMat mul(const UMat& x, const UMat& y);
UMat add(const UMat& x, const UMat& y);
UMat sub(const UMat& x, const UMat& y);
UMat inverse(const UMat& x);  // throws std::invalid_argument if singular
UMat mat_pow(const UMat& x, const BigInt& e);  // negative e inverts first
UMat transpose(const UMat& x);
UMat sigma_transpose(const UMat& x);
// g^{-1} x g
UMat conj(const UMat& x, const UMat& g);
int det(const UMat& x);
bool is_identity(const UMat& x);
bool is_scalar(const UMat& x);
// x^2 = 1 and x != 1
bool is_involution(const UMat& x);
// Block-diagonal stack; the caller supplies the ambient form.
UMat block_diag(FormPtr form, const std::vector<UMat>& blocks);

// rows ';'-separated, entries space-separated in field-element format
std::string mat_str(const UMat& x);
UMat parse_mat(FormPtr form, const std::string& s);

// |GU(n,q)| = q^{n^2} prod_{i=1}^n (1 - (-1)^i q^{-i}), as an exact integer.
BigInt gu_order(int n, const BigInt& q);
BigInt su_order(int n, const BigInt& q);

bool is_member(const UMat& h);

// Exactly uniform over the isometry group of an identity-Gram form: rows are
// drawn uniformly from the solution set of the orthonormality constraints
// (uniform coordinates in the constraint kernel, rejecting on norm != 1).
// Throws ResourceLimitError if a single row exceeds 10^6 rejections.
UMat sample_uniform(FormPtr form, std::mt19937_64& rng);

// Exact multiplicative order: lcm of root orders of the minimal polynomial's
// irreducible factors, times the p-power covering the largest multiplicity.
BigInt order_of(const UMat& h);
// x^{|x|/2} when |x| is even, identity otherwise
UMat inv_of(const UMat& x);

UPoly char_poly(const UMat& h);
UPoly min_poly(const UMat& h);
bool is_regular_semisimple(const UMat& y);

// Echelon basis (leftmost pivots) of the +1 or -1 eigenspace; t^2 = 1 required.
std::vector<std::vector<int>> eigenspace(const UMat& t, int sign);
// (dim E_+, dim E_-)
std::pair<int, int> involution_type(const UMat& t);
bool is_strong(const UMat& t);          // n/3 <= dim E_+ <= 2n/3
bool is_perfectly_balanced(const UMat& t);  // dim E_+ = floor(n/2)
bool is_balanced(const UMat& t, const Rational& alpha, const Rational& beta);

struct InvolutionRecord {
  UMat matrix;
  int dim_plus = 0;
  int dim_minus = 0;
  bool strong = false;
  std::optional<std::pair<Rational, Rational>> balance_window;
  std::optional<bool> balanced;

  std::string to_json() const;
};
InvolutionRecord involution_record(
    const UMat& t, std::optional<std::pair<Rational, Rational>> window = std::nullopt);

// With y = t * t^g: inv(y) when |y| is even, g * y^{floor(|y|/2)} when odd.
// Always commutes with t.
UMat bray_R(const UMat& g, const UMat& t);

struct StrongSearchResult {
  std::optional<UMat> t;
  long long tries = 0;
};
StrongSearchResult find_strong_involution(FormPtr form, std::mt19937_64& rng,
                                          long long max_tries);

// Companion matrix of a primitive degree-m polynomial over the context field;
// a GL(m, Q) element of order Q^m - 1 (not an isometry in general).
UMat singer_cycle(int m, FieldPtr ctx);

// diag(a, a^{-sigma T}): lands in the isometry group of the split form on
// twice the dimension, and is a group homomorphism.
UMat embed_alpha(const UMat& a);

struct TypeElement {
  UMat y;
  UPoly c_y;
  UStarType type = UStarType::A;
  BigInt expected_inverter_count;
  BigInt expected_centralizer_order;
};
// Regular semisimple y whose characteristic polynomial is a U*-irreducible
// block of the requested type with factor degree m, built from Singer powers.
// A, B: y in GU(2m,q) w.r.t. the split form. C: GU(2m,q), identity form.
// D: GU(4m,q) w.r.t. the paired split form. Throws std::domain_error when no
// such element exists for the parameters.
TypeElement construct_type_element(UStarType type, int m, FieldPtr ctx, std::uint64_t seed);

struct GroupTable {
  FormPtr form;
  std::vector<std::vector<int>> elems;  // entry vectors in BFS order from identity
  std::map<std::vector<int>, int> index;
  std::vector<UMat> generators;

  int size() const { return static_cast<int>(elems.size()); }
  UMat at(int i) const;
  int index_of(const UMat& x) const;  // -1 when absent
  bool contains(const UMat& x) const { return index_of(x) >= 0; }
};

// Deterministic BFS closure under multiplication. Throws ResourceLimitError
// when the size would exceed cap.
GroupTable closure(const std::vector<UMat>& generators, std::uint64_t cap = 1000000);

// Full isometry-group table: closes seeded uniform samples until the size
// matches the order formula.
GroupTable enumerate_GU(FormPtr form, std::uint64_t seed = 1, std::uint64_t cap = 1000000);

std::vector<UMat> elements_with_det_one(const GroupTable& table);

// Sorted table indices of the conjugation orbit of x.
std::vector<int> conjugacy_class_of(const UMat& x, const GroupTable& table);

// Exhaustive table scans.
std::vector<UMat> brute_centralizer(const UMat& y, const GroupTable& table);
std::vector<UMat> brute_inverting_involutions(
    const UMat& y, const GroupTable& table,
    std::optional<std::pair<int, int>> type_filter = std::nullopt);

// The same sets computed without a table, for groups too large to enumerate:
// {x : xy = yx} and {x : xy = y^{-1}x} are linear conditions on x, so the
// solution spaces are enumerated (Q^dim points, capped) and filtered on
// membership. Requires y regular semisimple for the dimension to stay at n.
std::vector<std::vector<int>> commuting_space_basis(const UMat& y);
std::vector<std::vector<int>> inverting_space_basis(const UMat& y);
std::vector<UMat> unitary_in_span(FormPtr form, const std::vector<std::vector<int>>& basis,
                                  std::uint64_t cap = 10000000);
std::vector<UMat> centralizer_via_solve(const UMat& y, std::uint64_t cap = 10000000);
std::vector<UMat> inverting_involutions_via_solve(
    const UMat& y, std::optional<std::pair<int, int>> type_filter = std::nullopt,
    std::uint64_t cap = 10000000);

// Row-space operations over the form's field (vectors as rows).
std::vector<std::vector<int>> row_echelon_basis(FieldPtr ctx,
                                                std::vector<std::vector<int>> rows);
// Solutions v of v M^T = 0 for each constraint row M_i (i.e. v . M_i = 0).
std::vector<std::vector<int>> solution_space(FieldPtr ctx, int ncols,
                                             const std::vector<std::vector<int>>& constraints);
std::vector<std::vector<int>> intersect_row_spaces(FieldPtr ctx,
                                                   const std::vector<std::vector<int>>& A,
                                                   const std::vector<std::vector<int>>& B);
// Basis of {v : (v, b) = 0 for all b in basis} w.r.t. the form.
std::vector<std::vector<int>> perp_space(FormPtr form,
                                         const std::vector<std::vector<int>>& basis);

// Gram of the form restricted to the row span of basis.
FormPtr restricted_form(FormPtr form, const std::vector<std::vector<int>>& basis);
bool is_nondegenerate(FormPtr form, const std::vector<std::vector<int>>& basis);
bool leaves_invariant(const UMat& x, const std::vector<std::vector<int>>& basis);
// Matrix of x on the row span of basis, over restricted_form(x.form, basis).
// Throws std::invalid_argument when the span is not x-invariant.
UMat restrict_to(const UMat& x, const std::vector<std::vector<int>>& basis);

// P with target.gram = P source.gram P^{sigma T}; then x -> P x P^{-1} maps
// isometries of the source form to isometries of the target form.
UMat transition_matrix(FormPtr source, FormPtr target);
UMat to_form(const UMat& x, FormPtr target);

// Some nonsingular Hermitian G with c G c^{sigma T} = G, or throws
// std::domain_error when c preserves no such form.
FormPtr preserved_hermitian_form(const UMat& c);

struct LUCheck {
  bool member = false;
  std::string reason;  // first failed condition when member is false
  int h = -1;          // dim of the common fixed space when computed
  bool v1_nondegenerate = false;
  int k_plus = -1;
  int k_minus = -1;
  int dim_v1_cap_eplus_t = -1;
  int dim_v2p_cap_eplus_t = -1;
  int dim_v2p_cap_eminus_t = -1;
  int dim_v2m_cap_eplus_t = -1;
  int dim_v2m_cap_eminus_t = -1;
  bool z_on_eplus_t_third_balanced = false;
};
// Membership of (t, t') in the pair family with parameters (n, s; alpha, beta):
// both of type (s, n-s); V1 = E_+(t) cap E_+(t') nondegenerate of dimension
// 2s-n; on V2 = V1-perp the pair (t|V2, tt'|V2) has tt'|V2 regular semisimple
// with characteristic polynomial coprime to X^2-1, t|V2 perfectly balanced,
// and inv(tt'|V2) is (alpha,beta)-balanced. Fills the intersection dimensions
// for members.
LUCheck check_LU_pair(const UMat& t, const UMat& tp, int s, const Rational& alpha,
                      const Rational& beta);

// Closure of the restricted generators, filtered to determinant one, compared
// against the special-isometry order for the dimension.
bool contains_SU(const std::vector<UMat>& gens, std::uint64_t cap = 1000000);

// Portable exact-uniform draw from [0, m).
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t m);

}  // namespace unicent::ugroup
