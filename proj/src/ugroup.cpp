#include "unicent/ugroup.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "unicent/counts.hpp"

namespace unicent::ugroup {

namespace {

// Reduced row echelon structure with an optional augmented part carried
// through every row operation (used for coordinate tracking).
struct AugEchelon {
  const FieldCtx* F;
  int nc;
  int na;
  std::vector<std::vector<int>> rows;
  std::vector<std::vector<int>> augs;
  std::vector<int> piv;

  // Reduces v (and aug alongside) against the stored rows. Returns the pivot
  // column of the residue, or -1 when v vanishes.
  int reduce(std::vector<int>& v, std::vector<int>& aug) const {
    for (size_t r = 0; r < rows.size(); ++r) {
      int f = v[piv[r]];
      if (f == 0) continue;
      for (int j = 0; j < nc; ++j) v[j] = F->sub(v[j], F->mul(f, rows[r][j]));
      for (int j = 0; j < na; ++j) aug[j] = F->sub(aug[j], F->mul(f, augs[r][j]));
    }
    for (int j = 0; j < nc; ++j)
      if (v[j] != 0) return j;
    return -1;
  }

  // False when v reduces to zero; vanished then receives the reduced aug.
  bool insert(std::vector<int> v, std::vector<int> aug, std::vector<int>* vanished = nullptr) {
    int pc = reduce(v, aug);
    if (pc < 0) {
      if (vanished) *vanished = std::move(aug);
      return false;
    }
    int s = F->inv(v[pc]);
    for (auto& x : v) x = F->mul(x, s);
    for (auto& x : aug) x = F->mul(x, s);
    for (size_t r = 0; r < rows.size(); ++r) {
      int f = rows[r][pc];
      if (f == 0) continue;
      for (int j = 0; j < nc; ++j) rows[r][j] = F->sub(rows[r][j], F->mul(f, v[j]));
      for (int j = 0; j < na; ++j) augs[r][j] = F->sub(augs[r][j], F->mul(f, aug[j]));
    }
    size_t pos = 0;
    while (pos < piv.size() && piv[pos] < pc) ++pos;
    rows.insert(rows.begin() + pos, std::move(v));
    augs.insert(augs.begin() + pos, std::move(aug));
    piv.insert(piv.begin() + pos, pc);
    return true;
  }

  bool spans(const std::vector<int>& v) const {
    std::vector<int> w = v, aug(na, 0);
    return reduce(w, aug) < 0;
  }
};

std::vector<int> raw_mul(const FieldCtx* F, int n, const std::vector<int>& a,
                         const std::vector<int>& b) {
  std::vector<int> r(static_cast<size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      int aik = a[static_cast<size_t>(i) * n + k];
      if (aik == 0) continue;
      for (int j = 0; j < n; ++j)
        r[static_cast<size_t>(i) * n + j] =
            F->add(r[static_cast<size_t>(i) * n + j], F->mul(aik, b[static_cast<size_t>(k) * n + j]));
    }
  return r;
}

std::vector<int> row_times_mat(const FieldCtx* F, int n, const std::vector<int>& v,
                               const UMat& h) {
  std::vector<int> r(n, 0);
  for (int i = 0; i < n; ++i) {
    int vi = v[i];
    if (vi == 0) continue;
    for (int j = 0; j < n; ++j) r[j] = F->add(r[j], F->mul(vi, h.at(i, j)));
  }
  return r;
}

int raw_det(const FieldCtx* F, int n, std::vector<int> m) {
  int d = 1;
  for (int col = 0; col < n; ++col) {
    int pr = -1;
    for (int r = col; r < n; ++r)
      if (m[static_cast<size_t>(r) * n + col] != 0) {
        pr = r;
        break;
      }
    if (pr < 0) return 0;
    if (pr != col) {
      for (int j = 0; j < n; ++j)
        std::swap(m[static_cast<size_t>(pr) * n + j], m[static_cast<size_t>(col) * n + j]);
      d = F->neg(d);
    }
    int pv = m[static_cast<size_t>(col) * n + col];
    d = F->mul(d, pv);
    int pi = F->inv(pv);
    for (int r = col + 1; r < n; ++r) {
      int f = F->mul(m[static_cast<size_t>(r) * n + col], pi);
      if (f == 0) continue;
      for (int j = col; j < n; ++j)
        m[static_cast<size_t>(r) * n + j] = F->sub(
            m[static_cast<size_t>(r) * n + j], F->mul(f, m[static_cast<size_t>(col) * n + j]));
    }
  }
  return d;
}

void require_quadratic(const FieldPtr& ctx, const char* who) {
  if (!ctx) throw std::invalid_argument(std::string(who) + ": null field context");
  if (ctx->k % 2 != 0)
    throw std::invalid_argument(std::string(who) + ": field must be a quadratic extension");
}

// (u, w) = u G w^{sigma T}
int inner(const UnitaryForm& form, const std::vector<int>& u, const std::vector<int>& w) {
  const FieldCtx* F = form.ctx.get();
  int s = 0;
  for (int i = 0; i < form.n; ++i) {
    if (u[i] == 0) continue;
    for (int j = 0; j < form.n; ++j) {
      int g = form.at(i, j);
      if (g == 0) continue;
      s = F->add(s, F->mul(F->mul(u[i], g), F->sigma(w[j])));
    }
  }
  return s;
}

std::vector<int> restricted_gram(const UnitaryForm& form,
                                 const std::vector<std::vector<int>>& basis) {
  int d = static_cast<int>(basis.size());
  std::vector<int> gram(static_cast<size_t>(d) * d, 0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) gram[static_cast<size_t>(i) * d + j] = inner(form, basis[i], basis[j]);
  return gram;
}

// Rows A with A G A^{sigma T} = I, by Gram-Schmidt against the form.
std::vector<std::vector<int>> gram_split(const UnitaryForm& form) {
  const FieldCtx* F = form.ctx.get();
  int n = form.n;
  std::vector<std::vector<int>> cur;
  for (int i = 0; i < n; ++i) {
    std::vector<int> e(n, 0);
    e[i] = 1;
    cur.push_back(std::move(e));
  }
  std::vector<std::vector<int>> ortho;
  while (!cur.empty()) {
    std::vector<int> w;
    for (const auto& r : cur)
      if (inner(form, r, r) != 0) {
        w = r;
        break;
      }
    if (w.empty()) {
      // Every basis vector isotropic: combine a pair with nonzero product.
      bool found = false;
      for (size_t i = 0; i < cur.size() && !found; ++i)
        for (size_t j = i + 1; j < cur.size() && !found; ++j) {
          int mu = inner(form, cur[j], cur[i]);
          if (mu == 0) continue;
          for (long long lam = 1; lam < F->Q && !found; ++lam) {
            int lm = F->mul(static_cast<int>(lam), mu);
            if (F->add(lm, F->sigma(lm)) == 0) continue;
            w = cur[i];
            for (int t = 0; t < n; ++t)
              w[t] = F->add(w[t], F->mul(static_cast<int>(lam), cur[j][t]));
            found = true;
          }
        }
      if (!found) throw std::invalid_argument("gram_split: degenerate form");
    }
    int nu = inner(form, w, w);
    int s = F->solve_norm(F->inv(nu));
    if (s < 0) throw std::logic_error("gram_split: norm equation unsolvable");
    std::vector<int> v(n);
    for (int t = 0; t < n; ++t) v[t] = F->mul(s, w[t]);
    ortho.push_back(v);
    for (auto& r : cur) {
      int c = inner(form, r, v);
      if (c == 0) continue;
      for (int t = 0; t < n; ++t) r[t] = F->sub(r[t], F->mul(c, v[t]));
    }
    cur = row_echelon_basis(form.ctx, cur);
  }
  return ortho;
}

}  // namespace

// ---------------------------------------------------------------------------
// forms

bool UnitaryForm::is_identity_gram() const {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (at(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

FormPtr UnitaryForm::with_gram(FieldPtr ctx, std::vector<int> gram) {
  require_quadratic(ctx, "UnitaryForm");
  int n = 0;
  while (static_cast<size_t>(n) * n < gram.size()) ++n;
  if (static_cast<size_t>(n) * n != gram.size())
    throw std::invalid_argument("UnitaryForm: gram must be square");
  auto f = std::make_shared<UnitaryForm>();
  f->ctx = std::move(ctx);
  f->n = n;
  f->gram = std::move(gram);
  const FieldCtx* F = f->ctx.get();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (f->at(i, j) != F->sigma(f->at(j, i)))
        throw std::invalid_argument("UnitaryForm: gram not hermitian");
  if (raw_det(F, n, f->gram) == 0) throw std::invalid_argument("UnitaryForm: gram singular");
  return f;
}

FormPtr UnitaryForm::identity(FieldPtr ctx, int n) {
  if (n < 0) throw std::invalid_argument("UnitaryForm: n >= 0");
  std::vector<int> gram(static_cast<size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) gram[static_cast<size_t>(i) * n + i] = 1;
  return with_gram(std::move(ctx), std::move(gram));
}

FormPtr UnitaryForm::split(FieldPtr ctx, int n) {
  if (n <= 0 || n % 2 != 0) throw std::invalid_argument("UnitaryForm::split: n must be even");
  int m = n / 2;
  std::vector<int> gram(static_cast<size_t>(n) * n, 0);
  for (int i = 0; i < m; ++i) {
    gram[static_cast<size_t>(i) * n + (m + i)] = 1;
    gram[static_cast<size_t>(m + i) * n + i] = 1;
  }
  return with_gram(std::move(ctx), std::move(gram));
}

FormPtr UnitaryForm::split_pair(FieldPtr ctx, int n) {
  if (n <= 0 || n % 4 != 0)
    throw std::invalid_argument("UnitaryForm::split_pair: n must be divisible by 4");
  int half = n / 2;
  FormPtr j = split(ctx, half);
  std::vector<int> gram(static_cast<size_t>(n) * n, 0);
  for (int b = 0; b < 2; ++b)
    for (int i = 0; i < half; ++i)
      for (int t = 0; t < half; ++t)
        gram[static_cast<size_t>(b * half + i) * n + (b * half + t)] = j->at(i, t);
  return with_gram(std::move(ctx), std::move(gram));
}

// ---------------------------------------------------------------------------
// matrices

UMat mat_identity(FormPtr form) {
  int n = form->n;
  std::vector<int> a(static_cast<size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) a[static_cast<size_t>(i) * n + i] = 1;
  return UMat{std::move(form), std::move(a)};
}

UMat mat_from_entries(FormPtr form, std::vector<int> entries) {
  size_t nn = static_cast<size_t>(form->n) * form->n;
  if (entries.size() != nn) throw std::invalid_argument("mat_from_entries: wrong size");
  const FieldCtx* F = form->ctx.get();
  for (int e : entries)
    if (e < 0 || e >= F->Q) throw std::invalid_argument("mat_from_entries: entry out of range");
  return UMat{std::move(form), std::move(entries)};
}

UMat with_form(const UMat& x, FormPtr form) {
  if (form->n != x.n() || form->ctx.get() != x.form->ctx.get())
    throw std::invalid_argument("with_form: incompatible form");
  return UMat{std::move(form), x.a};
}

static void check_compatible(const UMat& x, const UMat& y, const char* who) {
  if (x.n() != y.n() || x.form->ctx.get() != y.form->ctx.get())
    throw std::invalid_argument(std::string(who) + ": incompatible operands");
}

UMat mul(const UMat& x, const UMat& y) {
  check_compatible(x, y, "mul");
  return UMat{x.form, raw_mul(&x.F(), x.n(), x.a, y.a)};
}

UMat add(const UMat& x, const UMat& y) {
  check_compatible(x, y, "add");
  const FieldCtx* F = &x.F();
  UMat r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = F->add(r.a[i], y.a[i]);
  return r;
}

UMat sub(const UMat& x, const UMat& y) {
  check_compatible(x, y, "sub");
  const FieldCtx* F = &x.F();
  UMat r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = F->sub(r.a[i], y.a[i]);
  return r;
}

UMat inverse(const UMat& x) {
  const FieldCtx* F = &x.F();
  int n = x.n();
  std::vector<int> m = x.a;
  UMat out = mat_identity(x.form);
  std::vector<int>& inv = out.a;
  for (int col = 0; col < n; ++col) {
    int pr = -1;
    for (int r = col; r < n; ++r)
      if (m[static_cast<size_t>(r) * n + col] != 0) {
        pr = r;
        break;
      }
    if (pr < 0) throw std::invalid_argument("inverse: singular matrix");
    if (pr != col)
      for (int j = 0; j < n; ++j) {
        std::swap(m[static_cast<size_t>(pr) * n + j], m[static_cast<size_t>(col) * n + j]);
        std::swap(inv[static_cast<size_t>(pr) * n + j], inv[static_cast<size_t>(col) * n + j]);
      }
    int pi = F->inv(m[static_cast<size_t>(col) * n + col]);
    for (int j = 0; j < n; ++j) {
      m[static_cast<size_t>(col) * n + j] = F->mul(pi, m[static_cast<size_t>(col) * n + j]);
      inv[static_cast<size_t>(col) * n + j] = F->mul(pi, inv[static_cast<size_t>(col) * n + j]);
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      int f = m[static_cast<size_t>(r) * n + col];
      if (f == 0) continue;
      for (int j = 0; j < n; ++j) {
        m[static_cast<size_t>(r) * n + j] = F->sub(
            m[static_cast<size_t>(r) * n + j], F->mul(f, m[static_cast<size_t>(col) * n + j]));
        inv[static_cast<size_t>(r) * n + j] = F->sub(
            inv[static_cast<size_t>(r) * n + j], F->mul(f, inv[static_cast<size_t>(col) * n + j]));
      }
    }
  }
  return out;
}

UMat mat_pow(const UMat& x, const BigInt& e) {
  UMat base = e < 0 ? inverse(x) : x;
  BigInt k = e < 0 ? BigInt(-e) : e;
  UMat r = mat_identity(x.form);
  while (k > 0) {
    if ((k & 1) != 0) r = mul(r, base);
    base = mul(base, base);
    k >>= 1;
  }
  return r;
}

UMat transpose(const UMat& x) {
  int n = x.n();
  UMat r = x;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r.at(i, j) = x.at(j, i);
  return r;
}

UMat sigma_transpose(const UMat& x) {
  const FieldCtx* F = &x.F();
  int n = x.n();
  UMat r = x;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r.at(i, j) = F->sigma(x.at(j, i));
  return r;
}

UMat conj(const UMat& x, const UMat& g) { return mul(mul(inverse(g), x), g); }

int det(const UMat& x) { return raw_det(&x.F(), x.n(), x.a); }

bool is_identity(const UMat& x) {
  int n = x.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (x.at(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

bool is_scalar(const UMat& x) {
  int n = x.n();
  if (n == 0) return true;
  int c = x.at(0, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (x.at(i, j) != (i == j ? c : 0)) return false;
  return c != 0;
}

bool is_involution(const UMat& x) { return !is_identity(x) && is_identity(mul(x, x)); }

UMat block_diag(FormPtr form, const std::vector<UMat>& blocks) {
  int n = form->n;
  UMat r{form, std::vector<int>(static_cast<size_t>(n) * n, 0)};
  int off = 0;
  for (const auto& b : blocks) {
    if (b.form->ctx.get() != form->ctx.get())
      throw std::invalid_argument("block_diag: field context mismatch");
    if (off + b.n() > n) throw std::invalid_argument("block_diag: blocks exceed dimension");
    for (int i = 0; i < b.n(); ++i)
      for (int j = 0; j < b.n(); ++j) r.at(off + i, off + j) = b.at(i, j);
    off += b.n();
  }
  if (off != n) throw std::invalid_argument("block_diag: blocks do not fill dimension");
  return r;
}

std::string mat_str(const UMat& x) {
  const FieldCtx* F = &x.F();
  int n = x.n();
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (i) s += ';';
    for (int j = 0; j < n; ++j) {
      if (j) s += ' ';
      s += F->elem_str(x.at(i, j));
    }
  }
  return s;
}

UMat parse_mat(FormPtr form, const std::string& s) {
  const FieldCtx* F = form->ctx.get();
  int n = form->n;
  std::vector<int> entries;
  std::string row;
  std::stringstream ss(s);
  int nrows = 0;
  while (std::getline(ss, row, ';')) {
    ++nrows;
    std::stringstream rs(row);
    std::string tok;
    int ncols = 0;
    while (rs >> tok) {
      entries.push_back(F->parse_elem(tok));
      ++ncols;
    }
    if (ncols != n) throw std::invalid_argument("parse_mat: wrong row width");
  }
  if (nrows != n) throw std::invalid_argument("parse_mat: wrong row count");
  return mat_from_entries(std::move(form), std::move(entries));
}

// ---------------------------------------------------------------------------
// orders and membership

BigInt gu_order(int n, const BigInt& q) {
  if (n < 0) throw std::invalid_argument("gu_order: n >= 0 required");
  if (q < 2) throw std::invalid_argument("gu_order: q >= 2 required");
  BigInt out = pow_bigint(q, static_cast<std::uint64_t>(n) * (n - (n > 0 ? 1 : 0)) / 2);
  for (int i = 1; i <= n; ++i) {
    BigInt term = pow_bigint(q, i);
    term += (i % 2 != 0) ? 1 : -1;
    out *= term;
  }
  return out;
}

BigInt su_order(int n, const BigInt& q) {
  if (n == 0) return 1;
  return gu_order(n, q) / (q + 1);
}

bool is_member(const UMat& h) {
  const FieldCtx* F = &h.F();
  int n = h.n();
  std::vector<int> hg = raw_mul(F, n, h.a, h.form->gram);
  std::vector<int> st(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) st[static_cast<size_t>(i) * n + j] = F->sigma(h.at(j, i));
  return raw_mul(F, n, hg, st) == h.form->gram;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("uniform_below: m > 0 required");
  std::uint64_t threshold = (-m) % m;  // 2^64 mod m
  std::uint64_t r;
  do {
    r = rng();
  } while (r < threshold);
  return r % m;
}

UMat sample_uniform(FormPtr form, std::mt19937_64& rng) {
  if (!form->is_identity_gram())
    throw std::invalid_argument("sample_uniform: identity-Gram form required");
  const FieldCtx* F = form->ctx.get();
  int n = form->n;
  std::vector<std::vector<int>> rows;
  for (int k = 0; k < n; ++k) {
    std::vector<std::vector<int>> cons;
    for (const auto& r : rows) {
      std::vector<int> c(n);
      for (int i = 0; i < n; ++i) c[i] = F->sigma(r[i]);
      cons.push_back(std::move(c));
    }
    auto basis = solution_space(form->ctx, n, cons);
    long long rejects = 0;
    for (;;) {
      std::vector<int> v(n, 0);
      for (const auto& b : basis) {
        int c = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(F->Q)));
        if (c == 0) continue;
        for (int i = 0; i < n; ++i) v[i] = F->add(v[i], F->mul(c, b[i]));
      }
      int nrm = 0;
      for (int i = 0; i < n; ++i) nrm = F->add(nrm, F->mul(v[i], F->sigma(v[i])));
      if (nrm == 1) {
        rows.push_back(std::move(v));
        break;
      }
      if (++rejects > 1000000)
        throw ResourceLimitError("sample_uniform: rejection cap exceeded");
    }
  }
  std::vector<int> a;
  a.reserve(static_cast<size_t>(n) * n);
  for (const auto& r : rows) a.insert(a.end(), r.begin(), r.end());
  return UMat{std::move(form), std::move(a)};
}

UPoly char_poly(const UMat& h) {
  const FieldCtx* F = &h.F();
  FieldPtr ctx = h.form->ctx;
  int n = h.n();
  AugEchelon W{F, n, 0, {}, {}, {}};
  UPoly result = upoly_one(ctx);
  while (static_cast<int>(W.rows.size()) < n) {
    std::vector<int> seed;
    for (int i = 0; i < n && seed.empty(); ++i) {
      std::vector<int> e(n, 0);
      e[i] = 1;
      if (!W.spans(e)) seed = std::move(e);
    }
    AugEchelon E{F, n, n + 1, {}, {}, {}};
    std::vector<int> v = seed;
    int k = 0;
    for (;;) {
      std::vector<int> w = v, dummy;
      W.reduce(w, dummy);
      std::vector<int> expr(n + 1, 0);
      expr[k] = 1;
      std::vector<int> vanished;
      if (!E.insert(std::move(w), std::move(expr), &vanished)) {
        vanished.resize(k + 1);
        result = mul(result, upoly_from(ctx, vanished));
        break;
      }
      v = row_times_mat(F, n, v, h);
      ++k;
    }
    for (const auto& r : E.rows) W.insert(r, {});
  }
  return result;
}

UPoly min_poly(const UMat& h) {
  const FieldCtx* F = &h.F();
  FieldPtr ctx = h.form->ctx;
  int n = h.n();
  UPoly m = upoly_one(ctx);
  for (int i = 0; i < n && m.deg() < n; ++i) {
    AugEchelon E{F, n, n + 1, {}, {}, {}};
    std::vector<int> v(n, 0);
    v[i] = 1;
    int k = 0;
    for (;;) {
      std::vector<int> expr(n + 1, 0);
      expr[k] = 1;
      std::vector<int> vanished;
      if (!E.insert(v, std::move(expr), &vanished)) {
        vanished.resize(k + 1);
        UPoly g = upoly_from(ctx, vanished);
        m = divmod(mul(m, g), gcd_poly(m, g)).first;
        break;
      }
      v = row_times_mat(F, n, v, h);
      ++k;
    }
  }
  return m;
}

BigInt order_of(const UMat& h) {
  UPoly mp = min_poly(h);
  if (mp.constant_term() == 0) throw std::invalid_argument("order_of: singular matrix");
  auto fac = factorize_poly(mp);
  BigInt ord = 1;
  int emax = 1;
  for (const auto& [f, e] : fac.factors) {
    ord = lcm_bigint(ord, omega(f));
    emax = std::max(emax, e);
  }
  BigInt pp = 1;
  while (pp < emax) pp *= h.F().p;
  return ord * pp;
}

UMat inv_of(const UMat& x) {
  BigInt o = order_of(x);
  if (o % 2 == 0) return mat_pow(x, o / 2);
  return mat_identity(x.form);
}

bool is_regular_semisimple(const UMat& y) { return is_separable(char_poly(y)); }

// ---------------------------------------------------------------------------
// involutions

std::vector<std::vector<int>> eigenspace(const UMat& t, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("eigenspace: sign must be +1 or -1");
  if (!is_identity(mul(t, t))) throw std::invalid_argument("eigenspace: t^2 != 1");
  const FieldCtx* F = &t.F();
  int n = t.n();
  int s = sign == 1 ? 1 : F->neg(1);
  std::vector<std::vector<int>> cons(n, std::vector<int>(n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) cons[j][i] = i == j ? F->sub(t.at(i, j), s) : t.at(i, j);
  return solution_space(t.form->ctx, n, cons);
}

std::pair<int, int> involution_type(const UMat& t) {
  int a = static_cast<int>(eigenspace(t, 1).size());
  return {a, t.n() - a};
}

bool is_strong(const UMat& t) {
  auto [a, b] = involution_type(t);
  int n = a + b;
  return 3 * a >= n && 3 * a <= 2 * n;
}

bool is_perfectly_balanced(const UMat& t) {
  auto [a, b] = involution_type(t);
  return a == (a + b) / 2;
}

bool is_balanced(const UMat& t, const Rational& alpha, const Rational& beta) {
  auto [a, b] = involution_type(t);
  Rational ratio(a, a + b);
  return alpha <= ratio && ratio <= beta;
}

InvolutionRecord involution_record(const UMat& t,
                                   std::optional<std::pair<Rational, Rational>> window) {
  InvolutionRecord rec;
  rec.matrix = t;
  auto [a, b] = involution_type(t);
  rec.dim_plus = a;
  rec.dim_minus = b;
  rec.strong = 3 * a >= a + b && 3 * a <= 2 * (a + b);
  if (window) {
    rec.balance_window = window;
    rec.balanced = is_balanced(t, window->first, window->second);
  }
  return rec;
}

std::string InvolutionRecord::to_json() const {
  nlohmann::json j;
  j["matrix"] = mat_str(matrix);
  j["n"] = matrix.n();
  j["field"] = matrix.form->ctx->spec_string();
  j["dim_plus"] = dim_plus;
  j["dim_minus"] = dim_minus;
  j["strong"] = strong;
  if (balance_window) {
    j["balance_window"] = {to_string(balance_window->first), to_string(balance_window->second)};
  }
  if (balanced) j["balanced"] = *balanced;
  return j.dump();
}

UMat bray_R(const UMat& g, const UMat& t) {
  if (!is_identity(mul(t, t))) throw std::invalid_argument("bray_R: t^2 != 1");
  UMat y = mul(t, conj(t, g));
  BigInt o = order_of(y);
  if (o % 2 == 0) return mat_pow(y, o / 2);
  return mul(g, mat_pow(y, (o - 1) / 2));
}

StrongSearchResult find_strong_involution(FormPtr form, std::mt19937_64& rng,
                                          long long max_tries) {
  StrongSearchResult res;
  while (res.tries < max_tries) {
    ++res.tries;
    UMat x = sample_uniform(form, rng);
    BigInt o = order_of(x);
    if (o % 2 != 0) continue;
    UMat t = mat_pow(x, o / 2);
    if (is_strong(t)) {
      res.t = std::move(t);
      return res;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// structured elements

UMat singer_cycle(int m, FieldPtr ctx) {
  require_quadratic(ctx, "singer_cycle");
  if (m < 1) throw std::invalid_argument("singer_cycle: m >= 1 required");
  const FieldCtx* F = ctx.get();
  BigInt N = pow_bigint(BigInt(F->Q), static_cast<std::uint64_t>(m)) - 1;
  Factorization fac = factorize(N);
  UPoly X = upoly_X(ctx);
  UPoly one = upoly_one(ctx);
  std::vector<int> digits(m, 0);
  for (;;) {
    // next candidate: lower coefficients as base-Q digits
    int pos = 0;
    while (pos < m && digits[pos] == F->Q - 1) digits[pos++] = 0;
    if (pos == m) throw std::logic_error("singer_cycle: no primitive polynomial found");
    ++digits[pos];
    if (digits[0] == 0) continue;
    std::vector<int> coeffs(digits.begin(), digits.end());
    coeffs.push_back(1);
    UPoly f = upoly_from(ctx, coeffs);
    if (!(powmod(X, N, f).c == one.c)) continue;
    bool primitive = true;
    for (const auto& [p, e] : fac.factors)
      if (powmod(X, N / p, f).c == one.c) {
        primitive = false;
        break;
      }
    if (!primitive) continue;
    FormPtr form = UnitaryForm::identity(ctx, m);
    UMat z{form, std::vector<int>(static_cast<size_t>(m) * m, 0)};
    for (int i = 0; i + 1 < m; ++i) z.at(i, i + 1) = 1;
    for (int j = 0; j < m; ++j) z.at(m - 1, j) = F->neg(f.c[j]);
    return z;
  }
}

UMat embed_alpha(const UMat& a) {
  int m = a.n();
  FormPtr form = UnitaryForm::split(a.form->ctx, 2 * m);
  UMat lower = inverse(sigma_transpose(a));
  UMat r{form, std::vector<int>(static_cast<size_t>(2 * m) * 2 * m, 0)};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      r.at(i, j) = a.at(i, j);
      r.at(m + i, m + j) = lower.at(i, j);
    }
  return r;
}

TypeElement construct_type_element(UStarType type, int m, FieldPtr ctx, std::uint64_t seed) {
  require_quadratic(ctx, "construct_type_element");
  if (m < 1) throw std::invalid_argument("construct_type_element: m >= 1 required");
  BigInt q(ctx->q_sub);
  BigInt available;
  switch (type) {
    case UStarType::A: available = counts::A(q, m); break;
    case UStarType::B: available = counts::B(q, m); break;
    case UStarType::C: available = counts::C(q, m); break;
    case UStarType::D: available = counts::D(q, m); break;
    default:
      throw std::invalid_argument("construct_type_element: type must be A, B, C or D");
  }
  if (available == 0)
    throw std::domain_error("construct_type_element: no block of this type at this degree");

  UMat z = singer_cycle(m, ctx);
  BigInt Qm = pow_bigint(BigInt(ctx->Q), static_cast<std::uint64_t>(m));
  BigInt qm = pow_bigint(q, static_cast<std::uint64_t>(m));
  BigInt zord = Qm - 1;
  std::mt19937_64 rng(seed);

  auto finish = [&](UMat y, UPoly g, const BigInt& inverters, const BigInt& centralizer) {
    if (!is_member(y)) throw std::logic_error("construct_type_element: not an isometry");
    if (!is_regular_semisimple(y))
      throw std::logic_error("construct_type_element: not regular semisimple");
    if (!(char_poly(y).c == g.c))
      throw std::logic_error("construct_type_element: characteristic polynomial mismatch");
    TypeElement te;
    te.y = std::move(y);
    te.c_y = std::move(g);
    te.type = type;
    te.expected_inverter_count = inverters;
    te.expected_centralizer_order = centralizer;
    return te;
  };

  if (type == UStarType::A || type == UStarType::C) {
    // powers of order dividing q^m + 1: exponents are multiples of q^m - 1
    BigInt step = qm - 1;
    long long cycle = (qm + 1).convert_to<long long>();
    long long start = static_cast<long long>(uniform_below(rng, static_cast<std::uint64_t>(cycle)));
    for (long long d = 0; d < cycle; ++d) {
      long long j = 1 + (start + d) % cycle;
      BigInt i = step * j;
      if (i % zord == 0) continue;
      UMat p = mat_pow(z, i);
      UPoly f = char_poly(p);
      UPoly g = type == UStarType::A ? mul(f, sigma_conj(f)) : mul(f, star_conj(f));
      if (!is_ustar_irreducible(g) || classify_type(g) != type) continue;
      if (type == UStarType::A) {
        return finish(embed_alpha(p), std::move(g), qm + 1, Qm - 1);
      }
      FormPtr preserved = preserved_hermitian_form(p);
      UMat y1 = to_form(with_form(p, preserved), UnitaryForm::identity(ctx, m));
      FormPtr ambient = UnitaryForm::identity(ctx, 2 * m);
      UMat y = block_diag(ambient, {y1, inverse(y1)});
      return finish(std::move(y), std::move(g), qm + 1, (qm + 1) * (qm + 1));
    }
  } else if (type == UStarType::B) {
    // powers inside the subfield multiplicative group: multiples of q^m + 1
    BigInt step = qm + 1;
    long long cycle = (qm - 1).convert_to<long long>();
    long long start = static_cast<long long>(uniform_below(rng, static_cast<std::uint64_t>(cycle)));
    for (long long d = 0; d < cycle; ++d) {
      long long j = 1 + (start + d) % cycle;
      BigInt i = step * j;
      if (i % zord == 0) continue;
      UMat p = mat_pow(z, i);
      UPoly f = char_poly(p);
      UPoly g = mul(f, star_conj(f));
      if (!is_ustar_irreducible(g) || classify_type(g) != UStarType::B) continue;
      return finish(embed_alpha(p), std::move(g), qm - 1, Qm - 1);
    }
  } else {
    long long cycle = (zord - 1).convert_to<long long>();
    long long start = static_cast<long long>(uniform_below(rng, static_cast<std::uint64_t>(cycle)));
    for (long long d = 0; d < cycle; ++d) {
      long long i = 1 + (start + d) % cycle;
      UMat p = mat_pow(z, BigInt(i));
      UPoly f = char_poly(p);
      UPoly g = mul(mul(f, sigma_conj(f)), mul(star_conj(f), tilde_conj(f)));
      if (!is_ustar_irreducible(g) || classify_type(g) != UStarType::D) continue;
      FormPtr ambient = UnitaryForm::split_pair(ctx, 4 * m);
      UMat y = block_diag(ambient, {embed_alpha(p), embed_alpha(inverse(p))});
      return finish(std::move(y), std::move(g), Qm - 1, (Qm - 1) * (Qm - 1));
    }
  }
  throw std::logic_error("construct_type_element: scan exhausted despite positive count");
}

// ---------------------------------------------------------------------------
// tables

UMat GroupTable::at(int i) const { return UMat{form, elems.at(static_cast<size_t>(i))}; }

int GroupTable::index_of(const UMat& x) const {
  auto it = index.find(x.a);
  return it == index.end() ? -1 : it->second;
}

GroupTable closure(const std::vector<UMat>& generators, std::uint64_t cap) {
  if (generators.empty()) throw std::invalid_argument("closure: at least one generator");
  FormPtr form = generators[0].form;
  const FieldCtx* F = form->ctx.get();
  int n = form->n;
  for (const auto& g : generators)
    if (g.n() != n || g.form->ctx.get() != F)
      throw std::invalid_argument("closure: mixed generator contexts");
  GroupTable T;
  T.form = form;
  T.generators = generators;
  UMat id = mat_identity(form);
  T.index.emplace(id.a, 0);
  T.elems.push_back(std::move(id.a));
  for (size_t qi = 0; qi < T.elems.size(); ++qi) {
    for (const auto& g : generators) {
      std::vector<int> prod = raw_mul(F, n, T.elems[qi], g.a);
      auto [it, fresh] = T.index.emplace(prod, static_cast<int>(T.elems.size()));
      if (!fresh) continue;
      if (T.elems.size() >= cap) throw ResourceLimitError("closure: size cap exceeded");
      T.elems.push_back(std::move(prod));
    }
  }
  return T;
}

GroupTable enumerate_GU(FormPtr form, std::uint64_t seed, std::uint64_t cap) {
  BigInt target = gu_order(form->n, BigInt(form->q()));
  if (target > BigInt(cap))
    throw ResourceLimitError("enumerate_GU: group order exceeds cap");
  std::mt19937_64 rng(seed);
  std::vector<UMat> gens;
  for (;;) {
    gens.push_back(sample_uniform(form, rng));
    GroupTable T = closure(gens, cap);
    if (BigInt(T.size()) == target) return T;
  }
}

std::vector<UMat> elements_with_det_one(const GroupTable& table) {
  std::vector<UMat> out;
  for (int i = 0; i < table.size(); ++i) {
    UMat x = table.at(i);
    if (det(x) == 1) out.push_back(std::move(x));
  }
  return out;
}

std::vector<int> conjugacy_class_of(const UMat& x, const GroupTable& table) {
  if (table.index_of(x) < 0) throw std::invalid_argument("conjugacy_class_of: x not in table");
  std::set<int> orbit;
  for (int i = 0; i < table.size(); ++i) {
    int idx = table.index_of(conj(x, table.at(i)));
    if (idx < 0) throw std::logic_error("conjugacy_class_of: table not closed");
    orbit.insert(idx);
  }
  return std::vector<int>(orbit.begin(), orbit.end());
}

std::vector<UMat> brute_centralizer(const UMat& y, const GroupTable& table) {
  std::vector<UMat> out;
  for (int i = 0; i < table.size(); ++i) {
    UMat x = table.at(i);
    if (mul(x, y) == mul(y, x)) out.push_back(std::move(x));
  }
  return out;
}

std::vector<UMat> brute_inverting_involutions(const UMat& y, const GroupTable& table,
                                              std::optional<std::pair<int, int>> type_filter) {
  UMat yinv = inverse(y);
  std::vector<UMat> out;
  for (int i = 0; i < table.size(); ++i) {
    UMat x = table.at(i);
    if (!is_involution(x)) continue;
    if (!(mul(x, y) == mul(yinv, x))) continue;
    if (type_filter && involution_type(x) != *type_filter) continue;
    out.push_back(std::move(x));
  }
  return out;
}

// ---------------------------------------------------------------------------
// solve route

std::vector<std::vector<int>> commuting_space_basis(const UMat& y) {
  const FieldCtx* F = &y.F();
  int n = y.n();
  std::vector<std::vector<int>> cons(static_cast<size_t>(n) * n,
                                     std::vector<int>(static_cast<size_t>(n) * n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto& row = cons[static_cast<size_t>(i) * n + j];
      for (int k = 0; k < n; ++k) {
        row[static_cast<size_t>(i) * n + k] = F->add(row[static_cast<size_t>(i) * n + k], y.at(k, j));
        row[static_cast<size_t>(k) * n + j] = F->sub(row[static_cast<size_t>(k) * n + j], y.at(i, k));
      }
    }
  return solution_space(y.form->ctx, n * n, cons);
}

std::vector<std::vector<int>> inverting_space_basis(const UMat& y) {
  const FieldCtx* F = &y.F();
  int n = y.n();
  UMat yinv = inverse(y);
  std::vector<std::vector<int>> cons(static_cast<size_t>(n) * n,
                                     std::vector<int>(static_cast<size_t>(n) * n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto& row = cons[static_cast<size_t>(i) * n + j];
      for (int k = 0; k < n; ++k) {
        row[static_cast<size_t>(i) * n + k] = F->add(row[static_cast<size_t>(i) * n + k], y.at(k, j));
        row[static_cast<size_t>(k) * n + j] =
            F->sub(row[static_cast<size_t>(k) * n + j], yinv.at(i, k));
      }
    }
  return solution_space(y.form->ctx, n * n, cons);
}

std::vector<UMat> unitary_in_span(FormPtr form, const std::vector<std::vector<int>>& basis,
                                  std::uint64_t cap) {
  const FieldCtx* F = form->ctx.get();
  int n = form->n;
  size_t nn = static_cast<size_t>(n) * n;
  for (const auto& b : basis)
    if (b.size() != nn) throw std::invalid_argument("unitary_in_span: basis width");
  int d = static_cast<int>(basis.size());
  if (pow_bigint(BigInt(F->Q), d) > BigInt(cap))
    throw ResourceLimitError("unitary_in_span: span too large to enumerate");
  std::vector<UMat> out;
  std::vector<int> acc(nn, 0);
  auto rec = [&](auto&& self, int level, const std::vector<int>& cur) -> void {
    if (level == d) {
      UMat x{form, cur};
      if (is_member(x)) out.push_back(std::move(x));
      return;
    }
    for (long long c = 0; c < F->Q; ++c) {
      std::vector<int> next = cur;
      if (c != 0)
        for (size_t t = 0; t < nn; ++t)
          next[t] = F->add(next[t], F->mul(static_cast<int>(c), basis[level][t]));
      self(self, level + 1, next);
    }
  };
  rec(rec, 0, acc);
  return out;
}

std::vector<UMat> centralizer_via_solve(const UMat& y, std::uint64_t cap) {
  return unitary_in_span(y.form, commuting_space_basis(y), cap);
}

std::vector<UMat> inverting_involutions_via_solve(const UMat& y,
                                                  std::optional<std::pair<int, int>> type_filter,
                                                  std::uint64_t cap) {
  std::vector<UMat> out;
  for (auto& x : unitary_in_span(y.form, inverting_space_basis(y), cap)) {
    if (!is_involution(x)) continue;
    if (type_filter && involution_type(x) != *type_filter) continue;
    out.push_back(std::move(x));
  }
  return out;
}

// ---------------------------------------------------------------------------
// row spaces and forms

std::vector<std::vector<int>> row_echelon_basis(FieldPtr ctx,
                                                std::vector<std::vector<int>> rows) {
  if (rows.empty()) return {};
  size_t width = rows[0].size();
  AugEchelon E{ctx.get(), static_cast<int>(width), 0, {}, {}, {}};
  for (auto& r : rows) {
    if (r.size() != width) throw std::invalid_argument("row_echelon_basis: ragged rows");
    E.insert(std::move(r), {});
  }
  return E.rows;
}

std::vector<std::vector<int>> solution_space(FieldPtr ctx, int ncols,
                                             const std::vector<std::vector<int>>& constraints) {
  const FieldCtx* F = ctx.get();
  AugEchelon E{F, ncols, 0, {}, {}, {}};
  for (const auto& c : constraints) {
    if (static_cast<int>(c.size()) != ncols)
      throw std::invalid_argument("solution_space: constraint width");
    E.insert(c, {});
  }
  std::vector<char> is_pivot(ncols, 0);
  for (int pc : E.piv) is_pivot[pc] = 1;
  std::vector<std::vector<int>> out;
  for (int fc = 0; fc < ncols; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<int> v(ncols, 0);
    v[fc] = 1;
    for (size_t r = 0; r < E.rows.size(); ++r) v[E.piv[r]] = F->neg(E.rows[r][fc]);
    out.push_back(std::move(v));
  }
  return row_echelon_basis(ctx, std::move(out));
}

std::vector<std::vector<int>> intersect_row_spaces(FieldPtr ctx,
                                                   const std::vector<std::vector<int>>& A,
                                                   const std::vector<std::vector<int>>& B) {
  if (A.empty() || B.empty()) return {};
  const FieldCtx* F = ctx.get();
  int n = static_cast<int>(A[0].size());
  int a = static_cast<int>(A.size());
  int b = static_cast<int>(B.size());
  // (x, y) with x A = y B: one constraint per ambient coordinate
  std::vector<std::vector<int>> cons(n, std::vector<int>(a + b, 0));
  for (int c = 0; c < n; ++c) {
    for (int i = 0; i < a; ++i) cons[c][i] = A[i][c];
    for (int j = 0; j < b; ++j) cons[c][a + j] = F->neg(B[j][c]);
  }
  auto sols = solution_space(ctx, a + b, cons);
  std::vector<std::vector<int>> vecs;
  for (const auto& s : sols) {
    std::vector<int> v(n, 0);
    for (int i = 0; i < a; ++i) {
      if (s[i] == 0) continue;
      for (int c = 0; c < n; ++c) v[c] = F->add(v[c], F->mul(s[i], A[i][c]));
    }
    vecs.push_back(std::move(v));
  }
  return row_echelon_basis(ctx, std::move(vecs));
}

std::vector<std::vector<int>> perp_space(FormPtr form,
                                         const std::vector<std::vector<int>>& basis) {
  const FieldCtx* F = form->ctx.get();
  int n = form->n;
  std::vector<std::vector<int>> cons;
  for (const auto& b : basis) {
    if (static_cast<int>(b.size()) != n) throw std::invalid_argument("perp_space: vector width");
    std::vector<int> c(n, 0);
    for (int j = 0; j < n; ++j) {
      int s = 0;
      for (int t = 0; t < n; ++t) s = F->add(s, F->mul(form->at(j, t), F->sigma(b[t])));
      c[j] = s;
    }
    cons.push_back(std::move(c));
  }
  return solution_space(form->ctx, n, cons);
}

FormPtr restricted_form(FormPtr form, const std::vector<std::vector<int>>& basis) {
  return UnitaryForm::with_gram(form->ctx, restricted_gram(*form, basis));
}

bool is_nondegenerate(FormPtr form, const std::vector<std::vector<int>>& basis) {
  int d = static_cast<int>(basis.size());
  return raw_det(form->ctx.get(), d, restricted_gram(*form, basis)) != 0;
}

bool leaves_invariant(const UMat& x, const std::vector<std::vector<int>>& basis) {
  const FieldCtx* F = &x.F();
  AugEchelon E{F, x.n(), 0, {}, {}, {}};
  for (const auto& b : basis) E.insert(b, {});
  for (const auto& b : basis)
    if (!E.spans(row_times_mat(F, x.n(), b, x))) return false;
  return true;
}

UMat restrict_to(const UMat& x, const std::vector<std::vector<int>>& basis) {
  const FieldCtx* F = &x.F();
  int n = x.n();
  int d = static_cast<int>(basis.size());
  AugEchelon E{F, n, d, {}, {}, {}};
  for (int i = 0; i < d; ++i) {
    std::vector<int> aug(d, 0);
    aug[i] = 1;
    if (!E.insert(basis[i], std::move(aug)))
      throw std::invalid_argument("restrict_to: basis not independent");
  }
  FormPtr rform = restricted_form(x.form, basis);
  UMat r{rform, std::vector<int>(static_cast<size_t>(d) * d, 0)};
  for (int i = 0; i < d; ++i) {
    std::vector<int> w = row_times_mat(F, n, basis[i], x);
    std::vector<int> aug(d, 0);
    if (E.reduce(w, aug) >= 0) throw std::invalid_argument("restrict_to: span not invariant");
    for (int j = 0; j < d; ++j) r.at(i, j) = F->neg(aug[j]);
  }
  return r;
}

UMat transition_matrix(FormPtr source, FormPtr target) {
  if (source->ctx.get() != target->ctx.get() || source->n != target->n)
    throw std::invalid_argument("transition_matrix: incompatible forms");
  int n = source->n;
  auto flatten = [n](const std::vector<std::vector<int>>& rows) {
    std::vector<int> a;
    a.reserve(static_cast<size_t>(n) * n);
    for (const auto& r : rows) a.insert(a.end(), r.begin(), r.end());
    return a;
  };
  UMat as{target, flatten(gram_split(*source))};
  UMat at{target, flatten(gram_split(*target))};
  UMat p = mul(inverse(at), as);
  // postcondition: P G_s P^{sigma T} = G_t
  const FieldCtx* F = source->ctx.get();
  std::vector<int> pg = raw_mul(F, n, p.a, source->gram);
  std::vector<int> pst(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pst[static_cast<size_t>(i) * n + j] = F->sigma(p.at(j, i));
  if (raw_mul(F, n, pg, pst) != target->gram)
    throw std::logic_error("transition_matrix: postcondition failed");
  return p;
}

UMat to_form(const UMat& x, FormPtr target) {
  UMat p = transition_matrix(x.form, target);
  return with_form(mul(mul(p, with_form(x, target)), inverse(p)), target);
}

FormPtr preserved_hermitian_form(const UMat& c) {
  const FieldCtx* F = &c.F();
  FieldPtr ctx = c.form->ctx;
  int n = c.n();
  std::vector<std::vector<int>> cons(static_cast<size_t>(n) * n,
                                     std::vector<int>(static_cast<size_t>(n) * n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto& row = cons[static_cast<size_t>(i) * n + j];
      for (int s = 0; s < n; ++s) {
        if (c.at(i, s) == 0) continue;
        for (int t = 0; t < n; ++t)
          row[static_cast<size_t>(s) * n + t] = F->add(row[static_cast<size_t>(s) * n + t],
                                                       F->mul(c.at(i, s), F->sigma(c.at(j, t))));
      }
      row[static_cast<size_t>(i) * n + j] = F->sub(row[static_cast<size_t>(i) * n + j], 1);
    }
  auto kernel = solution_space(ctx, n * n, cons);
  int xi = -1;
  for (long long a = 2; a < F->Q; ++a)
    if (!F->in_subfield(static_cast<int>(a))) {
      xi = static_cast<int>(a);
      break;
    }
  for (const auto& k : kernel) {
    for (int gamma : {1, xi}) {
      std::vector<int> h(static_cast<size_t>(n) * n);
      bool zero = true;
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
          int e = F->add(F->mul(gamma, k[static_cast<size_t>(s) * n + t]),
                         F->sigma(F->mul(gamma, k[static_cast<size_t>(t) * n + s])));
          h[static_cast<size_t>(s) * n + t] = e;
          if (e != 0) zero = false;
        }
      if (zero) continue;
      if (raw_det(F, n, h) == 0) continue;
      return UnitaryForm::with_gram(ctx, std::move(h));
    }
  }
  throw std::domain_error("preserved_hermitian_form: no nonsingular invariant hermitian form");
}

// ---------------------------------------------------------------------------
// pair families

LUCheck check_LU_pair(const UMat& t, const UMat& tp, int s, const Rational& alpha,
                      const Rational& beta) {
  LUCheck r;
  int n = t.n();
  if (tp.n() != n || tp.form->ctx.get() != t.form->ctx.get())
    throw std::invalid_argument("check_LU_pair: incompatible pair");
  FieldPtr ctx = t.form->ctx;
  if (2 * s < n || s > n) {
    r.reason = "s outside [n/2, n]";
    return r;
  }
  if (!is_identity(mul(t, t)) || !is_identity(mul(tp, tp))) {
    r.reason = "not involutions";
    return r;
  }
  std::pair<int, int> want{s, n - s};
  if (involution_type(t) != want || involution_type(tp) != want) {
    r.reason = "wrong involution type";
    return r;
  }
  auto ep_t = eigenspace(t, 1);
  auto ep_tp = eigenspace(tp, 1);
  auto v1 = intersect_row_spaces(ctx, ep_t, ep_tp);
  r.h = static_cast<int>(v1.size());
  if (r.h != 2 * s - n) {
    r.reason = "common fixed space has wrong dimension";
    return r;
  }
  if (!is_nondegenerate(t.form, v1)) {
    r.reason = "common fixed space degenerate";
    return r;
  }
  r.v1_nondegenerate = true;
  auto v2 = perp_space(t.form, v1);
  if (static_cast<int>(v2.size()) != 2 * (n - s))
    throw std::logic_error("check_LU_pair: perp dimension");
  if (!leaves_invariant(t, v2) || !leaves_invariant(tp, v2))
    throw std::logic_error("check_LU_pair: perp not invariant");
  UMat t2 = restrict_to(t, v2);
  UMat y = mul(t, tp);
  UMat y2 = restrict_to(y, v2);
  if (involution_type(t2) != std::pair<int, int>{n - s, n - s}) {
    r.reason = "restriction of t not perfectly balanced";
    return r;
  }
  if (!is_regular_semisimple(y2)) {
    r.reason = "restricted product not regular semisimple";
    return r;
  }
  UPoly cp = char_poly(y2);
  const FieldCtx* F = ctx.get();
  if (eval(cp, 1) == 0 || eval(cp, F->neg(1)) == 0) {
    r.reason = "restricted product has eigenvalue +-1";
    return r;
  }
  UMat z2 = inv_of(y2);
  if (!is_identity(mul(z2, z2)) || !is_balanced(z2, alpha, beta)) {
    r.reason = "involution of restricted product not balanced";
    return r;
  }
  r.member = true;

  UMat z = inv_of(y);
  auto ep_z = eigenspace(z, 1);
  auto em_z = eigenspace(z, -1);
  auto em_t = eigenspace(t, -1);
  auto v2p = intersect_row_spaces(ctx, v2, ep_z);
  const auto& v2m = em_z;
  r.k_plus = static_cast<int>(v2p.size()) / 2;
  r.k_minus = static_cast<int>(v2m.size()) / 2;
  r.dim_v1_cap_eplus_t = static_cast<int>(intersect_row_spaces(ctx, v1, ep_t).size());
  r.dim_v2p_cap_eplus_t = static_cast<int>(intersect_row_spaces(ctx, v2p, ep_t).size());
  r.dim_v2p_cap_eminus_t = static_cast<int>(intersect_row_spaces(ctx, v2p, em_t).size());
  r.dim_v2m_cap_eplus_t = static_cast<int>(intersect_row_spaces(ctx, v2m, ep_t).size());
  r.dim_v2m_cap_eminus_t = static_cast<int>(intersect_row_spaces(ctx, v2m, em_t).size());
  if (leaves_invariant(z, ep_t) && is_nondegenerate(t.form, ep_t)) {
    UMat zr = restrict_to(z, ep_t);
    r.z_on_eplus_t_third_balanced =
        is_identity(mul(zr, zr)) && is_balanced(zr, Rational(1, 3), Rational(2, 3));
  }
  return r;
}

bool contains_SU(const std::vector<UMat>& gens, std::uint64_t cap) {
  for (const auto& g : gens)
    if (!is_member(g)) throw std::invalid_argument("contains_SU: generator not an isometry");
  GroupTable T = closure(gens, cap);
  BigInt target = su_order(T.form->n, BigInt(T.form->q()));
  BigInt count = 0;
  for (int i = 0; i < T.size(); ++i)
    if (det(T.at(i)) == 1) ++count;
  return count == target;
}

}  // namespace unicent::ugroup
