#include "unicent/upoly.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace unicent {

void UPoly::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

bool upoly_less(const UPoly& a, const UPoly& b) {
  if (a.deg() != b.deg()) return a.deg() < b.deg();
  return a.c < b.c;
}

UPoly upoly_from(FieldPtr ctx, const std::vector<int>& coeffs) {
  UPoly f{std::move(ctx), coeffs};
  f.trim();
  return f;
}

UPoly upoly_zero(FieldPtr ctx) { return UPoly{std::move(ctx), {}}; }
UPoly upoly_one(FieldPtr ctx) { return UPoly{std::move(ctx), {1}}; }
UPoly upoly_X(FieldPtr ctx) { return UPoly{std::move(ctx), {0, 1}}; }

UPoly upoly_linear(FieldPtr ctx, int a) {
  UPoly f{ctx, {ctx->neg(a), 1}};
  return f;
}

UPoly add(const UPoly& f, const UPoly& g) {
  const FieldCtx* F = f.ctx.get();
  UPoly r{f.ctx, std::vector<int>(std::max(f.c.size(), g.c.size()), 0)};
  for (size_t i = 0; i < r.c.size(); ++i) {
    int a = i < f.c.size() ? f.c[i] : 0;
    int b = i < g.c.size() ? g.c[i] : 0;
    r.c[i] = F->add(a, b);
  }
  r.trim();
  return r;
}

UPoly sub(const UPoly& f, const UPoly& g) {
  const FieldCtx* F = f.ctx.get();
  UPoly r{f.ctx, std::vector<int>(std::max(f.c.size(), g.c.size()), 0)};
  for (size_t i = 0; i < r.c.size(); ++i) {
    int a = i < f.c.size() ? f.c[i] : 0;
    int b = i < g.c.size() ? g.c[i] : 0;
    r.c[i] = F->sub(a, b);
  }
  r.trim();
  return r;
}

UPoly mul(const UPoly& f, const UPoly& g) {
  if (f.is_zero() || g.is_zero()) return upoly_zero(f.ctx);
  const FieldCtx* F = f.ctx.get();
  UPoly r{f.ctx, std::vector<int>(f.c.size() + g.c.size() - 1, 0)};
  for (size_t i = 0; i < f.c.size(); ++i) {
    if (f.c[i] == 0) continue;
    for (size_t j = 0; j < g.c.size(); ++j) {
      if (g.c[j] == 0) continue;
      r.c[i + j] = F->add(r.c[i + j], F->mul(f.c[i], g.c[j]));
    }
  }
  r.trim();
  return r;
}

UPoly mul_scalar(const UPoly& f, int s) {
  const FieldCtx* F = f.ctx.get();
  UPoly r = f;
  for (int& x : r.c) x = F->mul(x, s);
  r.trim();
  return r;
}

std::pair<UPoly, UPoly> divmod(const UPoly& f, const UPoly& g) {
  if (g.is_zero()) throw std::invalid_argument("polynomial division by zero");
  const FieldCtx* F = f.ctx.get();
  if (f.deg() < g.deg()) return {upoly_zero(f.ctx), f};
  std::vector<int> rem = f.c;
  std::vector<int> quo(f.deg() - g.deg() + 1, 0);
  int glead_inv = F->inv(g.c.back());
  for (int i = f.deg(); i >= g.deg(); --i) {
    int coef = F->mul(rem[i], glead_inv);
    if (coef == 0) continue;
    quo[i - g.deg()] = coef;
    for (int j = 0; j <= g.deg(); ++j)
      rem[i - g.deg() + j] = F->sub(rem[i - g.deg() + j], F->mul(coef, g.c[j]));
  }
  UPoly q{f.ctx, std::move(quo)}, r{f.ctx, std::move(rem)};
  q.trim();
  r.trim();
  return {q, r};
}

UPoly poly_mod(const UPoly& f, const UPoly& g) { return divmod(f, g).second; }

UPoly monic_scale(const UPoly& f) {
  if (f.is_zero() || f.is_monic()) return f;
  return mul_scalar(f, f.ctx->inv(f.c.back()));
}

UPoly gcd_poly(UPoly f, UPoly g) {
  while (!g.is_zero()) {
    UPoly r = poly_mod(f, g);
    f = std::move(g);
    g = std::move(r);
  }
  return monic_scale(f);
}

UPoly derivative(const UPoly& f) {
  if (f.deg() < 1) return upoly_zero(f.ctx);
  const FieldCtx* F = f.ctx.get();
  UPoly r{f.ctx, std::vector<int>(f.c.size() - 1, 0)};
  for (int i = 1; i <= f.deg(); ++i)
    r.c[i - 1] = F->mul(f.c[i], F->from_int(i));
  r.trim();
  return r;
}

int eval(const UPoly& f, int a) {
  const FieldCtx* F = f.ctx.get();
  int acc = 0;
  for (int i = f.deg(); i >= 0; --i) acc = F->add(F->mul(acc, a), f.c[i]);
  return acc;
}

UPoly powmod(const UPoly& base, BigInt e, const UPoly& mod) {
  UPoly r = upoly_one(base.ctx);
  UPoly b = poly_mod(base, mod);
  while (e > 0) {
    if ((e & 1) != 0) r = poly_mod(mul(r, b), mod);
    b = poly_mod(mul(b, b), mod);
    e >>= 1;
  }
  return r;
}

UPoly sigma_conj(const UPoly& f) {
  const FieldCtx* F = f.ctx.get();
  UPoly r = f;
  for (int& x : r.c) x = F->sigma(x);
  return r;
}

UPoly star_conj(const UPoly& f) {
  if (f.constant_term() == 0)
    throw std::invalid_argument("star_conj: zero constant term");
  const FieldCtx* F = f.ctx.get();
  int a0inv = F->inv(f.c[0]);
  UPoly r{f.ctx, std::vector<int>(f.c.size(), 0)};
  int n = f.deg();
  for (int i = 0; i <= n; ++i) r.c[i] = F->mul(f.c[n - i], a0inv);
  r.trim();
  return r;
}

UPoly tilde_conj(const UPoly& f) { return star_conj(sigma_conj(f)); }

bool is_separable(const UPoly& f) {
  if (f.deg() < 1) throw std::invalid_argument("is_separable: degree must be >= 1");
  UPoly d = derivative(f);
  if (d.is_zero()) return false;  // p-th power
  return gcd_poly(f, d).deg() == 0;
}

UPoly FactorMultiset::product() const {
  if (factors.empty()) throw std::logic_error("empty factor multiset");
  UPoly r = upoly_one(factors[0].first.ctx);
  for (const auto& [f, e] : factors)
    for (int i = 0; i < e; ++i) r = mul(r, f);
  return r;
}

bool FactorMultiset::squarefree() const {
  return std::all_of(factors.begin(), factors.end(),
                     [](const auto& fe) { return fe.second == 1; });
}

namespace {

// coefficient-wise p-th root; valid when derivative vanishes (f = g(X^p))
UPoly pth_root(const UPoly& f) {
  const FieldCtx* F = f.ctx.get();
  int p = F->p;
  BigInt root_exp = BigInt(F->Q) / p;  // inverse of Frobenius
  UPoly r{f.ctx, std::vector<int>(f.deg() / p + 1, 0)};
  for (int i = 0; i <= f.deg(); i += p)
    r.c[i / p] = F->pow(f.c[i], root_exp);
  r.trim();
  return r;
}

UPoly random_poly_below(FieldPtr ctx, int deg, std::mt19937_64& rng) {
  std::vector<int> c(deg);
  for (int& x : c) x = static_cast<int>(rng() % ctx->Q);
  return upoly_from(ctx, c);
}

// f squarefree, product of irreducibles of degree d
void equal_degree_split(const UPoly& f, int d, std::mt19937_64& rng,
                        std::vector<UPoly>& out) {
  if (f.deg() == d) {
    out.push_back(monic_scale(f));
    return;
  }
  BigInt e = (pow_bigint(BigInt(f.ctx->Q), d) - 1) / 2;
  while (true) {
    UPoly a = random_poly_below(f.ctx, f.deg(), rng);
    if (a.deg() < 1) continue;
    UPoly g = gcd_poly(a, f);
    if (g.deg() > 0 && g.deg() < f.deg()) {
      equal_degree_split(g, d, rng, out);
      equal_degree_split(divmod(f, g).first, d, rng, out);
      return;
    }
    UPoly b = sub(powmod(a, e, f), upoly_one(f.ctx));
    g = gcd_poly(b, f);
    if (g.deg() > 0 && g.deg() < f.deg()) {
      equal_degree_split(g, d, rng, out);
      equal_degree_split(divmod(f, g).first, d, rng, out);
      return;
    }
  }
}

// f monic squarefree
std::vector<UPoly> factor_squarefree(UPoly f, std::mt19937_64& rng) {
  std::vector<UPoly> out;
  BigInt Q(f.ctx->Q);
  UPoly x = upoly_X(f.ctx);
  UPoly xq = x;
  for (int d = 1; f.deg() > 0 && d <= f.deg() / 2; ++d) {
    xq = powmod(xq, Q, f);
    UPoly g = gcd_poly(sub(xq, x), f);
    if (g.deg() > 0) {
      equal_degree_split(g, d, rng, out);
      f = divmod(f, g).first;
      xq = poly_mod(xq, f);
    }
  }
  if (f.deg() > 0) out.push_back(f);
  return out;
}

void factor_rec(const UPoly& f, int mult, std::map<std::vector<int>, int>& acc,
                std::mt19937_64& rng) {
  if (f.deg() < 1) return;
  UPoly d = derivative(f);
  if (d.is_zero()) {
    factor_rec(pth_root(f), mult * f.ctx->p, acc, rng);
    return;
  }
  UPoly w = gcd_poly(f, d);
  if (w.deg() == 0) {
    for (const UPoly& h : factor_squarefree(f, rng)) acc[h.c] += mult;
    return;
  }
  factor_rec(w, mult, acc, rng);
  factor_rec(divmod(f, w).first, mult, acc, rng);
}

const Factorization& factorize_cached(const BigInt& n) {
  static std::map<BigInt, Factorization> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, factorize(n)).first;
  return it->second;
}

}  // namespace

FactorMultiset factorize_poly(const UPoly& f, std::uint64_t seed) {
  if (f.deg() < 1) throw std::invalid_argument("factorize_poly: degree must be >= 1");
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 0x685a5ed1ull);
  std::map<std::vector<int>, int> acc;
  factor_rec(monic_scale(f), 1, acc, rng);
  FactorMultiset r;
  for (const auto& [coeffs, e] : acc)
    r.factors.push_back({UPoly{f.ctx, coeffs}, e});
  std::sort(r.factors.begin(), r.factors.end(),
            [](const auto& a, const auto& b) { return upoly_less(a.first, b.first); });
  return r;
}

char type_letter(UStarType t) {
  switch (t) {
    case UStarType::A: return 'A';
    case UStarType::B: return 'B';
    case UStarType::C: return 'C';
    case UStarType::D: return 'D';
    case UStarType::E: return 'E';
  }
  return '?';
}

bool is_ustar_closed(const UPoly& g) {
  if (g.constant_term() == 0)
    throw std::invalid_argument("is_ustar_closed: zero constant term");
  if (!g.is_monic()) return false;
  return g == star_conj(g) && g == tilde_conj(g);
}

namespace {

// orbit of an irreducible f under sigma- and star-conjugation
struct ConjOrbit {
  std::vector<UPoly> members;  // distinct, deterministic order
  UStarType type;
};

ConjOrbit conj_orbit(const UPoly& f) {
  UPoly fs = sigma_conj(f);
  UPoly fst = star_conj(f);
  UPoly ft = star_conj(fs);
  ConjOrbit o;
  if (f == fs && f == fst) {
    o.members = {f};
    o.type = UStarType::E;
  } else if (f == fst) {
    o.members = {f, fs};
    o.type = UStarType::A;
  } else if (f == fs) {
    o.members = {f, fst};
    o.type = UStarType::B;
  } else if (fs == fst) {
    o.members = {f, fs};
    o.type = UStarType::C;
  } else {
    o.members = {f, fs, fst, ft};
    o.type = UStarType::D;
  }
  return o;
}

UPoly orbit_product(const ConjOrbit& o) {
  UPoly g = upoly_one(o.members[0].ctx);
  for (const UPoly& m : o.members) g = mul(g, m);
  return g;
}

}  // namespace

bool is_ustar_irreducible(const UPoly& g) {
  if (!is_ustar_closed(g)) return false;
  FactorMultiset fm = factorize_poly(g);
  if (!fm.squarefree()) return false;
  ConjOrbit o = conj_orbit(fm.factors[0].first);
  return o.members.size() == fm.factors.size();
}

UStarType classify_type(const UPoly& g) {
  if (!is_ustar_irreducible(g))
    throw std::invalid_argument("classify_type: input is not U*-irreducible");
  UPoly f = factorize_poly(g).factors[0].first;
  ConjOrbit o = conj_orbit(f);
  if (o.type == UStarType::E && g.deg() != 1)
    throw std::logic_error("unexpected self-conjugate factor of degree > 1");
  return o.type;
}

BigInt omega(const UPoly& g) {
  if (g.constant_term() == 0) throw std::invalid_argument("omega: root 0");
  UPoly f = factorize_poly(g).factors[0].first;
  int m = f.deg();
  BigInt M = pow_bigint(BigInt(f.ctx->Q), m) - 1;
  const Factorization& fac = factorize_cached(M);
  BigInt ord = M;
  UPoly x = upoly_X(f.ctx);
  UPoly one = upoly_one(f.ctx);
  for (const auto& [p, e] : fac.factors) {
    for (unsigned i = 0; i < e; ++i) {
      BigInt cand = ord / p;
      if (powmod(x, cand, f) == one)
        ord = cand;
      else
        break;
    }
  }
  return ord;
}

BigInt omega2(const UPoly& g) { return two_part(omega(g)); }

std::vector<UPoly> monic_irreducibles(FieldPtr ctx, int r, std::uint64_t cap) {
  static std::map<std::pair<const FieldCtx*, int>, std::vector<UPoly>> cache;
  auto key = std::make_pair(ctx.get(), r);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  double candidates = std::pow(static_cast<double>(ctx->Q), r);
  if (candidates > static_cast<double>(cap))
    throw ResourceLimitError("monic_irreducibles: candidate count exceeds cap");

  std::vector<UPoly> out;
  std::vector<int> c(r + 1, 0);
  c[r] = 1;
  long long total = 1;
  for (int i = 0; i < r; ++i) total *= ctx->Q;
  for (long long enc = 0; enc < total; ++enc) {
    long long t = enc;
    for (int i = 0; i < r; ++i) { c[i] = static_cast<int>(t % ctx->Q); t /= ctx->Q; }
    UPoly f{ctx, c};
    if (r == 1) {
      out.push_back(f);
      continue;
    }
    bool has_root = false;
    for (int a = 0; a < ctx->Q && !has_root; ++a)
      if (eval(f, a) == 0) has_root = true;
    if (has_root) continue;
    if (r >= 4) {
      // no linear factors; rule out factors of degree 2..r/2
      bool red = false;
      UPoly x = upoly_X(ctx);
      UPoly xq = x;
      for (int d = 1; d <= r / 2 && !red; ++d) {
        xq = powmod(xq, BigInt(ctx->Q), f);
        if (d >= 2 && gcd_poly(sub(xq, x), f).deg() > 0) red = true;
      }
      if (red) continue;
    }
    out.push_back(f);
  }
  cache[key] = out;
  return out;
}

std::vector<UStarBlock> enumerate_ustar_irreducibles(FieldPtr ctx, int degree,
                                                     const UStarEnumOptions& opts) {
  std::vector<UStarBlock> out;
  std::map<std::vector<int>, UStarBlock> dedup;

  auto consider = [&](const UPoly& f) {
    if (f.constant_term() == 0) return;  // excludes X
    ConjOrbit o = conj_orbit(f);
    int block_deg = static_cast<int>(o.members.size()) * f.deg();
    if (block_deg != degree) return;
    if (opts.type && o.type != *opts.type) return;
    UPoly g = orbit_product(o);
    if (dedup.count(g.c)) return;
    if (opts.minus_only) {
      if (o.type != UStarType::D) return;
      BigInt max2 = two_part(pow_bigint(BigInt(ctx->Q), f.deg()) - 1);
      if (omega2(g) != max2) return;
    }
    dedup[g.c] = UStarBlock{g, o.type, f.deg()};
  };

  // Types A/B/C have two-factor orbits, D has four; with a type filter only
  // the matching factor degree needs scanning.
  std::optional<UStarType> want = opts.type;
  if (opts.minus_only && !want) want = UStarType::D;
  bool scan_half = !want || (*want != UStarType::D && *want != UStarType::E);
  bool scan_quarter = !want || *want == UStarType::D;

  if (degree == 1) {
    for (int a : {ctx->from_int(1), ctx->from_int(-1)}) {
      UPoly f = upoly_linear(ctx, a);
      consider(f);
    }
  } else if (degree % 2 == 0) {
    if (scan_half)
      for (const UPoly& f : monic_irreducibles(ctx, degree / 2, opts.cap)) consider(f);
    if (scan_quarter && degree % 4 == 0)
      for (const UPoly& f : monic_irreducibles(ctx, degree / 4, opts.cap)) consider(f);
  }

  for (auto& [key, blk] : dedup) out.push_back(blk);
  return out;
}

std::vector<PiUItem> enumerate_PiU(int n, FieldPtr ctx, std::uint64_t cap) {
  // building blocks by degree, X+-1 excluded (their roots are +-1)
  std::vector<UStarBlock> blocks;
  for (int d = 2; d <= n; d += 2) {
    UStarEnumOptions opts;
    opts.cap = cap;
    for (auto& b : enumerate_ustar_irreducibles(ctx, d, opts)) blocks.push_back(b);
  }
  std::vector<PiUItem> out;
  std::vector<UStarBlock> chosen;
  // distinct blocks, ascending index, degrees summing to n
  std::function<void(size_t, int)> dfs = [&](size_t start, int remaining) {
    if (remaining == 0) {
      UPoly g = upoly_one(ctx);
      for (const auto& b : chosen) g = mul(g, b.g);
      out.push_back(PiUItem{g, chosen});
      return;
    }
    for (size_t i = start; i < blocks.size(); ++i) {
      int d = blocks[i].g.deg();
      if (d > remaining) continue;
      chosen.push_back(blocks[i]);
      dfs(i + 1, remaining - d);
      chosen.pop_back();
    }
  };
  dfs(0, n);
  std::sort(out.begin(), out.end(),
            [](const PiUItem& a, const PiUItem& b) { return upoly_less(a.poly, b.poly); });
  return out;
}

std::string upoly_str(const UPoly& f) {
  if (f.is_zero()) return "0";
  const FieldCtx* F = f.ctx.get();
  std::ostringstream os;
  bool first = true;
  for (int i = f.deg(); i >= 0; --i) {
    int a = f.c[i];
    if (a == 0) continue;
    if (!first) os << "+";
    first = false;
    auto coeffs = F->coeffs(a);
    bool constant_like = true;
    for (int j = 1; j < F->k; ++j)
      if (coeffs[j] != 0) constant_like = false;
    std::string coef_str;
    if (constant_like)
      coef_str = std::to_string(coeffs[0]);
    else
      coef_str = "(" + F->elem_str(a) + ")";
    if (i == 0) {
      os << coef_str;
    } else {
      if (!(constant_like && coeffs[0] == 1)) os << coef_str << "*";
      os << "X";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

UPoly parse_upoly(FieldPtr ctx, const std::string& s) {
  // split on top-level '+'
  std::vector<std::string> terms;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == '+' && depth == 0) {
      terms.push_back(cur);
      cur.clear();
    } else if (!isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  if (!cur.empty()) terms.push_back(cur);

  std::vector<int> coeffs;
  auto bump = [&](int power, int value) {
    if (static_cast<int>(coeffs.size()) <= power) coeffs.resize(power + 1, 0);
    coeffs[power] = ctx->add(coeffs[power], value);
  };
  for (const std::string& t : terms) {
    if (t.empty()) throw std::invalid_argument("bad polynomial: empty term");
    size_t xpos = t.find('X');
    int power = 0;
    std::string coef_part;
    if (xpos == std::string::npos) {
      coef_part = t;
    } else {
      power = 1;
      size_t caret = t.find('^', xpos);
      if (caret != std::string::npos) power = std::stoi(t.substr(caret + 1));
      coef_part = t.substr(0, xpos);
      if (!coef_part.empty() && coef_part.back() == '*') coef_part.pop_back();
    }
    int value;
    if (coef_part.empty()) {
      value = 1;
    } else if (coef_part.front() == '(') {
      value = ctx->parse_elem(coef_part.substr(1, coef_part.size() - 2));
    } else {
      value = ctx->from_int(std::stoll(coef_part));
    }
    bump(power, value);
  }
  return upoly_from(ctx, coeffs);
}

}  // namespace unicent
