#include "unicent/gfq.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace unicent {

namespace {

// dense coefficient-vector helpers over F_p, low-degree-first

std::vector<int> poly_mod(std::vector<int> a, const std::vector<int>& m, int p) {
  int dm = static_cast<int>(m.size()) - 1;
  while (static_cast<int>(a.size()) > dm) {
    int lead = a.back();
    int da = static_cast<int>(a.size()) - 1;
    if (lead != 0) {
      for (int i = 0; i <= dm; ++i) {
        int idx = da - dm + i;
        a[idx] = ((a[idx] - lead * m[i]) % p + p) % p;
      }
    }
    a.pop_back();
  }
  while (a.size() < static_cast<size_t>(dm)) a.push_back(0);
  return a;
}

std::vector<int> poly_mulmod(const std::vector<int>& a, const std::vector<int>& b,
                             const std::vector<int>& m, int p) {
  std::vector<int> c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  }
  return poly_mod(std::move(c), m, p);
}

std::vector<int> poly_powmod(std::vector<int> base, BigInt e, const std::vector<int>& m, int p) {
  int dm = static_cast<int>(m.size()) - 1;
  std::vector<int> r(dm, 0);
  r[0] = 1;
  base = poly_mod(std::move(base), m, p);
  while (e > 0) {
    if ((e & 1) != 0) r = poly_mulmod(r, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

bool is_zero(const std::vector<int>& a) {
  return std::all_of(a.begin(), a.end(), [](int c) { return c == 0; });
}

// irreducibility of monic f over F_p: x^{p^k} = x mod f and
// gcd-degree test via x^{p^{k/l}} != x for prime divisors l of k
bool poly_irreducible(const std::vector<int>& f, int p) {
  int k = static_cast<int>(f.size()) - 1;
  if (k <= 0) return false;
  if (k == 1) return true;
  std::vector<int> x(2, 0);
  x[1] = 1;
  auto xp = poly_powmod(x, pow_bigint(p, k), f, p);
  std::vector<int> xv(k, 0);
  if (k >= 2) xv[1] = 1;
  if (xp != xv) return false;
  for (int l = 2; l <= k; ++l) {
    if (k % l != 0) continue;
    bool lp = true;
    for (int d = 2; d * d <= l; ++d)
      if (l % d == 0) { lp = false; break; }
    if (!lp) continue;
    auto xq = poly_powmod(x, pow_bigint(p, k / l), f, p);
    if (xq == xv) return false;
  }
  return true;
}

std::mutex cache_mutex;
std::map<std::string, FieldPtr> ctx_cache;

}  // namespace

void FieldCtx::build(int p_, int k_, const std::vector<int>& mod) {
  p = p_;
  k = k_;
  modulus = mod;
  Q = 1;
  for (int i = 0; i < k; ++i) Q *= p;
  q_sub = 0;
  if (k % 2 == 0) {
    long long s = 1;
    for (int i = 0; i < k / 2; ++i) s *= p;
    q_sub = static_cast<int>(s);
  }
  mult_group_order_factors = factorize(BigInt(Q - 1));

  if (Q <= 121) {
    int n = static_cast<int>(Q);
    add_table.assign(n * n, 0);
    mul_table.assign(n * n, 0);
    neg_table.assign(n, 0);
    inv_table.assign(n, -1);
    for (int a = 0; a < n; ++a) {
      auto ca = coeffs(a);
      for (int b = 0; b < n; ++b) {
        auto cb = coeffs(b);
        std::vector<int> s(k);
        for (int i = 0; i < k; ++i) s[i] = (ca[i] + cb[i]) % p;
        add_table[a * n + b] = from_coeffs(s);
        mul_table[a * n + b] = from_coeffs(poly_mulmod(ca, cb, modulus, p));
      }
      std::vector<int> nc(k);
      for (int i = 0; i < k; ++i) nc[i] = (p - ca[i]) % p;
      neg_table[a] = from_coeffs(nc);
    }
    for (int a = 1; a < n; ++a) {
      if (inv_table[a] >= 0) continue;
      for (int b = 1; b < n; ++b) {
        if (mul_table[a * n + b] == 1) {
          inv_table[a] = b;
          inv_table[b] = a;
          break;
        }
      }
    }
    if (q_sub > 0) {
      sigma_table.assign(n, 0);
      for (int a = 0; a < n; ++a)
        sigma_table[a] = from_coeffs(poly_powmod(coeffs(a), BigInt(q_sub), modulus, p));
    }
  }
}

FieldPtr FieldCtx::create(int p, int k, const std::optional<std::vector<int>>& modulus) {
  if (p < 3 || !is_prime(BigInt(p))) throw std::invalid_argument("field_create: p must be an odd prime");
  if (k < 1) throw std::invalid_argument("field_create: k must be >= 1");

  std::vector<int> mod;
  if (modulus) {
    mod = *modulus;
    if (static_cast<int>(mod.size()) != k + 1 || mod.back() != 1)
      throw std::invalid_argument("field_create: modulus must be monic of degree k");
    for (int& c : mod) c = ((c % p) + p) % p;
    if (mod.back() != 1) throw std::invalid_argument("field_create: modulus must be monic of degree k");
    if (!poly_irreducible(mod, p)) throw std::invalid_argument("field_create: modulus is reducible");
  } else {
    // smallest lower-coefficient encoding c0 + c1*p + ...
    long long pk = 1;
    for (int i = 0; i < k; ++i) pk *= p;
    for (long long e = 0; e < pk; ++e) {
      std::vector<int> cand(k + 1, 0);
      long long t = e;
      for (int i = 0; i < k; ++i) { cand[i] = static_cast<int>(t % p); t /= p; }
      cand[k] = 1;
      if (poly_irreducible(cand, p)) { mod = cand; break; }
    }
  }

  std::ostringstream key;
  key << p << "^" << k << ":";
  for (size_t i = 0; i < mod.size(); ++i) key << (i ? "," : "") << mod[i];
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = ctx_cache.find(key.str());
  if (it != ctx_cache.end()) return it->second;
  auto ctx = std::shared_ptr<FieldCtx>(new FieldCtx());
  ctx->build(p, k, mod);
  ctx_cache[key.str()] = ctx;
  return ctx;
}

FieldPtr FieldCtx::parse_spec(const std::string& spec) {
  auto caret = spec.find('^');
  auto colon = spec.find(':');
  if (caret == std::string::npos)
    throw std::invalid_argument("field spec must look like p^k or p^k:c0,c1,...");
  int p = std::stoi(spec.substr(0, caret));
  int k = std::stoi(spec.substr(caret + 1, colon == std::string::npos ? std::string::npos : colon - caret - 1));
  if (colon == std::string::npos) return create(p, k);
  std::vector<int> mod;
  std::stringstream ss(spec.substr(colon + 1));
  std::string tok;
  while (std::getline(ss, tok, ',')) mod.push_back(std::stoi(tok));
  return create(p, k, mod);
}

std::string FieldCtx::spec_string() const {
  std::ostringstream os;
  os << p << "^" << k << ":";
  for (size_t i = 0; i < modulus.size(); ++i) os << (i ? "," : "") << modulus[i];
  return os.str();
}

int FieldCtx::from_coeffs(const std::vector<int>& c) const {
  long long e = 0, w = 1;
  for (int i = 0; i < k; ++i) {
    int ci = i < static_cast<int>(c.size()) ? ((c[i] % p) + p) % p : 0;
    e += ci * w;
    w *= p;
  }
  return static_cast<int>(e);
}

std::vector<int> FieldCtx::coeffs(int a) const {
  std::vector<int> c(k);
  for (int i = 0; i < k; ++i) { c[i] = a % p; a /= p; }
  return c;
}

int FieldCtx::from_int(long long c) const {
  c %= p;
  if (c < 0) c += p;
  return static_cast<int>(c);
}

int FieldCtx::add(int a, int b) const {
  if (!add_table.empty()) return add_table[a * Q + b];
  auto ca = coeffs(a), cb = coeffs(b);
  for (int i = 0; i < k; ++i) ca[i] = (ca[i] + cb[i]) % p;
  return from_coeffs(ca);
}

int FieldCtx::neg(int a) const {
  if (!neg_table.empty()) return neg_table[a];
  auto c = coeffs(a);
  for (int i = 0; i < k; ++i) c[i] = (p - c[i]) % p;
  return from_coeffs(c);
}

int FieldCtx::sub(int a, int b) const { return add(a, neg(b)); }

int FieldCtx::mul(int a, int b) const {
  if (!mul_table.empty()) return mul_table[a * Q + b];
  return from_coeffs(poly_mulmod(coeffs(a), coeffs(b), modulus, p));
}

int FieldCtx::inv(int a) const {
  if (a == 0) throw std::invalid_argument("field inverse of zero");
  if (!inv_table.empty()) return inv_table[a];
  return pow(a, BigInt(Q) - 2);
}

int FieldCtx::div(int a, int b) const { return mul(a, inv(b)); }

int FieldCtx::pow(int a, BigInt e) const {
  BigInt m = BigInt(Q) - 1;
  if (a == 0) {
    if (e == 0) return 1;
    if (e < 0) throw std::invalid_argument("zero to negative power");
    return 0;
  }
  e %= m;
  if (e < 0) e += m;
  int r = 1, b = a;
  while (e > 0) {
    if ((e & 1) != 0) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

int FieldCtx::sigma(int a) const {
  if (q_sub == 0) throw std::invalid_argument("sigma: field is not a quadratic extension");
  if (!sigma_table.empty()) return sigma_table[a];
  return pow(a, BigInt(q_sub));
}

bool FieldCtx::in_subfield(int a) const { return sigma(a) == a; }

int FieldCtx::norm(int a) const { return mul(a, sigma(a)); }

int FieldCtx::solve_norm(int a) const {
  for (int c = 0; c < Q; ++c)
    if (norm(c) == a) return c;
  return -1;
}

BigInt FieldCtx::order(int a) const {
  if (a == 0) throw std::invalid_argument("order of zero");
  BigInt ord = BigInt(Q) - 1;
  for (const auto& [prime, e] : mult_group_order_factors.factors) {
    for (unsigned i = 0; i < e; ++i) {
      BigInt cand = ord / prime;
      if (pow(a, cand) == 1)
        ord = cand;
      else
        break;
    }
  }
  return ord;
}

std::string FieldCtx::elem_str(int a) const {
  auto c = coeffs(a);
  std::ostringstream os;
  for (int i = 0; i < k; ++i) os << (i ? "," : "") << c[i];
  return os.str();
}

int FieldCtx::parse_elem(const std::string& s) const {
  std::vector<int> c;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) c.push_back(std::stoi(tok));
  if (static_cast<int>(c.size()) > k) throw std::invalid_argument("element has too many coefficients");
  return from_coeffs(c);
}

}  // namespace unicent
