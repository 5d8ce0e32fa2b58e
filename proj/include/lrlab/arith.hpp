// Exact number-theoretic primitives: modular arithmetic, quadratic symbols,
// integer factorization and cubic factoring over prime fields.
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lrlab {

using i64 = long long;
using u64 = unsigned long long;
using i128 = __int128;
using u128 = unsigned __int128;

class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

namespace arith {

inline u64 mulmod(u64 a, u64 b, u64 m) { return (u128)a * b % m; }

inline u64 powmod(u64 base, u64 exp, u64 m) {
  u64 r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

// deterministic Miller-Rabin for 64-bit inputs
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while (!(d & 1)) d >>= 1, ++s;
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 0; i + 1 < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) { witness = false; break; }
    }
    if (witness) return false;
  }
  return true;
}

inline u64 umod(i64 a, u64 p) {
  i64 r = a % (i64)p;
  if (r < 0) r += (i64)p;
  return (u64)r;
}

// Legendre symbol (a/p) for odd primes p
inline int legendre(i64 a, u64 p) {
  if (p < 3 || p % 2 == 0) throw error("legendre: modulus must be an odd prime");
  u64 r = powmod(umod(a, p), (p - 1) / 2, p);
  if (r == 0) return 0;
  return r == 1 ? 1 : -1;
}

struct Factorization {
  // prime -> exponent, primes ascending
  std::vector<std::pair<u64, int>> factors;

  int exponent_of(u64 p) const {
    for (auto& [q, e] : factors)
      if (q == p) return e;
    return 0;
  }
};

namespace detail {

inline u64 pollard_rho(u64 n) {
  // Brent's variant
  if (n % 2 == 0) return 2;
  u64 x0 = 2, c = 1;
  while (true) {
    u64 x = x0, y = x0, d = 1;
    u64 q = 1;
    int steps = 0;
    while (d == 1) {
      x = (mulmod(x, x, n) + c) % n;
      y = (mulmod(y, y, n) + c) % n;
      y = (mulmod(y, y, n) + c) % n;
      u64 diff = x > y ? x - y : y - x;
      if (diff == 0) break;
      q = mulmod(q, diff, n);
      if (++steps % 64 == 0) {
        d = std::gcd(q, n);
        if (d != 1 && d != n) return d;
        if (d == n) break;
      }
      if (steps > (1 << 22)) break;
    }
    d = std::gcd(q, n);
    if (d != 1 && d != n) return d;
    x0 += 1;
    c += 2;
    if (c > 101) throw error("factorization failed (Pollard rho gave up)");
  }
}

inline void factor_rec(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) { out.push_back(n); return; }
  u64 d = pollard_rho(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace detail

// Trial division up to trial_bound, then Pollard rho.
inline Factorization factor(u64 n, u64 trial_bound = 1'000'000) {
  if (n == 0) throw error("factor: n must be nonzero");
  std::vector<u64> primes;
  for (u64 d = 2; d <= trial_bound && d * d <= n; d == 2 ? d = 3 : d += 2) {
    while (n % d == 0) { primes.push_back(d); n /= d; }
  }
  if (n > 1) detail::factor_rec(n, primes);
  std::sort(primes.begin(), primes.end());
  Factorization f;
  for (u64 p : primes) {
    if (!f.factors.empty() && f.factors.back().first == p)
      f.factors.back().second++;
    else
      f.factors.push_back({p, 1});
  }
  return f;
}

// The unique squarefree d with n/d a positive square; sign(d) = sign(n).
inline i64 squarefree_part(i64 n, const Factorization* hint = nullptr) {
  if (n == 0) throw error("squarefree_part: n must be nonzero");
  u64 m = n < 0 ? (u64)(-(i128)n) : (u64)n;
  Factorization f = hint ? *hint : factor(m);
  i64 d = n < 0 ? -1 : 1;
  for (auto& [p, e] : f.factors)
    if (e % 2) d *= (i64)p;
  return d;
}

// --- univariate polynomials over F_p ---------------------------------------

// coefficients c[i] of x^i, reduced into [0, p); leading coefficient nonzero
struct PrimePoly {
  u64 p = 0;
  std::vector<u64> c;

  PrimePoly() = default;
  PrimePoly(u64 modulus, std::vector<i64> coeffs) : p(modulus) {
    if (p < 3 || p % 2 == 0 || !is_prime(p)) throw error("PrimePoly: modulus must be an odd prime");
    c.reserve(coeffs.size());
    for (i64 a : coeffs) c.push_back(umod(a, p));
    while (c.size() > 1 && c.back() == 0) c.pop_back();
    if (c.empty()) c.push_back(0);
  }

  int degree() const { return (int)c.size() - 1; }

  u64 eval(u64 x) const {
    u64 r = 0;
    for (size_t i = c.size(); i-- > 0;) r = (mulmod(r, x, p) + c[i]) % p;
    return r;
  }
};

namespace poly {

using P = std::vector<u64>;  // dense, c[i] of x^i

inline void trim(P& a) { while (a.size() > 1 && a.back() == 0) a.pop_back(); }

inline P mod(P a, const P& b, u64 p) {
  trim(a);
  if (b.size() == 1) return {0};
  u64 lead_inv = powmod(b.back(), p - 2, p);
  while (a.size() >= b.size() && !(a.size() == 1 && a[0] == 0)) {
    u64 k = mulmod(a.back(), lead_inv, p);
    size_t shift = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) {
      u64 s = mulmod(k, b[i], p);
      a[shift + i] = (a[shift + i] + p - s) % p;
    }
    trim(a);
    if (a.back() == 0) break;
  }
  return a;
}

inline P mulmodpoly(const P& a, const P& b, const P& m, u64 p) {
  P r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  return mod(std::move(r), m, p);
}

inline P gcd(P a, P b, u64 p) {
  trim(a); trim(b);
  while (!(b.size() == 1 && b[0] == 0)) {
    P r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  // monic normalization
  if (!(a.size() == 1 && a[0] == 0)) {
    u64 inv = powmod(a.back(), p - 2, p);
    for (auto& x : a) x = mulmod(x, inv, p);
  }
  return a;
}

inline P derivative(const P& a, u64 p) {
  if (a.size() <= 1) return {0};
  P d(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) d[i - 1] = mulmod(a[i], i % p, p);
  trim(d);
  return d;
}

// x^p mod m by square-and-multiply
inline P xpow_p(const P& m, u64 p) {
  P result{1}, base{0, 1};
  base = mod(base, m, p);
  u64 e = p;
  while (e) {
    if (e & 1) result = mulmodpoly(result, base, m, p);
    base = mulmodpoly(base, base, m, p);
    e >>= 1;
  }
  return result;
}

}  // namespace poly

enum class CubicShape { ThreeRoots, OneRoot, Irreducible };

struct RootProfile {
  CubicShape shape;
  u64 root = 0;       // valid when shape == OneRoot
  u64 cof_s = 0;      // monic quadratic cofactor x^2 + s x + t, OneRoot only
  u64 cof_t = 0;
};

// Factorization type of a separable cubic over F_p. Direct evaluation below
// 2^16, gcd(x^p - x, f) above; the two paths cross-check in tests.
inline RootProfile root_profile(const PrimePoly& f) {
  if (f.degree() != 3) throw error("root_profile: cubic required");
  const u64 p = f.p;
  // separability
  {
    poly::P d = poly::derivative(f.c, p);
    poly::P g = poly::gcd(f.c, d, p);
    if (g.size() > 1)
      throw error("root_profile: inseparable cubic (ramified prime, excluded by q not dividing 2*N*disc)");
  }
  std::vector<u64> roots;
  if (p < (1ull << 16)) {
    for (u64 x = 0; x < p; ++x)
      if (f.eval(x) == 0) roots.push_back(x);
  } else {
    poly::P xp = poly::xpow_p(f.c, p);
    // x^p - x
    if (xp.size() < 2) xp.resize(2, 0);
    xp[1] = (xp[1] + p - 1) % p;
    poly::trim(xp);
    poly::P g = poly::gcd(f.c, xp, p);
    int nroots = (int)g.size() - 1;
    if (nroots == 1) {
      roots.push_back((p - g[0]) % p);  // monic linear factor x + g0
    } else if (nroots == 3) {
      roots.resize(3);  // values unused in the ThreeRoots branch
    } else if (nroots == 2) {
      throw error("root_profile: internal: separable cubic with two roots");
    }
  }
  RootProfile out{};
  if (roots.size() == 3) {
    out.shape = CubicShape::ThreeRoots;
  } else if (roots.empty()) {
    out.shape = CubicShape::Irreducible;
  } else {
    out.shape = CubicShape::OneRoot;
    out.root = roots[0];
    // f = lead * (x - root) * (x^2 + s x + t); synthetic division, then scale monic
    u64 lead_inv = powmod(f.c[3], p - 2, p);
    u64 c2 = mulmod(f.c[2], lead_inv, p);
    u64 c1 = mulmod(f.c[1], lead_inv, p);
    u64 s = (c2 + out.root) % p;
    u64 t = (c1 + mulmod(s, out.root, p)) % p;
    out.cof_s = s;
    out.cof_t = t;
  }
  return out;
}

// primes <= bound, ascending
inline std::vector<u64> primes_below(u64 bound) {
  std::vector<u64> out;
  if (bound < 2) return out;
  std::vector<bool> sieve(bound + 1, true);
  for (u64 i = 2; i <= bound; ++i) {
    if (sieve[i]) {
      out.push_back(i);
      for (u64 j = i * i; j <= bound; j += i) sieve[j] = false;
    }
  }
  return out;
}

}  // namespace arith
}  // namespace lrlab
