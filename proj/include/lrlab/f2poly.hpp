// Bit-packed polynomials over F2 (bit i = coefficient of x^i) with full
// factorization: squarefree split, distinct-degree, then equal-degree via the
// char-2 trace map.
#pragma once

#include <lrlab/arith.hpp>

#include <algorithm>
#include <random>

namespace lrlab {
namespace f2poly {

using Poly = u64;

inline int deg(Poly a) { return a ? 63 - __builtin_clzll(a) : -1; }

inline Poly mul(Poly a, Poly b) {
  if (a && b && deg(a) + deg(b) >= 64) throw error("f2poly: product overflows");
  Poly r = 0;
  while (b) {
    if (b & 1) r ^= a;
    a <<= 1;
    b >>= 1;
  }
  return r;
}

inline Poly mod(Poly a, Poly f) {
  if (f == 0) throw error("f2poly: modulus is zero");
  int df = deg(f);
  for (int da = deg(a); da >= df; da = deg(a)) a ^= f << (da - df);
  return a;
}

inline Poly divexact(Poly a, Poly f) {
  Poly quot = 0;
  int df = deg(f);
  while (deg(a) >= df) {
    int shift = deg(a) - df;
    quot |= 1ull << shift;
    a ^= f << shift;
  }
  if (a != 0) throw error("f2poly: division is not exact");
  return quot;
}

inline Poly mulmod(Poly a, Poly b, Poly f) { return mod(mul(mod(a, f), mod(b, f)), f); }

inline Poly gcd(Poly a, Poly b) {
  while (b) {
    a = mod(a, b);
    std::swap(a, b);
  }
  return a;
}

inline Poly derivative(Poly a) {
  Poly r = 0;
  for (int i = 1; i <= deg(a); i += 2)
    if (a >> i & 1) r |= 1ull << (i - 1);
  return r;
}

// in F2[x] a polynomial with zero derivative is a perfect square
inline Poly sqrt_poly(Poly a) {
  Poly r = 0;
  for (int i = 0; i <= deg(a); i += 2)
    if (a >> i & 1) r |= 1ull << (i / 2);
  return r;
}

struct FactorPair {
  Poly factor;
  int multiplicity;
};

namespace detail {

// split a squarefree product of irreducibles of the same degree d
inline void equal_degree(Poly f, int d, std::vector<Poly>& out, std::mt19937_64& rng) {
  std::vector<Poly> stack{f};
  while (!stack.empty()) {
    Poly piece = stack.back();
    stack.pop_back();
    if (deg(piece) == d) {
      out.push_back(piece);
      continue;
    }
    for (;;) {
      Poly u = mod(rng() & ((2ull << deg(piece)) - 1), piece);
      if (u == 0) continue;
      // absolute trace from F_{2^d}: u + u^2 + ... + u^(2^(d-1))
      Poly t = 0, p = u;
      for (int i = 0; i < d; ++i) {
        t ^= p;
        p = mulmod(p, p, piece);
      }
      Poly s = gcd(t, piece);
      if (s == 0 || deg(s) == 0 || s == piece) continue;
      stack.push_back(s);
      stack.push_back(divexact(piece, s));
      break;
    }
  }
}

}  // namespace detail

// complete factorization into monic irreducibles (all F2 polys are monic)
inline std::vector<FactorPair> factor(Poly f) {
  if (f == 0) throw error("f2poly: factor of zero");
  std::vector<FactorPair> out;
  auto bump = [&out](Poly g, int m) {
    for (auto& fp : out)
      if (fp.factor == g) {
        fp.multiplicity += m;
        return;
      }
    out.push_back({g, m});
  };

  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::vector<std::pair<Poly, int>> work{{f, 1}};
  while (!work.empty()) {
    auto [g, m] = work.back();
    work.pop_back();
    if (deg(g) <= 0) continue;
    Poly dg = derivative(g);
    if (dg == 0) {
      work.push_back({sqrt_poly(g), 2 * m});
      continue;
    }
    Poly rep = gcd(g, dg);
    if (deg(rep) > 0) {
      work.push_back({divexact(g, rep), m});
      work.push_back({rep, m});
      continue;
    }
    // g squarefree: distinct-degree sieve
    Poly rest = g;
    Poly h = mod(2, rest);  // x
    for (int d = 1; deg(rest) > 0 && 2 * d <= deg(rest); ++d) {
      h = mulmod(h, h, rest);  // x^(2^d) mod rest
      Poly gd = gcd(h ^ 2, rest);
      if (deg(gd) <= 0) continue;
      std::vector<Poly> irr;
      detail::equal_degree(gd, d, irr, rng);
      for (Poly p : irr) {
        bump(p, m);
        rest = divexact(rest, p);
      }
      h = mod(h, rest);
    }
    if (deg(rest) > 0) bump(rest, m);  // remainder is irreducible
  }
  std::sort(out.begin(), out.end(),
            [](const FactorPair& a, const FactorPair& b) { return a.factor < b.factor; });
  return out;
}

// reduce an integer-coefficient polynomial (c[0] + c[1] x + ...) mod 2
inline Poly from_integers(const std::vector<i64>& c) {
  Poly r = 0;
  if (c.size() > 63) throw error("f2poly: degree too large");
  for (size_t i = 0; i < c.size(); ++i)
    if (c[i] & 1) r |= 1ull << i;
  return r;
}

}  // namespace f2poly
}  // namespace lrlab
