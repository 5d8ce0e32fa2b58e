// The mod-2 Galois representation attached to E: 2-division cubic, Frobenius
// orders, image over Q, 2-adic local behavior, and the eligibility checklist
// used by the level-raising machinery.
#pragma once

#include <lrlab/arith.hpp>
#include <lrlab/curves.hpp>

#include <array>
#include <optional>

namespace lrlab {

// monic integral model of the 2-division polynomial:
// g(x) = x^3 + b2 x^2 + 8 b4 x + 16 b6, whose roots are 4 x(P) for P of order 2
struct TwoDivisionCubic {
  i64 c2 = 0, c1 = 0, c0 = 0;  // g = x^3 + c2 x^2 + c1 x + c0
  i128 disc_g = 0;             // = 2^8 * disc(E)
  i64 delta = 0;               // disc(E)

  arith::PrimePoly reduce(u64 q) const { return arith::PrimePoly(q, {c0, c1, c2, 1}); }

  i128 eval(i128 x) const { return ((x + c2) * x + c1) * x + c0; }
};

enum class Mod2Image { S3, C3, C2, Trivial };

enum class TwoAdicReduction { Ordinary, Supersingular, Multiplicative };

struct TwoAdicProfile {
  TwoAdicReduction reduction = TwoAdicReduction::Ordinary;
  bool ramified_at_2 = false;
  bool trivial_at_2 = false;
  bool conclusive = true;  // false when the 2-adic engine ran out of precision
};

struct Mod2Profile {
  Mod2Image image = Mod2Image::S3;
  i64 delta_squareclass = 1;
  bool induced_from_Qi = false;
  TwoAdicProfile two_adic;
  bool serre_conductor_ok = false;  // odd component groups at every bad prime
};

enum class CheckStatus { Pass, Fail, Inconclusive };

struct AssumptionReport {
  Mod2Profile profile;
  i64 conductor = 0;
  std::array<CheckStatus, 5> items{};
  bool all_pass = false;
};

namespace mod2rep {

inline TwoDivisionCubic two_division_cubic(const WeierstrassCurve& E) {
  Invariants I = curves::invariants(E);
  TwoDivisionCubic g;
  g.c2 = I.b2;
  g.c1 = 8 * I.b4;
  g.c0 = 16 * I.b6;
  g.delta = I.disc;
  g.disc_g = (i128)256 * I.disc;
  return g;
}

// order of Frobenius at q acting on the 2-torsion, for q not dividing 2*disc
inline int frob_order(const WeierstrassCurve& E, u64 q) {
  if (q == 2) throw error("frob_order: q = 2 excluded");
  TwoDivisionCubic g = two_division_cubic(E);
  if (arith::umod(g.delta, q) == 0) throw error("frob_order: q divides the discriminant");
  auto rp = arith::root_profile(g.reduce(q));
  int order;
  switch (rp.shape) {
    case arith::CubicShape::ThreeRoots: order = 1; break;
    case arith::CubicShape::OneRoot: order = 2; break;
    default: order = 3; break;
  }
  // Frobenius lies in the alternating subgroup iff disc is a square mod q
  int leg = arith::legendre(g.delta, q);
  if ((leg == 1) != (order != 2)) throw error("frob_order: parity cross-check failed");
  return order;
}

namespace detail {

inline int v2_u64(u64 x) { return x == 0 ? 64 : __builtin_ctzll(x); }

// element of the unramified cubic extension of Z_2 at precision 2^64,
// coordinates in the basis 1, u, u^2 with u^3 = -1 - u
struct W8 {
  u64 a = 0, b = 0, c = 0;
};

inline W8 operator+(W8 x, W8 y) { return {x.a + y.a, x.b + y.b, x.c + y.c}; }
inline W8 operator*(W8 x, W8 y) {
  u64 c0 = x.a * y.a;
  u64 c1 = x.a * y.b + x.b * y.a;
  u64 c2 = x.a * y.c + x.b * y.b + x.c * y.a;
  u64 c3 = x.b * y.c + x.c * y.b;
  u64 c4 = x.c * y.c;
  // u^3 = -1 - u, u^4 = -u - u^2
  return {c0 - c3, c1 - c3 - c4, c2 - c4};
}
inline W8 scalar(u64 s) { return {s, 0, 0}; }
inline int v2(const W8& x) { return std::min({v2_u64(x.a), v2_u64(x.b), v2_u64(x.c)}); }

enum class RootScan { HasRoot, NoRoot, Inconclusive };

// branch-and-bound search for a root of g in the ring R (Z_2 or W8), exact
// modulo 2^64; "no root" is rigorous, "has root" carries a Hensel certificate
// v(g(r)) > 2 v(g'(r))
template <typename R, typename EvalG, typename EvalGp, typename Val>
RootScan scan_roots(const std::vector<R>& residues_mod_2, EvalG g, EvalGp gp, Val val,
                    auto add_branch, int k) {
  std::vector<R> cand;
  for (const R& r : residues_mod_2)
    if (val(g(r)) >= 1) cand.push_back(r);
  for (int m = 1; m < k; ++m) {
    for (const R& r : cand) {
      int vg = val(g(r)), vgp = val(gp(r));
      if (vgp < 31 && vg > 2 * vgp) return RootScan::HasRoot;
    }
    std::vector<R> next;
    for (const R& r : cand)
      for (const R& r2 : add_branch(r, m))
        if (val(g(r2)) >= m + 1) next.push_back(r2);
    cand = std::move(next);
    if (cand.empty()) return RootScan::NoRoot;
    if (cand.size() > 4096) return RootScan::Inconclusive;
  }
  return RootScan::Inconclusive;
}

inline RootScan scan_z2(const TwoDivisionCubic& g, int k) {
  auto ev = [&](u64 x) { return ((x + (u64)g.c2) * x + (u64)g.c1) * x + (u64)g.c0; };
  auto evp = [&](u64 x) { return (3 * x + 2 * (u64)g.c2) * x + (u64)g.c1; };
  auto val = [](u64 x) { return v2_u64(x); };
  auto branch = [](u64 r, int m) { return std::array<u64, 2>{r, r + (1ull << m)}; };
  return scan_roots<u64>({0, 1}, ev, evp, val, branch, k);
}

inline RootScan scan_w8(const TwoDivisionCubic& g, int k) {
  auto ev = [&](W8 x) {
    return (x + scalar((u64)g.c2)) * x * x + scalar((u64)g.c1) * x + scalar((u64)g.c0);
  };
  auto evp = [&](W8 x) {
    return scalar(3) * x * x + scalar(2 * (u64)g.c2) * x + scalar((u64)g.c1);
  };
  auto val = [](const W8& x) { return v2(x); };
  auto branch = [](W8 r, int m) {
    std::array<W8, 8> out;
    u64 e = 1ull << m;
    int i = 0;
    for (u64 a : {0ull, e})
      for (u64 b : {0ull, e})
        for (u64 c : {0ull, e}) out[i++] = {r.a + a, r.b + b, r.c + c};
    return out;
  };
  std::vector<W8> start;
  for (u64 a : {0ull, 1ull})
    for (u64 b : {0ull, 1ull})
      for (u64 c : {0ull, 1ull}) start.push_back({a, b, c});
  return scan_roots<W8>(start, ev, evp, val, branch, k);
}

// is Q_2(sqrt(d)) ramified, for d squarefree?
inline bool sqrt_field_ramified(i64 d) {
  if (d % 2 == 0) return true;
  u64 u = arith::umod(d, 8);
  return u == 3 || u == 7;  // 1 mod 8 splits, 5 mod 8 is the unramified quadratic
}

}  // namespace detail

// local shape of the representation at 2, decided by 2-adic factorization of
// the 2-division cubic (precision 2^k, k <= 64) and the quadratic resolvent
inline TwoAdicProfile two_adic_profile(const WeierstrassCurve& E, int k = 64) {
  if (k < 8 || k > 64) throw error("two_adic_profile: precision k must be in [8, 64]");
  auto red = curves::reduction_type(E, 2);
  if (red.kind == ReductionKind::Additive)
    throw error("two_adic_profile: additive reduction at 2 (4 | N) is out of scope");
  TwoAdicProfile out;
  TwoDivisionCubic g = two_division_cubic(E);
  i64 d = arith::squarefree_part(g.delta);

  if (red.kind == ReductionKind::Good) {
    i64 a2 = curves::ap(E, 2);
    out.reduction = (a2 % 2 != 0) ? TwoAdicReduction::Ordinary : TwoAdicReduction::Supersingular;
  } else {
    out.reduction = TwoAdicReduction::Multiplicative;
  }

  auto z2 = detail::scan_z2(g, k);
  bool has_root;
  if (z2 == detail::RootScan::HasRoot) {
    has_root = true;
  } else if (z2 == detail::RootScan::NoRoot) {
    auto w8 = detail::scan_w8(g, k);
    if (w8 == detail::RootScan::Inconclusive) {
      out.conclusive = false;
      return out;
    }
    has_root = w8 == detail::RootScan::HasRoot;
  } else {
    out.conclusive = false;
    return out;
  }

  // a root in Z_2 or its unramified cubic extension confines all ramification
  // to the resolvent field Q_2(sqrt(disc)); no such root forces wild or even
  // inertia degree, hence ramification
  out.ramified_at_2 = has_root ? detail::sqrt_field_ramified(d) : true;

  bool good_ordinary = out.reduction == TwoAdicReduction::Ordinary;
  out.trivial_at_2 = good_ordinary && arith::umod(d, 8) == 1;

  // structural cross-checks: supersingular 2-torsion is always ramified, and a
  // reducible local representation (ordinary or multiplicative) always has a
  // 2-adic root
  if (out.reduction == TwoAdicReduction::Supersingular && (has_root || !out.ramified_at_2))
    throw error("two_adic_profile: supersingular case found a stable line");
  if (out.reduction != TwoAdicReduction::Supersingular && !has_root)
    throw error("two_adic_profile: reducible case found no 2-adic root");
  if (out.trivial_at_2 && out.ramified_at_2)
    throw error("two_adic_profile: trivial yet ramified");
  return out;
}

namespace detail {

// all integer roots of the monic cubic, by scanning divisors of the constant term
inline std::vector<i64> integer_roots(const TwoDivisionCubic& g) {
  std::vector<i64> roots;
  if (g.c0 == 0) {
    roots.push_back(0);
    // remaining quadratic x^2 + c2 x + c1
    i128 disc = (i128)g.c2 * g.c2 - 4 * (i128)g.c1;
    if (disc >= 0) {
      i64 s = (i64)std::llround(std::sqrt((double)disc));
      for (i64 t : {s - 1, s, s + 1})
        if (t >= 0 && (i128)t * t == disc && (t - g.c2) % 2 == 0) {
          roots.push_back((-g.c2 + t) / 2);
          if (t != 0) roots.push_back((-g.c2 - t) / 2);
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
  }
  u64 n = (u64)(g.c0 < 0 ? -g.c0 : g.c0);
  auto f = arith::factor(n);
  std::vector<u64> divs{1};
  for (auto& [p, e] : f.factors) {
    size_t sz = divs.size();
    u64 pk = 1;
    for (int i = 0; i < e; ++i) {
      pk *= p;
      for (size_t j = 0; j < sz; ++j) divs.push_back(divs[j] * pk);
    }
  }
  for (u64 dv : divs)
    for (i64 r : {(i64)dv, -(i64)dv})
      if (g.eval(r) == 0) roots.push_back(r);
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

}  // namespace detail

// image of the representation inside GL(E[2]) = S3, decided over Q
inline Mod2Image mod2_image(const WeierstrassCurve& E) {
  TwoDivisionCubic g = two_division_cubic(E);
  i64 d = arith::squarefree_part(g.delta);
  auto roots = detail::integer_roots(g);
  if (roots.size() == 3) return Mod2Image::Trivial;
  if (roots.size() == 1) return Mod2Image::C2;
  if (!roots.empty()) throw error("mod2_image: cubic with two integer roots");
  return d == 1 ? Mod2Image::C3 : Mod2Image::S3;
}

inline Mod2Profile mod2_profile(const WeierstrassCurve& E, int k = 64) {
  Mod2Profile out;
  TwoDivisionCubic g = two_division_cubic(E);
  out.delta_squareclass = arith::squarefree_part(g.delta);
  out.image = mod2_image(E);
  out.induced_from_Qi = out.delta_squareclass == -1;
  out.two_adic = two_adic_profile(E, k);
  i64 N = curves::conductor(E);
  out.serre_conductor_ok = true;
  for (auto& [p, e] : arith::factor((u64)N).factors)
    if (curves::reduction_type(E, p).component_group_order % 2 == 0) out.serre_conductor_ok = false;
  return out;
}

// the five-item eligibility checklist:
//  (1) 4 does not divide N
//  (2) image is all of S3 and not induced from Q(i)
//  (3) odd component groups at every bad prime; ramified at 2 when 2 | N
//  (4) nontrivial at 2 when 2 does not divide N
//  (5) disc(E) < 0
inline AssumptionReport assumption_check(const WeierstrassCurve& E, int k = 64) {
  AssumptionReport rep;
  i64 N = curves::conductor(E);
  rep.conductor = N;

  // item (1) gates the 2-adic machinery
  bool item1 = N % 4 != 0;
  rep.items[0] = item1 ? CheckStatus::Pass : CheckStatus::Fail;
  if (!item1) {
    Invariants I = curves::invariants(E);
    rep.profile.delta_squareclass = arith::squarefree_part(I.disc);
    rep.profile.image = mod2_image(E);
    rep.profile.induced_from_Qi = rep.profile.delta_squareclass == -1;
    rep.items[1] = (rep.profile.image == Mod2Image::S3 && !rep.profile.induced_from_Qi)
                       ? CheckStatus::Pass
                       : CheckStatus::Fail;
    rep.items[2] = rep.items[3] = CheckStatus::Inconclusive;
    rep.items[4] = I.disc < 0 ? CheckStatus::Pass : CheckStatus::Fail;
    rep.all_pass = false;
    return rep;
  }

  rep.profile = mod2_profile(E, k);
  rep.items[1] = (rep.profile.image == Mod2Image::S3 && !rep.profile.induced_from_Qi)
                     ? CheckStatus::Pass
                     : CheckStatus::Fail;

  bool two_divides = N % 2 == 0;
  if (!rep.profile.serre_conductor_ok) {
    rep.items[2] = CheckStatus::Fail;
  } else if (two_divides && !rep.profile.two_adic.conclusive) {
    rep.items[2] = CheckStatus::Inconclusive;
  } else if (two_divides && !rep.profile.two_adic.ramified_at_2) {
    rep.items[2] = CheckStatus::Fail;
  } else {
    rep.items[2] = CheckStatus::Pass;
  }

  if (two_divides) {
    rep.items[3] = CheckStatus::Pass;  // subsumed by ramifiedness in item (3)
  } else if (!rep.profile.two_adic.conclusive) {
    rep.items[3] = CheckStatus::Inconclusive;
  } else {
    rep.items[3] = rep.profile.two_adic.trivial_at_2 ? CheckStatus::Fail : CheckStatus::Pass;
  }

  rep.items[4] = curves::invariants(E).disc < 0 ? CheckStatus::Pass : CheckStatus::Fail;

  rep.all_pass = true;
  for (auto s : rep.items)
    if (s != CheckStatus::Pass) rep.all_pass = false;
  return rep;
}

}  // namespace mod2rep
}  // namespace lrlab
