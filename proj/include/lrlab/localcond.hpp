// Local conditions at each place: H^1 dimensions, the decision table
// identifying the Selmer local condition, the explicit order-2 involution on
// the 2-torsion x-line, and the norm-solvability certificate for isotropy of
// the tame line at a rank-lowering place.
#pragma once

#include <lrlab/mod2rep.hpp>

namespace lrlab {

enum class LocalKind {
  UnramifiedSelfDual,
  ToricLine,
  FlatAt2,
  MultAt2Line,
  ArchimedeanZero,
};

struct LocalConditionClass {
  u64 place = 0;  // 0 encodes the archimedean place
  LocalKind kind = LocalKind::UnramifiedSelfDual;
  int h1_dim = 0;
  int condition_dim = 0;
};

enum class LocalContext { Good, LevelRaised, At2, Archimedean };

// the linear fractional transformation swapping the rational 2-torsion
// x-coordinate with infinity and the two conjugate ones with each other:
// x -> (a1 x + (a2 a3 - a1 a2 - a1 a3)) / (x - a1), as a matrix mod w
struct InvolutionMap {
  u64 w = 0;
  u64 m00 = 0, m01 = 0, m10 = 0, m11 = 0;
  u64 square_scalar = 0;  // M^2 = square_scalar * I
};

enum class IsotropyStatus { CertifiedIsotropic, NotNorm };

namespace localcond {

// dim H^1(Q_v, E[2]) for v away from 2, N, disc: twice the unramified part
inline int local_h1_dim(const WeierstrassCurve& E, u64 v) {
  i64 N = curves::conductor(E);
  if (v == 2 || N % (i64)v == 0) throw error("local_h1_dim: place divides 2N");
  switch (mod2rep::frob_order(E, v)) {
    case 1: return 4;
    case 2: return 2;
    default: return 0;
  }
}

inline LocalConditionClass classify_local_condition(const WeierstrassCurve& E, u64 place,
                                                    LocalContext context, int sign = +1) {
  LocalConditionClass out;
  out.place = place;
  switch (context) {
    case LocalContext::Archimedean: {
      if (place != 0) throw error("classify_local_condition: archimedean place is 0");
      if (curves::invariants(E).disc >= 0)
        throw error("classify_local_condition: positive discriminant not classified "
                    "(complex conjugation acts trivially)");
      out.kind = LocalKind::ArchimedeanZero;
      out.h1_dim = 0;
      break;
    }
    case LocalContext::At2: {
      if (place != 2) throw error("classify_local_condition: At2 context needs place 2");
      auto red = curves::reduction_type(E, 2);
      if (red.kind == ReductionKind::Good) {
        auto prof = mod2rep::two_adic_profile(E);
        if (prof.trivial_at_2)
          throw error("classify_local_condition: trivial action at 2 not classified "
                      "(no unique finite flat model)");
        out.kind = LocalKind::FlatAt2;
        // supersingular: no invariants, h1 = 2; ordinary nontrivial: h0 = h2 = 1
        out.h1_dim = prof.reduction == TwoAdicReduction::Supersingular ? 2 : 4;
      } else if (red.kind == ReductionKind::MultiplicativeSplit ||
                 red.kind == ReductionKind::MultiplicativeNonsplit) {
        out.kind = LocalKind::MultAt2Line;
        out.h1_dim = 4;  // order-2 local image: h0 = h2 = 1
      } else {
        throw error("classify_local_condition: additive reduction at 2 not classified");
      }
      break;
    }
    case LocalContext::Good: {
      out.kind = LocalKind::UnramifiedSelfDual;
      out.h1_dim = local_h1_dim(E, place);
      break;
    }
    case LocalContext::LevelRaised: {
      if (mod2rep::frob_order(E, place) != 2)
        throw error("classify_local_condition: level-raised place needs Frobenius order 2");
      if (sign != +1)
        throw error("classify_local_condition: sign -1 at a level-raised place not classified");
      out.kind = LocalKind::ToricLine;
      out.h1_dim = 2;
      break;
    }
  }
  out.condition_dim = out.h1_dim / 2;
  return out;
}

inline InvolutionMap involution_map(const TwoDivisionCubic& g, u64 w) {
  auto rp = arith::root_profile(g.reduce(w));
  if (rp.shape != arith::CubicShape::OneRoot)
    throw error("involution_map: cubic must have exactly one root mod w");
  InvolutionMap M;
  M.w = w;
  u64 a1 = rp.root;
  // cofactor x^2 + s x + t has roots a2, a3: a2 a3 = t, a2 + a3 = -s, so the
  // upper-right entry a2 a3 - a1(a2 + a3) = t + s a1
  M.m00 = a1;
  M.m01 = (rp.cof_t + arith::mulmod(rp.cof_s, a1, w)) % w;
  M.m10 = 1;
  M.m11 = (w - a1) % w;
  // M^2 = (a1^2 + s a1 + t) I, the cofactor value at the rational root
  u64 sq = (arith::mulmod(a1, a1, w) + M.m01) % w;
  if ((M.m00 + M.m11) % w != 0) throw error("involution_map: trace is not zero");
  if (sq == 0) throw error("involution_map: degenerate (square is the zero matrix)");
  // explicit square check
  u64 s00 = (arith::mulmod(M.m00, M.m00, w) + arith::mulmod(M.m01, M.m10, w)) % w;
  u64 s01 = (arith::mulmod(M.m00, M.m01, w) + arith::mulmod(M.m01, M.m11, w)) % w;
  if (s00 != sq || s01 != 0) throw error("involution_map: square is not scalar");
  M.square_scalar = sq;
  return M;
}

// Is the tame line at w certified isotropic? The quadratic form value on its
// generator is a norm from the ramified quadratic extension iff the cofactor
// value F'(a1) = (a1 - a2)(a1 - a3) is a square mod w.
inline IsotropyStatus qform_isotropy(const WeierstrassCurve& E, u64 w) {
  i64 N = curves::conductor(E);
  if (w == 2 || N % (i64)w == 0) throw error("qform_isotropy: w divides 2N");
  TwoDivisionCubic g = mod2rep::two_division_cubic(E);
  if (arith::umod(g.delta, w) == 0) throw error("qform_isotropy: w divides the discriminant");
  auto rp = arith::root_profile(g.reduce(w));
  if (rp.shape != arith::CubicShape::OneRoot)
    throw error("qform_isotropy: Frobenius order at w must be 2");
  u64 a1 = rp.root;
  u64 value = (arith::mulmod(a1, a1, w) + arith::mulmod(rp.cof_s, a1, w) + rp.cof_t) % w;
  // second computation path: the formal derivative of the monic cubic at a1
  u64 deriv = (3 * arith::mulmod(a1, a1, w) + 2 * arith::mulmod(arith::umod(g.c2, w), a1, w) +
               arith::umod(g.c1, w)) % w;
  if (value != deriv) throw error("qform_isotropy: derivative cross-check failed");
  if (value == 0) throw error("qform_isotropy: zero derivative at a simple root");
  return arith::legendre((i64)value, w) == 1 ? IsotropyStatus::CertifiedIsotropic
                                             : IsotropyStatus::NotNorm;
}

}  // namespace localcond
}  // namespace lrlab
