#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lrlab/curves.hpp>

#include <cmath>
#include <random>

using namespace lrlab;
using namespace lrlab::curves;

namespace {

// independent oracle: count points by enumerating all (x, y) pairs
i64 ap_oracle(const WeierstrassCurve& E, u64 p) {
  i64 P = (i64)p, count = 1;
  for (i64 x = 0; x < P; ++x)
    for (i64 y = 0; y < P; ++y) {
      i64 F = y * y + E.a1 * x * y + E.a3 * y - x * x * x - E.a2 * x * x - E.a4 * x - E.a6;
      if (((F % P) + P) % P == 0) ++count;
    }
  return P + 1 - count;
}

const WeierstrassCurve E11{0, -1, 1, -10, -20, "11a1"};
const WeierstrassCurve E35{0, 1, 1, 9, 1, "35a1"};
const WeierstrassCurve E37{0, 0, 1, -1, 0, "37a1"};
const WeierstrassCurve E389{0, 1, 1, -2, 0, "389a1"};
const WeierstrassCurve E2351{1, 0, 1, -5, -5, "2351a1"};

}  // namespace

TEST_CASE("invariants of 11a1") {
  auto I = invariants(E11);
  CHECK(I.b2 == -4);
  CHECK(I.b4 == -20);
  CHECK(I.b6 == -79);
  CHECK(I.b8 == -21);
  CHECK(I.c4 == 496);
  CHECK(I.c6 == 20008);
  CHECK(I.disc == -161051);  // -11^5
  // j = -122023936/161051
  CHECK(I.j_num == -122023936);
  CHECK(I.j_den == 161051);
}

TEST_CASE("invariants of short models") {
  WeierstrassCurve E{0, 0, 0, 0, 1};  // y^2 = x^3 + 1
  auto I = invariants(E);
  CHECK(I.b2 == 0);
  CHECK(I.b4 == 0);
  CHECK(I.b6 == 4);
  CHECK(I.disc == -432);
  CHECK(I.j_num == 0);

  CHECK_THROWS_AS(invariants(WeierstrassCurve{0, 0, 0, 0, 0}), error);
}

TEST_CASE("invariant identities on random curves") {
  std::mt19937_64 rng(11);
  int done = 0;
  while (done < 2000) {
    WeierstrassCurve E{(i64)(rng() % 21) - 10, (i64)(rng() % 21) - 10, (i64)(rng() % 21) - 10,
                       (i64)(rng() % 201) - 100, (i64)(rng() % 2001) - 1000};
    Invariants I;
    try {
      I = invariants(E);
    } catch (const error&) {
      continue;  // singular draw
    }
    ++done;
    // identities beyond the ones asserted internally
    CHECK(I.c4 == I.b2 * I.b2 - 24 * I.b4);
    CHECK((i128)I.c6 == -(i128)I.b2 * I.b2 * I.b2 + 36 * (i128)I.b2 * I.b4 - 216 * (i128)I.b6);
  }
}

TEST_CASE("ap of 11a1 at small good primes") {
  // a_p for p = 2,3,5,7,13,17,19
  CHECK(ap(E11, 2) == -2);
  CHECK(ap(E11, 3) == -1);
  CHECK(ap(E11, 5) == 1);
  CHECK(ap(E11, 7) == -2);
  CHECK(ap(E11, 13) == 4);
  CHECK(ap(E11, 17) == -2);
  CHECK(ap(E11, 19) == 0);
  CHECK_THROWS_AS(ap(E11, 11), error);  // bad reduction
}

TEST_CASE("ap agrees with full enumeration oracle") {
  std::mt19937_64 rng(389);
  auto ps = arith::primes_below(300);
  int done = 0;
  while (done < 20) {
    WeierstrassCurve E{(i64)(rng() % 5) - 2, (i64)(rng() % 7) - 3, (i64)(rng() % 5) - 2,
                       (i64)(rng() % 41) - 20, (i64)(rng() % 101) - 50};
    try {
      invariants(E);
    } catch (const error&) {
      continue;
    }
    ++done;
    for (u64 p : ps) {
      if (invariants(E).disc % (i64)p == 0) continue;
      if (reduction_type(E, p).kind != ReductionKind::Good) continue;
      CHECK(ap(E, p) == ap_oracle(E, p));
    }
  }
  // one deeper sweep past the small-prime range
  for (u64 p : {503ull, 739ull, 997ull}) CHECK(ap(E11, p) == ap_oracle(E11, p));
}

TEST_CASE("ap satisfies the Hasse bound") {
  for (u64 p : arith::primes_below(500)) {
    if (p == 11) continue;
    i64 a = ap(E11, p);
    CHECK((double)a * a <= 4.0 * (double)p);
  }
}

TEST_CASE("multiplicative reduction of 11a1 and 35a1") {
  auto r = reduction_type(E11, 11);
  CHECK(r.kind == ReductionKind::MultiplicativeSplit);
  CHECK(r.conductor_exponent == 1);
  CHECK(r.component_group_order == 5);
  CHECK(r.kodaira == "I5");
  CHECK(ap_any(E11, 11) == 1);

  auto r5 = reduction_type(E35, 5);
  CHECK(r5.conductor_exponent == 1);
  CHECK((r5.kind == ReductionKind::MultiplicativeSplit ||
         r5.kind == ReductionKind::MultiplicativeNonsplit));
  auto r7 = reduction_type(E35, 7);
  CHECK(r7.conductor_exponent == 1);
  CHECK(reduction_type(E35, 3).kind == ReductionKind::Good);
}

TEST_CASE("conductors of known curves") {
  CHECK(conductor(E11) == 11);
  CHECK(conductor(E35) == 35);
  CHECK(conductor(E37) == 37);
  CHECK(conductor(E389) == 389);
  CHECK(conductor(E2351) == 2351);
  CHECK(conductor(WeierstrassCurve{0, 0, 1, -7, 6}) == 5077);
  // additive and wild cases
  CHECK(conductor(WeierstrassCurve{0, 0, 1, 0, 0}) == 27);   // y^2 + y = x^3
  CHECK(conductor(WeierstrassCurve{0, 0, 0, -1, 0}) == 32);  // y^2 = x^3 - x
  CHECK(conductor(WeierstrassCurve{0, 0, 0, 0, 1}) == 36);   // y^2 = x^3 + 1
  // the -1 twist of y^2 = x^3 + 1 gains wild conductor at 2
  CHECK(conductor(WeierstrassCurve{0, 0, 0, 0, -1}) == 144);
  CHECK(conductor(WeierstrassCurve{0, 0, 0, 0, 16}) == 27);  // isomorphic to 27a
}

TEST_CASE("conductor is model-invariant") {
  // replay the same curves through random (r, s, t) integral model changes
  std::mt19937_64 rng(27);
  for (const auto& E : {E11, E35, E37, E2351}) {
    i64 N = conductor(E);
    for (int k = 0; k < 5; ++k) {
      i64 r = (i64)(rng() % 7) - 3, s = (i64)(rng() % 5) - 2, t = (i64)(rng() % 7) - 3;
      auto F = curves::detail::transform_rst(E, r, s, t);
      CHECK(invariants(F).disc == invariants(E).disc);
      CHECK(conductor(F) == N);
    }
  }
}

TEST_CASE("additive reduction details") {
  // y^2 = x^3 - x: disc 64, additive at 2 with exponent 5 (Kodaira III)
  WeierstrassCurve E{0, 0, 0, -1, 0};
  auto r = reduction_type(E, 2);
  CHECK(r.kind == ReductionKind::Additive);
  CHECK(r.conductor_exponent == 5);
  CHECK(r.kodaira == "III");
  CHECK(r.component_group_order == 2);
  CHECK(ap_any(E, 2) == 0);

  // y^2 + y = x^3: disc -27, exponent 3 at p = 3 (Kodaira II)
  WeierstrassCurve F{0, 0, 1, 0, 0};
  auto s = reduction_type(F, 3);
  CHECK(s.kind == ReductionKind::Additive);
  CHECK(s.conductor_exponent == 3);
  CHECK(s.kodaira == "II");
  CHECK(s.component_group_order == 1);
}

TEST_CASE("large-prime Kodaira table") {
  // y^2 = x^3 - 5^2 x: disc = 64 * 5^6, I0* at 5
  WeierstrassCurve E{0, 0, 0, -25, 0};
  auto r = reduction_type(E, 5);
  CHECK(r.kind == ReductionKind::Additive);
  CHECK(r.kodaira == "I0*");
  CHECK(r.conductor_exponent == 2);
  CHECK(r.component_group_order == 4);

  // y^2 = x^3 + 5^2: v5(disc) = 4, type IV
  WeierstrassCurve F{0, 0, 0, 0, 25};
  auto s = reduction_type(F, 5);
  CHECK(s.kodaira == "IV");
  CHECK(s.component_group_order == 3);

  // y^2 = x^3 + 5: v5(disc) = 2, type II
  CHECK(reduction_type(WeierstrassCurve{0, 0, 0, 0, 5}, 5).kodaira == "II");
  // y^2 = x^3 + 5x: v5(disc) = 3, type III
  CHECK(reduction_type(WeierstrassCurve{0, 0, 0, 5, 0}, 5).kodaira == "III");
  // y^2 = x^3 + 5^4: v5(disc) = 8, type IV*
  CHECK(reduction_type(WeierstrassCurve{0, 0, 0, 0, 625}, 5).kodaira == "IV*");
  // y^2 = x^3 + 5^3 x: v5(disc) = 9, type III*
  CHECK(reduction_type(WeierstrassCurve{0, 0, 0, 125, 0}, 5).kodaira == "III*");
  // y^2 = x^3 + 5^5: v5(disc) = 10, type II*
  CHECK(reduction_type(WeierstrassCurve{0, 0, 0, 0, 3125}, 5).kodaira == "II*");
  // non-minimal: y^2 = x^3 + 5^6, same curve as y^2 = x^3 + 1 over Q
  CHECK(reduction_type(WeierstrassCurve{0, 0, 0, 0, 15625}, 5).kind == ReductionKind::Good);
}

TEST_CASE("small-prime and large-prime Tate paths agree on shared territory") {
  // multiplicative and good classifications can be cross-checked against the
  // disc/c4 criterion independent of the full algorithm
  std::mt19937_64 rng(7);
  int done = 0;
  while (done < 400) {
    WeierstrassCurve E{(i64)(rng() % 3), (i64)(rng() % 5) - 2, (i64)(rng() % 3),
                       (i64)(rng() % 21) - 10, (i64)(rng() % 41) - 20};
    Invariants I;
    try {
      I = invariants(E);
    } catch (const error&) {
      continue;
    }
    ++done;
    for (u64 p : {2ull, 3ull}) {
      auto r = reduction_type(E, p);
      int vD = 0;
      i128 d = I.disc;
      while (d % (i128)p == 0) { d /= (i128)p; ++vD; }
      if (vD == 0) {
        CHECK(r.kind == ReductionKind::Good);
      } else if (arith::umod(I.c4, p) != 0) {
        // multiplicative iff p does not divide c4 (on a p-minimal model; these
        // draws stay minimal whenever c4 is a p-unit)
        CHECK((r.kind == ReductionKind::MultiplicativeSplit ||
               r.kind == ReductionKind::MultiplicativeNonsplit));
        CHECK(r.component_group_order == vD);
      }
    }
  }
}

TEST_CASE("split versus nonsplit multiplicative") {
  // 11a1 at 11 is split; twist checks via known nonsplit example:
  // y^2 + xy + y = x^3 + x^2 (15a8, N = 15) has nonsplit reduction at 3?
  // use the -c6 criterion directly as the oracle
  for (const auto& E : {E11, E35, E37, E2351}) {
    auto I = invariants(E);
    auto f = arith::factor((u64)std::abs(I.disc));
    for (auto& [p, e] : f.factors) {
      auto r = reduction_type(E, p);
      if (r.kind != ReductionKind::MultiplicativeSplit &&
          r.kind != ReductionKind::MultiplicativeNonsplit)
        continue;
      bool split_oracle;
      if (p == 2) {
        split_oracle = arith::umod(-I.c6, 8) == 1;
      } else {
        split_oracle = arith::legendre(-I.c6, p) == 1;
      }
      CHECK((r.kind == ReductionKind::MultiplicativeSplit) == split_oracle);
    }
  }
}

TEST_CASE("ap_any signs at multiplicative primes") {
  CHECK(ap_any(E11, 11) == 1);    // split
  // 37a1 is nonsplit at 37: the tangent cone at the node is y^2 - 15 x^2 and
  // 15 is a non-residue mod 37
  CHECK(ap_any(E37, 37) == -1);
  CHECK(ap_any(E11, 7) == -2);    // good prime passthrough
}

TEST_CASE("parse_curve round trip") {
  auto E = parse_curve("0,-1,1,-10,-20");
  CHECK(E.a1 == 0);
  CHECK(E.a2 == -1);
  CHECK(E.a4 == -10);
  CHECK(E.a6 == -20);
  CHECK_THROWS_AS(parse_curve("1,2,3"), error);
  CHECK_THROWS_AS(parse_curve("1,2,3,4,x"), error);
  CHECK_THROWS_AS(parse_curve("1,2,3,4,5,6"), error);
}
