#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lrlab/mod2rep.hpp>

#include <random>

using namespace lrlab;
using namespace lrlab::mod2rep;

namespace {

const WeierstrassCurve E11{0, -1, 1, -10, -20, "11a1"};
const WeierstrassCurve E35{0, 1, 1, 9, 1, "35a1"};
const WeierstrassCurve E37{0, 0, 1, -1, 0, "37a1"};
const WeierstrassCurve E389{0, 1, 1, -2, 0, "389a1"};
const WeierstrassCurve E2351{1, 0, 1, -5, -5, "2351a1"};

// independent oracle: discriminant of a monic cubic from the coefficient formula
i128 cubic_disc(const TwoDivisionCubic& g) {
  i128 a = g.c2, b = g.c1, c = g.c0;
  return 18 * a * b * c - 4 * a * a * a * c + a * a * b * b - 4 * b * b * b - 27 * c * c;
}

}  // namespace

TEST_CASE("two_division_cubic on fixtures") {
  auto g = two_division_cubic(E11);
  CHECK(g.c2 == -4);
  CHECK(g.c1 == -160);
  CHECK(g.c0 == -1264);
  CHECK(g.delta == -161051);
  CHECK(g.disc_g == (i128)256 * -161051);
  CHECK(g.disc_g == cubic_disc(g));

  // y^2 = x^3 - x has full rational 2-torsion; scaled roots are 0, 4, -4
  auto h = two_division_cubic(WeierstrassCurve{0, 0, 0, -1, 0});
  CHECK(h.eval(0) == 0);
  CHECK(h.eval(4) == 0);
  CHECK(h.eval(-4) == 0);
}

TEST_CASE("cubic discriminant is 4096 times the curve discriminant") {
  std::mt19937_64 rng(2);
  int done = 0;
  while (done < 500) {
    WeierstrassCurve E{(i64)(rng() % 5) - 2, (i64)(rng() % 7) - 3, (i64)(rng() % 5) - 2,
                       (i64)(rng() % 41) - 20, (i64)(rng() % 101) - 50};
    try {
      curves::invariants(E);
    } catch (const error&) {
      continue;
    }
    ++done;
    auto g = two_division_cubic(E);
    CHECK(g.disc_g == cubic_disc(g));
    CHECK(g.disc_g == (i128)256 * g.delta);
  }
}

TEST_CASE("frob_order on 11a1") {
  CHECK(frob_order(E11, 7) == 2);
  CHECK(frob_order(E11, 3) == 3);
  CHECK(frob_order(E11, 13) == 2);
  CHECK_THROWS_AS(frob_order(E11, 11), error);
  CHECK_THROWS_AS(frob_order(E11, 2), error);
}

TEST_CASE("frob_order parity matches a_q and the disc symbol") {
  for (const auto& E : {E11, E35, E37, E389, E2351}) {
    i64 delta = curves::invariants(E).disc;
    for (u64 q : arith::primes_below(10000)) {
      if (q == 2 || arith::umod(delta, q) == 0) continue;
      int order = frob_order(E, q);
      i64 aq = curves::ap(E, q);
      CHECK((aq % 2 == 0) == (order == 1 || order == 2));
      CHECK((arith::legendre(delta, q) == 1) == (order == 1 || order == 3));
    }
  }
}

TEST_CASE("frob_order frequencies match the S3 equidistribution") {
  for (const auto& E : {E11, E37}) {
    i64 delta = curves::invariants(E).disc;
    int counts[4] = {0, 0, 0, 0};
    int total = 0;
    for (u64 q : arith::primes_below(100000)) {
      if (q == 2 || arith::umod(delta, q) == 0) continue;
      ++counts[frob_order(E, q)];
      ++total;
    }
    CHECK(std::abs((double)counts[1] / total - 1.0 / 6) < 0.02);
    CHECK(std::abs((double)counts[2] / total - 1.0 / 2) < 0.02);
    CHECK(std::abs((double)counts[3] / total - 1.0 / 3) < 0.02);
  }
}

TEST_CASE("mod2_image classification") {
  CHECK(mod2_image(E11) == Mod2Image::S3);
  CHECK(mod2_image(E35) == Mod2Image::S3);
  CHECK(mod2_image(E2351) == Mod2Image::S3);
  // full rational 2-torsion
  CHECK(mod2_image(WeierstrassCurve{0, 0, 0, -1, 0}) == Mod2Image::Trivial);
  // y^2 = (x - 1)(x^2 + 1): exactly one rational 2-torsion point
  CHECK(mod2_image(WeierstrassCurve{0, -1, 0, 1, -1}) == Mod2Image::C2);
}

TEST_CASE("two_adic_profile on fixtures") {
  auto p11 = two_adic_profile(E11);
  CHECK(p11.reduction == TwoAdicReduction::Supersingular);  // a_2 = -2
  CHECK(p11.ramified_at_2);
  CHECK_FALSE(p11.trivial_at_2);
  CHECK(p11.conclusive);

  auto p2351 = two_adic_profile(E2351);
  CHECK(p2351.reduction == TwoAdicReduction::Ordinary);  // a_2 = 1
  CHECK(p2351.trivial_at_2);                             // squarefree disc = -2351 = 1 mod 8
  CHECK_FALSE(p2351.ramified_at_2);
  CHECK(p2351.conclusive);

  auto p37 = two_adic_profile(E37);
  CHECK(p37.reduction == TwoAdicReduction::Supersingular);
  CHECK(p37.ramified_at_2);

  // additive at 2 is rejected
  CHECK_THROWS_AS(two_adic_profile(WeierstrassCurve{0, 0, 0, -1, 0}), error);
}

TEST_CASE("two_adic_profile structural properties on random curves") {
  std::mt19937_64 rng(64);
  int done = 0, mult_seen = 0;
  while (done < 200) {
    WeierstrassCurve E{(i64)(rng() % 3), (i64)(rng() % 5) - 2, (i64)(rng() % 3),
                       (i64)(rng() % 21) - 10, (i64)(rng() % 41) - 20};
    Invariants I;
    try {
      I = curves::invariants(E);
    } catch (const error&) {
      continue;
    }
    if (curves::reduction_type(E, 2).kind == ReductionKind::Additive) continue;
    ++done;
    // internal consistency checks in the profile throw on any mismatch between
    // the 2-adic engine and the reduction type; reaching here means they agree
    auto prof = two_adic_profile(E);
    REQUIRE(prof.conclusive);
    i64 d = arith::squarefree_part(I.disc);
    if (d % 2 == 0) CHECK(prof.ramified_at_2);  // odd 2-valuation of disc forces ramification
    if (prof.trivial_at_2) {
      CHECK(prof.reduction == TwoAdicReduction::Ordinary);
      CHECK(arith::umod(d, 8) == 1);
      CHECK_FALSE(prof.ramified_at_2);
    }
    if (prof.reduction == TwoAdicReduction::Multiplicative) ++mult_seen;
  }
  CHECK(mult_seen > 5);  // the draw covers the multiplicative branch
}

TEST_CASE("assumption_check verdicts") {
  auto r11 = assumption_check(E11);
  for (auto s : r11.items) CHECK(s == CheckStatus::Pass);
  CHECK(r11.all_pass);
  CHECK(r11.conductor == 11);
  CHECK(r11.profile.delta_squareclass == -11);
  CHECK_FALSE(r11.profile.induced_from_Qi);

  auto r35 = assumption_check(E35);
  CHECK(r35.all_pass);

  // trivial local representation at 2 sinks item (4) only
  auto r2351 = assumption_check(E2351);
  CHECK(r2351.items[0] == CheckStatus::Pass);
  CHECK(r2351.items[1] == CheckStatus::Pass);
  CHECK(r2351.items[2] == CheckStatus::Pass);
  CHECK(r2351.items[3] == CheckStatus::Fail);
  CHECK(r2351.items[4] == CheckStatus::Pass);
  CHECK_FALSE(r2351.all_pass);

  // 4 | N fails item (1) without touching the 2-adic engine
  auto r32 = assumption_check(WeierstrassCurve{0, 0, 0, -1, 0});
  CHECK(r32.items[0] == CheckStatus::Fail);
  CHECK_FALSE(r32.all_pass);

  // positive discriminant fails item (5)
  auto r389 = assumption_check(E389);
  CHECK(r389.items[4] == CheckStatus::Fail);
  CHECK_FALSE(r389.all_pass);
}
