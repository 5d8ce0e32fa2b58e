#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lrlab/primescan.hpp>

using namespace lrlab;
using namespace lrlab::primescan;

namespace {
const WeierstrassCurve E11{0, -1, 1, -10, -20, "11a1"};
const WeierstrassCurve E35{0, 1, 1, 9, 1, "35a1"};
}  // namespace

TEST_CASE("level raising primes of 11a1") {
  CHECK(level_raising_primes(E11, 20) == std::vector<u64>{7, 13, 17, 19});
  CHECK(level_raising_primes(E11, 6).empty());  // a_3, a_5 odd
}

TEST_CASE("level raising density approaches 2/3") {
  auto qs = level_raising_primes(E11, 100000);
  size_t total = 0;
  for (u64 q : arith::primes_below(100000))
    if (q != 2 && q != 11) ++total;
  double freq = (double)qs.size() / (double)total;
  CHECK(std::abs(freq - 2.0 / 3) < 0.02);
}

TEST_CASE("level raising rejects ineligible curves") {
  // full 2-torsion: image is trivial, not S3
  CHECK_THROWS_AS(level_raising_primes(WeierstrassCurve{0, -1, 0, 1, -1}, 100), error);
  // disc square class -1 (induced case): y^2 = (x-1)(x^2+1) has disc -256
  CHECK_THROWS_AS(level_raising_primes(WeierstrassCurve{0, -1, 0, 1, -1}, 100), error);
}

TEST_CASE("auxiliary primes for 11a1 with sigma = {7}") {
  AuxiliarySpec spec;
  spec.curve = E11;
  spec.sigma_primes = {7};
  spec.p1 = 11;
  spec.bound = 10;
  auto res = auxiliary_primes(spec);
  REQUIRE(!res.primes.empty());
  CHECK(res.primes.front() == 3);
  CHECK(res.warning.empty());

  // every returned prime re-passes the definition item by item
  spec.bound = 2000;
  res = auxiliary_primes(spec);
  CHECK(res.primes.size() > 10);
  for (u64 q0 : res.primes) {
    CHECK(q0 % 4 == 3);
    CHECK(mod2rep::frob_order(E11, q0) == 3);
    CHECK(arith::legendre(7, q0) == 1);
    // 11 = p1 is exempt; no constraint checked there
  }
  // 1 mod 4 primes never appear
  for (u64 q0 : res.primes) CHECK(q0 % 4 != 1);
}

TEST_CASE("auxiliary primes respect the minimum and strict modes") {
  AuxiliarySpec spec;
  spec.curve = E11;
  spec.sigma_primes = {7};
  spec.p1 = 11;
  spec.bound = 2000;
  spec.min_q = 8;
  auto res = auxiliary_primes(spec);
  for (u64 q0 : res.primes) CHECK(q0 > 7);

  spec.min_q = 2;
  spec.strict_positive_disc = true;
  auto strict = auxiliary_primes(spec);
  for (u64 q0 : strict.primes) CHECK(arith::legendre(11, q0) == 1);
  CHECK(strict.primes.size() < res.primes.size() + auxiliary_primes(spec).primes.size());
}

TEST_CASE("auxiliary prime spec validation") {
  AuxiliarySpec spec;
  spec.curve = E11;
  spec.bound = 100;
  spec.p1 = 7;  // does not divide N = 11
  CHECK_THROWS_AS(auxiliary_primes(spec), error);
  spec.p1 = 11;
  spec.sigma_primes = {7, 7};  // repeated
  CHECK_THROWS_AS(auxiliary_primes(spec), error);
  spec.sigma_primes = {3};  // not level-raising (a_3 odd)
  CHECK_THROWS_AS(auxiliary_primes(spec), error);
  spec.sigma_primes = {9};  // not prime
  CHECK_THROWS_AS(auxiliary_primes(spec), error);
}

TEST_CASE("auxiliary empty-result warning") {
  AuxiliarySpec spec;
  spec.curve = E11;
  spec.sigma_primes = {7};
  spec.p1 = 11;
  spec.bound = 2;  // no candidates at all below the bound
  auto res = auxiliary_primes(spec);
  CHECK(res.primes.empty());
  CHECK(!res.warning.empty());
}

TEST_CASE("density report shape and values") {
  auto j = density_report(E11, 10000);
  CHECK(j["conductor"] == 11);
  CHECK(j["bound"] == 10000);
  long total = j["counts"]["total"].get<long>();
  CHECK(total > 1000);
  CHECK(j["counts"]["frob_order_1"].get<long>() + j["counts"]["frob_order_2"].get<long>() +
            j["counts"]["frob_order_3"].get<long>() ==
        total);
  CHECK(std::abs(j["frequencies"]["frob_order_1"].get<double>() - 1.0 / 6) < 0.03);
  CHECK(std::abs(j["frequencies"]["frob_order_2"].get<double>() - 1.0 / 2) < 0.03);
  CHECK(std::abs(j["frequencies"]["frob_order_3"].get<double>() - 1.0 / 3) < 0.03);
  CHECK(std::abs(j["frequencies"]["level_raising"].get<double>() - 2.0 / 3) < 0.03);
  CHECK_FALSE(j["small_sample"].get<bool>());

  auto small = density_report(E11, 100);
  CHECK(small["small_sample"].get<bool>());
}

TEST_CASE("density report with auxiliary spec") {
  AuxiliarySpec spec;
  spec.curve = E11;
  spec.sigma_primes = {7};
  spec.p1 = 11;
  auto j = density_report(E11, 100000, &spec);
  // s = 1 (mod 4) + 1 (symbol at 7); prediction (1/3) * (1/2)^2 = 1/12
  CHECK(j["predictions"]["auxiliary"].get<double>() == doctest::Approx(1.0 / 12));
  double freq = j["frequencies"]["auxiliary"].get<double>();
  CHECK(std::abs(freq - 1.0 / 12) < 0.02);
  CHECK(freq > 0);
}

TEST_CASE("35a1 passes the same machinery") {
  auto qs = level_raising_primes(E35, 50);
  for (u64 q : qs) {
    CHECK(curves::ap(E35, q) % 2 == 0);
    CHECK(q % 5 != 0);
    CHECK(q % 7 != 0);
  }
  CHECK(!qs.empty());
}
