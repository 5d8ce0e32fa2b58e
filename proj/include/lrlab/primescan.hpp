// Prime searches driving the level-raising pipeline: level-raising primes
// (even a_q), auxiliary primes for the rigidity argument, and empirical
// density reports against their equidistribution predictions.
#pragma once

#include <lrlab/mod2rep.hpp>

#include <json.hpp>

#include <string>

namespace lrlab {

struct AuxiliarySpec {
  WeierstrassCurve curve;
  std::vector<u64> sigma_primes;  // level-raising primes q_1..q_m already chosen
  u64 p1 = 0;                     // exempt prime, must divide N to odd order
  u64 bound = 0;
  u64 min_q = 2;                  // the supersingular argument wants q > 7
  bool strict_positive_disc = false;  // also condition the symbol at p1
};

struct AuxiliaryResult {
  std::vector<u64> primes;
  std::string warning;  // set when the scan comes back empty below the bound
};

namespace primescan {

namespace detail {

inline void require_eligible(const WeierstrassCurve& E) {
  i64 N = curves::conductor(E);
  if (N % 4 == 0) throw error("primescan: 4 | N, curve out of scope");
  if (mod2rep::mod2_image(E) != Mod2Image::S3)
    throw error("primescan: mod-2 image is not all of S3");
  Invariants I = curves::invariants(E);
  if (arith::squarefree_part(I.disc) == -1)
    throw error("primescan: representation induced from Q(i)");
}

}  // namespace detail

// primes q <= bound, q not dividing 2N, with a_q even; equivalently the
// 2-division cubic has a root mod q
inline std::vector<u64> level_raising_primes(const WeierstrassCurve& E, u64 bound,
                                             u64 crosscheck_bound = 3000) {
  detail::require_eligible(E);
  i64 N = curves::conductor(E);
  i64 delta = curves::invariants(E).disc;
  std::vector<u64> out;
  for (u64 q : arith::primes_below(bound)) {
    if (q == 2 || N % (i64)q == 0) continue;
    if (arith::umod(delta, q) == 0) continue;  // non-minimal junk prime
    int order = mod2rep::frob_order(E, q);
    bool raising = order == 1 || order == 2;
    if (q <= crosscheck_bound) {
      i64 aq = curves::ap(E, q);
      if ((aq % 2 == 0) != raising) throw error("level_raising_primes: parity cross-check failed");
    }
    if (raising) out.push_back(q);
  }
  return out;
}

// primes q0 <= bound with q0 = 3 mod 4, Frobenius of order 3, and trivial
// obstruction symbols at every prime of N * sigma except the exempt one
inline AuxiliaryResult auxiliary_primes(const AuxiliarySpec& spec) {
  const WeierstrassCurve& E = spec.curve;
  detail::require_eligible(E);
  i64 N = curves::conductor(E);
  i64 delta = curves::invariants(E).disc;
  if (spec.p1 == 0 || N % (i64)spec.p1 != 0)
    throw error("auxiliary_primes: p1 must divide the conductor");
  if (arith::factor((u64)N).exponent_of(spec.p1) % 2 == 0)
    throw error("auxiliary_primes: p1 must divide N to odd order");
  // the conditioned prime set: primes of N and the chosen level-raising primes
  std::vector<u64> conditioned;
  for (auto& [p, e] : arith::factor((u64)N).factors) conditioned.push_back(p);
  for (size_t i = 0; i < spec.sigma_primes.size(); ++i) {
    u64 q = spec.sigma_primes[i];
    for (size_t j = i + 1; j < spec.sigma_primes.size(); ++j)
      if (spec.sigma_primes[j] == q) throw error("auxiliary_primes: repeated sigma prime");
    if (!arith::is_prime(q) || q == 2 || N % (i64)q == 0)
      throw error("auxiliary_primes: sigma prime must be an odd prime away from N");
    int order = mod2rep::frob_order(E, q);
    if (order == 3) throw error("auxiliary_primes: sigma prime is not level-raising");
    conditioned.push_back(q);
  }
  std::sort(conditioned.begin(), conditioned.end());

  AuxiliaryResult res;
  for (u64 q0 : arith::primes_below(spec.bound)) {
    if (q0 < spec.min_q || q0 % 4 != 3) continue;
    bool excluded = false;
    for (u64 p : conditioned)
      if (q0 == p) excluded = true;
    if (excluded || arith::umod(delta, q0) == 0) continue;
    if (mod2rep::frob_order(E, q0) != 3) continue;
    bool ok = true;
    for (u64 p : conditioned) {
      if (p == spec.p1 && !spec.strict_positive_disc) continue;
      if (arith::legendre((i64)p, q0) != 1) { ok = false; break; }
    }
    if (ok) res.primes.push_back(q0);
  }
  if (res.primes.empty())
    res.warning = "no auxiliary prime below " + std::to_string(spec.bound) +
                  "; the candidate set has positive density, raise the bound";
  return res;
}

// empirical frequencies of Frobenius orders and special primes, with their
// equidistribution predictions
inline nlohmann::json density_report(const WeierstrassCurve& E, u64 bound,
                                     const AuxiliarySpec* aux = nullptr) {
  detail::require_eligible(E);
  i64 N = curves::conductor(E);
  i64 delta = curves::invariants(E).disc;
  long counts[4] = {0, 0, 0, 0};
  long total = 0;
  for (u64 q : arith::primes_below(bound)) {
    if (q == 2 || arith::umod(delta, q) == 0 || N % (i64)q == 0) continue;
    ++counts[mod2rep::frob_order(E, q)];
    ++total;
  }
  nlohmann::json j;
  j["curve"] = E.label.empty() ? "a1=" + std::to_string(E.a1) : E.label;
  j["conductor"] = N;
  j["bound"] = bound;
  j["counts"] = {{"frob_order_1", counts[1]},
                 {"frob_order_2", counts[2]},
                 {"frob_order_3", counts[3]},
                 {"level_raising", counts[1] + counts[2]},
                 {"total", total}};
  if (total > 0) {
    j["frequencies"] = {{"frob_order_1", (double)counts[1] / total},
                        {"frob_order_2", (double)counts[2] / total},
                        {"frob_order_3", (double)counts[3] / total},
                        {"level_raising", (double)(counts[1] + counts[2]) / total}};
  }
  j["predictions"] = {{"frob_order_1", 1.0 / 6},
                      {"frob_order_2", 1.0 / 2},
                      {"frob_order_3", 1.0 / 3},
                      {"level_raising", 2.0 / 3}};
  j["small_sample"] = total < 100;
  if (aux) {
    AuxiliarySpec spec = *aux;
    spec.bound = bound;
    auto res = auxiliary_primes(spec);
    long s = 1;  // mod-4 condition
    for (auto& [p, e] : arith::factor((u64)N).factors)
      if (p != spec.p1 || spec.strict_positive_disc) ++s;
    s += (long)spec.sigma_primes.size();
    j["counts"]["auxiliary"] = res.primes.size();
    if (total > 0) j["frequencies"]["auxiliary"] = (double)res.primes.size() / total;
    j["predictions"]["auxiliary"] = (1.0 / 3) * std::pow(0.5, (double)s);
    if (!res.warning.empty()) j["warning"] = res.warning;
  }
  return j;
}

}  // namespace primescan
}  // namespace lrlab
