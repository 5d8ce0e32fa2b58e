// Exhaustive box search for elliptic curves of a prescribed conductor,
// grouped into isogeny classes by their Hecke eigenvalue fingerprint. Used to
// generate the committed newform fixtures for squarefree levels.
#include <lrlab/curves.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <map>

using namespace lrlab;

int main(int argc, char** argv) {
  CLI::App app{"search Weierstrass models by conductor"};
  i64 level = 0;
  i64 a4_box = 400;
  i64 a6_box = 1000;
  u64 trace_bound = 200;
  app.add_option("level", level, "target conductor")->required();
  app.add_option("--a4-box", a4_box, "half-width of the a4 range");
  app.add_option("--a6-box", a6_box, "half-width of the a6 range");
  app.add_option("--trace-bound", trace_bound, "compute a_p for p below this");
  CLI11_PARSE(app, argc, argv);

  auto level_primes = arith::factor(level).factors;
  auto traced_primes = arith::primes_below(trace_bound);

  // fingerprint (a_p at good primes) -> representative curve + data
  std::map<std::vector<i64>, nlohmann::json> classes;
  long hits = 0;

  for (i64 a1 = 0; a1 <= 1; ++a1)
    for (i64 a2 = -1; a2 <= 1; ++a2)
      for (i64 a3 = 0; a3 <= 1; ++a3)
        for (i64 a4 = -a4_box; a4 <= a4_box; ++a4) {
          // disc as a quadratic A x^2 + B x + C in x = a6; every odd level
          // prime must divide disc (multiplicative reduction), which pins a6
          // to at most two residues per prime. CRT them and walk only those.
          i64 b2 = a1 * a1 + 4 * a2;
          i64 b4 = 2 * a4 + a1 * a3;
          i64 c8 = a2 * a3 * a3 - a1 * a3 * a4 - a4 * a4;
          i128 A = -432;
          i128 B = -(i128)b2 * b2 * b2 - 216 * (i128)a3 * a3 + 36 * (i128)b2 * b4;
          i128 C = -(i128)b2 * b2 * c8 - 8 * (i128)b4 * b4 * b4 -
                   27 * (i128)a3 * a3 * a3 * a3 + 9 * (i128)b2 * b4 * a3 * a3;
          i64 M = 1;
          std::vector<i64> residues{0};
          bool feasible = true;
          auto constrain = [&](i64 p, bool want_root) {
            i64 ap_ = (i64)((A % p + p) % p), bp = (i64)((B % p + p) % p),
                cp = (i64)((C % p + p) % p);
            std::vector<i64> allowed;
            if (want_root && ap_ == 0 && bp == 0) {
              if (cp != 0) feasible = false;
              return;  // identically zero: every residue works mod p
            }
            for (i64 r = 0; r < p; ++r)
              if (((ap_ * r * r + bp * r + cp) % p == 0) == want_root) allowed.push_back(r);
            if (allowed.empty()) { feasible = false; return; }
            if ((i64)allowed.size() == p) return;
            i64 minv = 1;  // M^-1 mod p
            for (i64 x = 1; x < p; ++x)
              if ((M % p) * x % p == 1) { minv = x; break; }
            std::vector<i64> next;
            next.reserve(residues.size() * allowed.size());
            for (i64 base : residues)
              for (i64 r : allowed) {
                i64 k = ((r - base) % p + p) * minv % p;
                next.push_back(base + M * k);
              }
            M *= p;
            residues = std::move(next);
          };
          // every odd level prime must divide disc; small good primes must not
          for (const auto& f : level_primes) {
            if (f.first == 2) continue;
            constrain((i64)f.first, true);
            if (!feasible) break;
          }
          for (i64 ell : {3, 11, 13, 17})
            if (feasible && level % ell != 0) constrain(ell, false);
          if (!feasible) continue;
          for (i64 res : residues) {
          i64 start = -a6_box + ((res - (-a6_box % M) + 2 * M) % M);
          for (i64 a6 = start; a6 <= a6_box; a6 += M) {
            WeierstrassCurve E{a1, a2, a3, a4, a6};
            i128 b6 = (i128)a3 * a3 + 4 * a6;
            i128 b8v = (i128)b2 * a6 + c8;
            i128 disc = -(i128)b2 * b2 * b8v - 8 * (i128)b4 * b4 * b4 -
                        27 * (i128)b6 * b6 + 9 * (i128)b2 * b4 * b6;
            if (disc == 0) continue;
            // fast filter: the discriminant support must lie in the level
            i128 dd = disc < 0 ? -disc : disc;
            if (dd <= (i128)UINT64_MAX) {
              u64 d = (u64)dd;
              for (const auto& f : level_primes)
                while (d % f.first == 0) d /= f.first;
              if (d != 1) continue;
            } else {
              i128 d = dd;
              for (const auto& f : level_primes)
                while (d % f.first == 0) d /= f.first;
              if (d != 1) continue;
            }
            try {
              if (curves::conductor(E) != level) continue;
            } catch (const error&) {
              continue;
            }
            ++hits;
            std::vector<i64> fp;
            for (u64 p : traced_primes) {
              if (level % (i64)p == 0 || p == 2) continue;
              fp.push_back(curves::ap(E, p));
            }
            if (classes.count(fp)) continue;
            nlohmann::json rec;
            rec["curve"] = std::to_string(a1) + "," + std::to_string(a2) + "," +
                           std::to_string(a3) + "," + std::to_string(a4) + "," +
                           std::to_string(a6);
            nlohmann::json ap, signs;
            for (u64 p : traced_primes) ap[std::to_string(p)] = curves::ap_any(E, p);
            for (const auto& f : level_primes) {
              auto red = curves::reduction_type(E, f.first);
              if (red.kind == ReductionKind::MultiplicativeSplit)
                signs[std::to_string(f.first)] = 1;
              else if (red.kind == ReductionKind::MultiplicativeNonsplit)
                signs[std::to_string(f.first)] = -1;
              else
                signs[std::to_string(f.first)] = 0;  // additive: not Steinberg
            }
            rec["ap"] = ap;
            rec["signs"] = signs;
            classes[fp] = rec;
          }
          }
        }

  nlohmann::json out;
  out["level"] = level;
  out["models_found"] = hits;
  out["classes"] = nlohmann::json::array();
  for (auto& [fp, rec] : classes) out["classes"].push_back(rec);
  std::cout << out.dump(2) << "\n";
  return 0;
}
