// Command-line entry point wiring all library modules. JSON on stdout by
// default; --format table renders a few human-oriented views. Exit codes:
// 0 success, 1 verification failure, 2 usage error.
#include <lrlab/curves.hpp>
#include <lrlab/liftrig.hpp>
#include <lrlab/lmfdb.hpp>
#include <lrlab/localcond.hpp>
#include <lrlab/mod2rep.hpp>
#include <lrlab/primescan.hpp>
#include <lrlab/selmersys.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

using namespace lrlab;
using nlohmann::json;

namespace {

std::string fmt = "json";

void emit(const json& j) {
  if (fmt == "json") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  // flat table rendering: one "key: value" line per top-level entry
  for (auto it = j.begin(); it != j.end(); ++it)
    std::cout << it.key() << ": " << it.value().dump() << "\n";
}

std::vector<u64> parse_u64_list(const std::string& s) {
  std::vector<u64> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    out.push_back(std::stoull(s.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    default: return "inconclusive";
  }
}

const char* kind_name(ReductionKind k) {
  switch (k) {
    case ReductionKind::Good: return "good";
    case ReductionKind::MultiplicativeSplit: return "multiplicative-split";
    case ReductionKind::MultiplicativeNonsplit: return "multiplicative-nonsplit";
    default: return "additive";
  }
}

int cmd_analyze(const std::string& curve) {
  auto E = curves::parse_curve(curve);
  auto inv = curves::invariants(E);
  i64 N = curves::conductor(E);
  json j;
  j["anchor"] = "mod2rep.assumption_check";
  j["curve"] = curve;
  j["conductor"] = N;
  j["invariants"] = {{"b2", inv.b2}, {"b4", inv.b4}, {"b6", inv.b6}, {"b8", inv.b8},
                     {"c4", inv.c4}, {"c6", inv.c6}, {"disc", inv.disc}};
  json bad = json::array();
  for (const auto& [p, e] : arith::factor(N).factors) {
    auto red = curves::reduction_type(E, p);
    bad.push_back({{"p", p},
                   {"kind", kind_name(red.kind)},
                   {"conductor_exponent", red.conductor_exponent},
                   {"component_group_order", red.component_group_order},
                   {"kodaira", red.kodaira}});
  }
  j["bad_places"] = bad;
  auto rep = mod2rep::assumption_check(E);
  static const char* item_names[5] = {
      "conductor-not-divisible-by-4", "full-mod-2-image", "odd-component-groups",
      "nontrivial-2-adic-action", "negative-discriminant"};
  json items = json::array();
  for (size_t i = 0; i < rep.items.size(); ++i)
    items.push_back({{"name", item_names[i]}, {"status", status_name(rep.items[i])}});
  j["assumptions"] = items;
  j["all_pass"] = rep.all_pass;
  j["mod2_image"] = rep.profile.image == Mod2Image::S3       ? "S3"
                    : rep.profile.image == Mod2Image::C3     ? "C3"
                    : rep.profile.image == Mod2Image::C2     ? "C2"
                                                             : "trivial";
  j["disc_squareclass"] = rep.profile.delta_squareclass;
  emit(j);
  return 0;
}

int cmd_raising_primes(const std::string& curve, u64 bound) {
  auto E = curves::parse_curve(curve);
  auto primes = primescan::level_raising_primes(E, bound);
  json j;
  j["anchor"] = "primescan.level_raising_primes";
  j["curve"] = curve;
  j["bound"] = bound;
  j["primes"] = primes;
  j["count"] = primes.size();
  emit(j);
  return 0;
}

int cmd_aux_primes(const std::string& curve, const std::string& sigma, u64 p1, u64 bound,
                   u64 min_q, bool strict) {
  auto E = curves::parse_curve(curve);
  AuxiliarySpec spec;
  spec.curve = E;
  spec.sigma_primes = parse_u64_list(sigma);
  spec.p1 = p1;
  spec.bound = bound;
  spec.min_q = min_q;
  spec.strict_positive_disc = strict;
  auto res = primescan::auxiliary_primes(spec);
  json j;
  j["anchor"] = "primescan.auxiliary_primes";
  j["curve"] = curve;
  j["sigma"] = spec.sigma_primes;
  j["p1"] = p1;
  j["bound"] = bound;
  j["primes"] = res.primes;
  if (!res.warning.empty()) j["warning"] = res.warning;
  emit(j);
  return 0;
}

int cmd_local(const std::string& curve, u64 place, bool raised, int sign) {
  auto E = curves::parse_curve(curve);
  i64 N = curves::conductor(E);
  LocalContext ctx;
  if (place == 0) ctx = LocalContext::Archimedean;
  else if (place == 2) ctx = LocalContext::At2;
  else if (raised) ctx = LocalContext::LevelRaised;
  else if (N % (i64)place == 0)
    throw error("local: place divides the conductor; no classified condition");
  else ctx = LocalContext::Good;
  auto c = localcond::classify_local_condition(E, place, ctx, sign);
  json j;
  j["anchor"] = "localcond.classify_local_condition";
  j["curve"] = curve;
  j["place"] = place;
  j["kind"] = c.kind == LocalKind::UnramifiedSelfDual ? "unramified-self-dual"
              : c.kind == LocalKind::ToricLine        ? "toric-line"
              : c.kind == LocalKind::FlatAt2          ? "flat-at-2"
              : c.kind == LocalKind::MultAt2Line      ? "multiplicative-at-2"
                                                                 : "archimedean-zero";
  j["h1_dim"] = c.h1_dim;
  j["condition_dim"] = c.condition_dim;
  emit(j);
  return 0;
}

int cmd_qform(const std::string& curve, u64 place) {
  auto E = curves::parse_curve(curve);
  auto g = mod2rep::two_division_cubic(E);
  auto M = localcond::involution_map(g, place);
  auto iso = localcond::qform_isotropy(E, place);
  json j;
  j["anchor"] = "localcond.qform_isotropy";
  j["curve"] = curve;
  j["place"] = place;
  j["involution"] = {{"m00", M.m00}, {"m01", M.m01}, {"m10", M.m10}, {"m11", M.m11},
                     {"square_scalar", M.square_scalar}};
  j["isotropy"] =
      iso == IsotropyStatus::CertifiedIsotropic ? "certified-isotropic" : "not-norm";
  emit(j);
  return 0;
}

int cmd_selmer_sim(int places, int target, u64 seed, int exhaustive, int field_degree) {
  json j;
  j["anchor"] = "selmersys.rank_walk";
  if (exhaustive > 0) {
    if (exhaustive > 8) throw error("selmer-sim: exhaustive mode supports total dimension <= 8");
    auto rep = selmersys::enumerate_verify(exhaustive);
    j["anchor"] = "selmersys.enumerate_verify";
    j["total_dim"] = exhaustive;
    j["systems"] = rep.systems;
    j["gw_checked"] = rep.gw_checked;
    j["bilinear_checked"] = rep.bilinear_checked;
    j["quadratic_checked"] = rep.quadratic_checked;
    j["bound_checked"] = rep.bound_checked;
    j["violations"] = rep.violations;
    emit(j);
    return rep.violations == 0 ? 0 : 1;
  }
  gf2m::Field F(field_degree);
  auto sys = selmersys::random_system(F, places, seed);
  int start = selmersys::selmer_dim(sys);
  SelmerSystem out = sys;
  auto steps = selmersys::rank_walk(sys, target, seed + 1, &out);
  j["field_degree"] = field_degree;
  j["places"] = places;
  j["seed"] = seed;
  j["start_dim"] = start;
  j["target"] = target;
  json st = json::array();
  for (const auto& s : steps)
    st.push_back(json{{"place", s.place}, {"old_dim", s.old_dim}, {"new_dim", s.new_dim}});
  j["steps"] = st;
  j["final_dim"] = selmersys::selmer_dim(out);
  emit(j);
  return selmersys::selmer_dim(out) == target ? 0 : 1;
}

int cmd_lift_check(u64 q, int k, bool unconstrained) {
  auto j = liftrig::report_json(q, k, !unconstrained);
  j["anchor"] = "liftrig.verify_rigidity";
  emit(j);
  if (!unconstrained && !(j["all_in_mu2"].get<bool>() && j["liftable_count"] == 2)) return 1;
  return 0;
}

lmfdb::Client make_client(const std::string& cache, bool offline) {
  lmfdb::ClientConfig cfg;
  if (!cache.empty()) cfg.cache_dir = cache;
  cfg.offline = offline;
  return lmfdb::Client(cfg);
}

int cmd_fetch(u64 level, const std::string& cache, bool offline) {
  auto client = make_client(cache, offline);
  auto forms = client.fetch_newforms(level);
  json j;
  j["anchor"] = "lmfdb.fetch_newforms";
  j["level"] = level;
  json recs = json::array();
  for (const auto& r : forms) recs.push_back(lmfdb::record_json(r));
  j["records"] = recs;
  emit(j);
  return 0;
}

int cmd_audit(const std::string& cache, bool offline, u64 bound, const std::string& tables_path) {
  auto client = make_client(cache, offline);
  std::string path = tables_path;
  if (path.empty()) path = client.config().fixture_dir + "/tables.json";
  std::ifstream in(path);
  if (!in) throw error("audit: cannot open tables file " + path);
  auto tables = json::parse(in);
  auto report = lmfdb::verify_table(tables, client, bound);
  auto j = lmfdb::report_json(report);
  j["anchor"] = "lmfdb.verify_table";
  emit(j);
  return report.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"level raising laboratory"};
  app.require_subcommand(1);
  app.add_option("--format", fmt, "json or table")->check(CLI::IsMember({"json", "table"}));

  std::string curve, sigma, cache, tables_path;
  u64 bound = 100, p1 = 0, place = 0, seed = 1, q = 3, level = 77, min_q = 2;
  int sign = 1, target = 0, places = 3, exhaustive = 0, field_degree = 1, precision = 3;
  bool raised = false, strict = false, unconstrained = false, offline = false;

  auto* an = app.add_subcommand("analyze", "invariants, reduction data, assumption checklist");
  an->add_option("--curve", curve)->required();

  auto* rp = app.add_subcommand("raising-primes", "level raising primes below a bound");
  rp->add_option("--curve", curve)->required();
  rp->add_option("--bound", bound);

  auto* ax = app.add_subcommand("aux-primes", "auxiliary primes for a sign problem");
  ax->add_option("--curve", curve)->required();
  ax->add_option("--sigma", sigma)->required();
  ax->add_option("--p1", p1)->required();
  ax->add_option("--bound", bound);
  ax->add_option("--min", min_q);
  ax->add_flag("--strict", strict);

  auto* lc = app.add_subcommand("local", "local condition classification at a place");
  lc->add_option("--curve", curve)->required();
  lc->add_option("--place", place)->required();
  lc->add_flag("--raised", raised);
  lc->add_option("--sign", sign);

  auto* qf = app.add_subcommand("qform", "involution and isotropy certificate at a place");
  qf->add_option("--curve", curve)->required();
  qf->add_option("--place", place)->required();

  auto* ss = app.add_subcommand("selmer-sim", "finite Selmer model walks and enumeration");
  ss->add_option("--places", places);
  ss->add_option("--target", target);
  ss->add_option("--seed", seed);
  ss->add_option("--exhaustive", exhaustive);
  ss->add_option("--field-degree", field_degree);

  auto* lk = app.add_subcommand("lift-check", "tame lift enumeration over Galois rings");
  lk->add_option("--q", q);
  lk->add_option("--precision", precision);
  lk->add_flag("--unconstrained", unconstrained);

  auto* fe = app.add_subcommand("fetch", "fetch newform records for a level");
  fe->add_option("--level", level)->required();
  fe->add_option("--cache", cache);
  fe->add_flag("--offline", offline);

  auto* au = app.add_subcommand("audit", "re-derive the committed data tables");
  au->add_option("--cache", cache);
  au->add_flag("--offline", offline);
  au->add_option("--bound", bound);
  au->add_option("--tables", tables_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (an->parsed()) return cmd_analyze(curve);
    if (rp->parsed()) return cmd_raising_primes(curve, bound);
    if (ax->parsed()) return cmd_aux_primes(curve, sigma, p1, bound, min_q, strict);
    if (lc->parsed()) return cmd_local(curve, place, raised, sign);
    if (qf->parsed()) return cmd_qform(curve, place);
    if (ss->parsed()) return cmd_selmer_sim(places, target, seed, exhaustive, field_degree);
    if (lk->parsed()) return cmd_lift_check(q, precision, unconstrained);
    if (fe->parsed()) return cmd_fetch(level, cache, offline);
    if (au->parsed()) return cmd_audit(cache, offline, bound, tables_path);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
