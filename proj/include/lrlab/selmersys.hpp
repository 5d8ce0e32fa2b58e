// Finite model of the global Selmer bookkeeping: quadratic spaces over
// GF(2^d) at finitely many places, self-dual local conditions, a maximal
// isotropic global image, and the rank-stepping lemmas (dimension drop and
// the residue dichotomy) verified exactly on every application.
#pragma once

#include <lrlab/gf2m.hpp>

#include <json.hpp>

#include <map>
#include <random>
#include <sstream>
#include <string>

namespace lrlab {

// even-dimensional quadratic space: Q(x) = x^T U x with U upper-triangular;
// the polar form B(x,y) = Q(x+y) + Q(x) + Q(y) must be nondegenerate
struct QuadSpace {
  gf2m::Field F;
  int dim = 0;
  gf2m::Mat U;  // dim x dim, upper-triangular

  static QuadSpace hyperbolic_plane(const gf2m::Field& F) {
    QuadSpace H;
    H.F = F;
    H.dim = 2;
    H.U = {{0, 1}, {0, 0}};  // Q(x, y) = x y
    return H;
  }

  static QuadSpace hyperbolic(const gf2m::Field& F, int planes) {
    QuadSpace H;
    H.F = F;
    H.dim = 2 * planes;
    H.U.assign(H.dim, gf2m::Vec(H.dim, 0));
    for (int i = 0; i < planes; ++i) H.U[2 * i][2 * i + 1] = 1;
    return H;
  }

  gf2m::El q(const gf2m::Vec& x) const {
    gf2m::El r = 0;
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) r ^= F.mul(U[i][j], F.mul(x[i], x[j]));
    return r;
  }

  gf2m::El b(const gf2m::Vec& x, const gf2m::Vec& y) const {
    gf2m::El r = 0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        gf2m::El u = j > i ? U[i][j] : (j < i ? U[j][i] : 0);
        r ^= F.mul(u, F.mul(x[i], y[j]));
      }
    return r;
  }

  gf2m::Mat gram() const {
    gf2m::Mat g(dim, gf2m::Vec(dim, 0));
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) g[i][j] = j > i ? U[i][j] : (j < i ? U[j][i] : 0);
    return g;
  }

  void validate() const {
    if (dim % 2 != 0) throw error("QuadSpace: dimension must be even");
    if ((int)U.size() != dim) throw error("QuadSpace: form size mismatch");
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < i; ++j)
        if (U[i][j] != 0) throw error("QuadSpace: form must be upper-triangular");
    if (gf2m::rank(F, gram()) != dim) throw error("QuadSpace: polar form is degenerate");
  }

  // B-orthogonal complement of a subspace
  gf2m::Mat perp(const gf2m::Mat& sub) const {
    gf2m::Mat eqs;
    gf2m::Mat g = gram();
    for (const gf2m::Vec& v : sub) {
      gf2m::Vec row(dim, 0);
      for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i) row[j] ^= F.mul(v[i], g[i][j]);
      eqs.push_back(row);
    }
    if (eqs.empty()) {
      gf2m::Mat full;
      for (int i = 0; i < dim; ++i) {
        gf2m::Vec e(dim, 0);
        e[i] = 1;
        full.push_back(e);
      }
      return full;
    }
    return gf2m::kernel(F, eqs, dim);
  }
};

enum class ConditionFlavor { BilinearSelfDual, QIsotropicLagrangian };

struct SelmerPlace {
  std::string label;
  QuadSpace H;
  gf2m::Mat L;  // rref basis of the local condition
  ConditionFlavor flavor = ConditionFlavor::BilinearSelfDual;
};

struct StepOutcome {
  std::string place;
  int old_dim = 0;
  int new_dim = 0;
  bool residue_was_zero = false;
  bool applicable = true;  // bilinear mode declines when the residue vanishes
};

enum class StepMode { Bilinear, Quadratic };

struct SelmerSystem {
  gf2m::Field F;
  std::vector<SelmerPlace> places;
  gf2m::Mat G;  // global image, rows in the concatenated coordinates
  bool q_isotropic_global = true;

  int total_dim() const {
    int n = 0;
    for (auto& p : places) n += p.H.dim;
    return n;
  }

  int offset_of(size_t idx) const {
    int o = 0;
    for (size_t i = 0; i < idx; ++i) o += places[i].H.dim;
    return o;
  }

  size_t place_index(const std::string& label) const {
    for (size_t i = 0; i < places.size(); ++i)
      if (places[i].label == label) return i;
    throw error("SelmerSystem: unknown place " + label);
  }

  gf2m::El total_q(const gf2m::Vec& x) const {
    gf2m::El r = 0;
    int o = 0;
    for (auto& p : places) {
      gf2m::Vec loc(x.begin() + o, x.begin() + o + p.H.dim);
      r ^= p.H.q(loc);
      o += p.H.dim;
    }
    return r;
  }

  gf2m::El total_b(const gf2m::Vec& x, const gf2m::Vec& y) const {
    gf2m::El r = 0;
    int o = 0;
    for (auto& p : places) {
      gf2m::Vec lx(x.begin() + o, x.begin() + o + p.H.dim);
      gf2m::Vec ly(y.begin() + o, y.begin() + o + p.H.dim);
      r ^= p.H.b(lx, ly);
      o += p.H.dim;
    }
    return r;
  }

  void validate() const {
    int n = total_dim();
    for (auto& p : places) {
      p.H.validate();
      // L = L^perp for the local polar form
      gf2m::Mat L = p.L;
      int ldim = gf2m::rref(p.H.F, L);
      if (2 * ldim != p.H.dim) throw error("SelmerSystem: condition is not half-dimensional");
      gf2m::Mat perp = p.H.perp(L);
      gf2m::rref(p.H.F, perp);
      if ((int)perp.size() != ldim) throw error("SelmerSystem: condition is not self-dual");
      for (const auto& v : L)
        if (!gf2m::contains(p.H.F, perp, v)) throw error("SelmerSystem: condition is not self-dual");
      if (p.flavor == ConditionFlavor::QIsotropicLagrangian)
        for (const auto& v : L)
          if (p.H.q(v) != 0) throw error("SelmerSystem: condition line is not Q-isotropic");
    }
    gf2m::Mat g = G;
    int gdim = gf2m::rref(F, g);
    if (2 * gdim != n) throw error("SelmerSystem: global image is not half-dimensional");
    for (size_t i = 0; i < g.size(); ++i) {
      if (q_isotropic_global && total_q(g[i]) != 0)
        throw error("SelmerSystem: global image is not Q-isotropic");
      for (size_t j = 0; j < g.size(); ++j)
        if (total_b(g[i], g[j]) != 0)
          throw error("SelmerSystem: global image is not B-isotropic");
    }
  }

  // block-diagonal embedding of the local conditions, with the condition at
  // `relax` replaced by all of H (or by 0 with `strict`)
  gf2m::Mat conditions_subspace(int relax = -1, int strict = -1) const {
    int n = total_dim();
    gf2m::Mat rows;
    for (size_t i = 0; i < places.size(); ++i) {
      int o = offset_of(i);
      if ((int)i == strict) continue;
      if ((int)i == relax) {
        for (int j = 0; j < places[i].H.dim; ++j) {
          gf2m::Vec row(n, 0);
          row[o + j] = 1;
          rows.push_back(row);
        }
        continue;
      }
      for (const auto& v : places[i].L) {
        gf2m::Vec row(n, 0);
        for (int j = 0; j < places[i].H.dim; ++j) row[o + j] = v[j];
        rows.push_back(row);
      }
    }
    gf2m::rref(F, rows);
    return rows;
  }
};

namespace selmersys {

inline int selmer_dim(const SelmerSystem& sys) {
  sys.validate();
  gf2m::Mat g = sys.G;
  gf2m::rref(sys.F, g);
  if (g.empty()) return 0;
  return (int)gf2m::intersect(sys.F, g, sys.conditions_subspace()).size();
}

// residue of the Selmer subspace at one place: span of the w-components
inline gf2m::Mat selmer_residue(const SelmerSystem& sys, size_t w) {
  gf2m::Mat g = sys.G;
  gf2m::rref(sys.F, g);
  gf2m::Mat sel = gf2m::intersect(sys.F, g, sys.conditions_subspace());
  int o = sys.offset_of(w);
  gf2m::Mat res;
  for (const auto& v : sel)
    res.push_back(gf2m::Vec(v.begin() + o, v.begin() + o + sys.places[w].H.dim));
  gf2m::rref(sys.places[w].H.F, res);
  return res;
}

// relaxed-minus-strict dimension difference at w; always half of dim H_w,
// by the counting identity dim(G ∩ S^perp) = dim V - dim(G + S)
inline int greenberg_wiles_delta(const SelmerSystem& sys, const std::string& place) {
  sys.validate();
  size_t w = sys.place_index(place);
  gf2m::Mat g = sys.G;
  gf2m::rref(sys.F, g);
  int relaxed = (int)gf2m::intersect(sys.F, g, sys.conditions_subspace((int)w)).size();
  int strict = (int)gf2m::intersect(sys.F, g, sys.conditions_subspace(-1, (int)w)).size();
  int delta = relaxed - strict;
  if (delta != sys.places[w].H.dim / 2)
    throw error("greenberg_wiles_delta: counting identity violated");
  return delta;
}

inline StepOutcome apply_step(SelmerSystem& sys, const std::string& place,
                              const gf2m::Mat& new_line, StepMode mode) {
  size_t w = sys.place_index(place);
  SelmerPlace& pl = sys.places[w];
  if (pl.H.dim != 2) throw error("apply_step: place must be 2-dimensional");
  gf2m::Mat lnew = new_line;
  if (gf2m::rref(pl.H.F, lnew) != 1) throw error("apply_step: new condition must be a line");
  gf2m::Mat lold = pl.L;
  gf2m::rref(pl.H.F, lold);
  if (lold == lnew) throw error("apply_step: new line equals the old one");
  if (mode == StepMode::Quadratic) {
    if (!sys.q_isotropic_global) throw error("apply_step: quadratic mode needs Q-isotropic G");
    if (pl.H.q(lnew[0]) != 0 || pl.H.q(lold[0]) != 0)
      throw error("apply_step: quadratic mode needs Q-isotropic lines");
    for (size_t v = 0; v < sys.places.size(); ++v)
      if (v != w && sys.places[v].flavor != ConditionFlavor::QIsotropicLagrangian)
        throw error("apply_step: quadratic mode needs Q-isotropic conditions elsewhere");
  }

  StepOutcome out;
  out.place = place;
  out.old_dim = selmer_dim(sys);
  out.residue_was_zero = selmer_residue(sys, w).empty();

  if (mode == StepMode::Bilinear && out.residue_was_zero) {
    out.applicable = false;  // the dimension-drop lemma needs a nonzero residue
    out.new_dim = out.old_dim;
    return out;
  }

  SelmerPlace saved = pl;
  pl.L = lnew;
  pl.flavor = mode == StepMode::Quadratic ? ConditionFlavor::QIsotropicLagrangian
                                          : ConditionFlavor::BilinearSelfDual;
  out.new_dim = selmer_dim(sys);

  bool ok;
  if (mode == StepMode::Bilinear) {
    ok = out.new_dim == out.old_dim - 1;
  } else {
    ok = out.new_dim == out.old_dim + (out.residue_was_zero ? 1 : -1);
  }
  if (!ok) {
    sys.places[w] = saved;
    throw error("apply_step: step conclusion violated (model inconsistency)");
  }
  return out;
}

// a 2-dimensional place ready for a lowering (nonzero residue) or raising
// (zero residue) step in quadratic mode, with its alternative isotropic line
inline std::optional<std::pair<std::string, gf2m::Mat>> find_step_place(const SelmerSystem& sys,
                                                                        bool want_lower) {
  for (size_t w = 0; w < sys.places.size(); ++w) {
    const SelmerPlace& pl = sys.places[w];
    if (pl.H.dim != 2) continue;
    gf2m::Mat lold = pl.L;
    gf2m::rref(pl.H.F, lold);
    if (pl.H.q(lold[0]) != 0) continue;
    // the other Q-isotropic line
    std::optional<gf2m::Mat> other;
    unsigned q = pl.H.F.order();
    for (unsigned a = 0; a < q && !other; ++a)
      for (unsigned b = (a == 0 ? 1 : 0); b < q; ++b) {
        gf2m::Vec v{(gf2m::El)a, (gf2m::El)b};
        if (pl.H.q(v) != 0) continue;
        gf2m::Mat line{v};
        gf2m::rref(pl.H.F, line);
        if (line != lold) { other = line; break; }
      }
    if (!other) continue;
    bool zero = selmer_residue(sys, w).empty();
    if (zero != want_lower) return std::make_pair(pl.label, *other);
  }
  return std::nullopt;
}

namespace detail {

// append a hyperbolic place with toric condition L_w = span(e1) and extend G:
// raising flavor adds the new basis vector (0, e2); lowering flavor threads a
// functional phi (nonzero on the current Selmer group) through the e1-slot and
// adds (h, e2) with B(h, .) = phi on G and Q(h) = 0
inline std::string append_place(SelmerSystem& sys, bool for_raise, std::mt19937_64& rng) {
  sys.validate();
  int n = sys.total_dim();
  std::string label = "w" + std::to_string(sys.places.size() + 1);

  SelmerPlace pl;
  pl.label = label;
  pl.H = QuadSpace::hyperbolic_plane(sys.F);
  pl.L = {{1, 0}};  // e1-line
  pl.flavor = ConditionFlavor::QIsotropicLagrangian;

  gf2m::Mat g = sys.G;
  gf2m::rref(sys.F, g);

  gf2m::Mat newG;
  if (for_raise) {
    for (const auto& v : g) {
      gf2m::Vec row = v;
      row.push_back(0);
      row.push_back(0);
      newG.push_back(row);
    }
    gf2m::Vec extra(n + 2, 0);
    extra[n + 1] = 1;  // (0, e2)
    newG.push_back(extra);
  } else {
    gf2m::Mat sel = gf2m::intersect(sys.F, g, sys.conditions_subspace());
    if (sel.empty()) throw error("append_place: lowering needs a nonzero Selmer group");
    // random functional on G, retried until nonzero on the Selmer subspace
    gf2m::Vec phi_on_basis;
    gf2m::Vec s = sel[(size_t)(rng() % sel.size())];
    auto phi_of = [&](const gf2m::Vec& x) {
      // x = sum c_i g_i; recover coefficients by solving against the basis
      gf2m::Mat eqs;
      for (int j = 0; j < n; ++j) {
        gf2m::Vec row;
        for (const auto& gi : g) row.push_back(gi[j]);
        eqs.push_back(row);
      }
      auto c = gf2m::solve(sys.F, eqs, x);
      if (!c) throw error("append_place: vector outside G");
      gf2m::El r = 0;
      for (size_t i = 0; i < g.size(); ++i) r ^= sys.F.mul(phi_on_basis[i], (*c)[i]);
      return r;
    };
    int guard = 0;
    do {
      phi_on_basis.assign(g.size(), 0);
      for (auto& c : phi_on_basis) c = (gf2m::El)(rng() % sys.F.order());
      if (++guard > 1000) throw error("append_place: could not find a separating functional");
    } while (phi_of(s) == 0);

    // h with B(h, g_i) = phi(g_i) for all basis vectors of G
    gf2m::Mat eqs;
    gf2m::Vec rhs;
    for (size_t i = 0; i < g.size(); ++i) {
      gf2m::Vec row(n, 0);
      // B(g_i, .) as a row functional
      for (int j = 0; j < n; ++j) {
        gf2m::Vec ej(n, 0);
        ej[j] = 1;
        row[j] = sys.total_b(g[i], ej);
      }
      eqs.push_back(row);
      rhs.push_back(phi_on_basis[i]);
    }
    auto h0 = gf2m::solve(sys.F, eqs, rhs);
    if (!h0) throw error("append_place: polar form failed to represent the functional");
    gf2m::Vec h = *h0;
    // normalize Q(h) to zero by absorbing a G-element with phi = Q(h)
    gf2m::El qh = sys.total_q(h);
    if (qh != 0) {
      bool fixed = false;
      for (const auto& gi : g) {
        gf2m::El pg = phi_of(gi);
        if (pg != 0) {
          h = gf2m::add(h, gf2m::scale(sys.F, sys.F.mul(qh, sys.F.inv(pg)), gi));
          fixed = true;
          break;
        }
      }
      if (!fixed) throw error("append_place: could not normalize Q(h)");
      if (sys.total_q(h) != 0) {
        // over larger fields one absorption may not suffice; fall back to a
        // scan over G multiples
        throw error("append_place: Q normalization failed");
      }
    }
    for (const auto& v : g) {
      gf2m::Vec row = v;
      row.push_back(phi_of(v));  // e1-component
      row.push_back(0);
      newG.push_back(row);
    }
    gf2m::Vec extra = h;
    extra.push_back(0);
    extra.push_back(1);  // (h, e2)
    newG.push_back(extra);
  }

  sys.places.push_back(pl);
  sys.G = newG;
  sys.validate();
  return label;
}

}  // namespace detail

// drive the system to Selmer dimension n by appending level-raised places;
// every step is a verified +-1 move
inline std::vector<StepOutcome> rank_walk(SelmerSystem sys, int target, u64 rng_seed,
                                          SelmerSystem* final_out = nullptr) {
  if (target < 0) throw error("rank_walk: target must be nonnegative");
  std::mt19937_64 rng(rng_seed);
  std::vector<StepOutcome> trace;
  int guard = 0;
  while (selmer_dim(sys) != target) {
    if (++guard > 1000) throw error("rank_walk: did not converge");
    bool need_raise = selmer_dim(sys) < target;
    std::string label = detail::append_place(sys, need_raise, rng);
    gf2m::Mat other{{0, 1}};  // the e2-line of the appended hyperbolic plane
    trace.push_back(apply_step(sys, label, other, StepMode::Quadratic));
    if (trace.back().new_dim != trace.back().old_dim + (need_raise ? 1 : -1))
      throw error("rank_walk: step went the wrong way");
  }
  if (final_out) *final_out = std::move(sys);
  return trace;
}

// ----- exhaustive verification over F_2 -------------------------------------

struct EnumerateReport {
  int max_total_dim = 0;
  long systems = 0;
  long gw_checked = 0;
  long bilinear_checked = 0;
  long quadratic_checked = 0;
  long bound_checked = 0;
  long violations = 0;
};

namespace detail {

// all k-dimensional subspaces of F_2^n as rref bit-row lists, n <= 16
inline std::vector<std::vector<unsigned>> all_subspaces_f2(int n, int k) {
  std::vector<std::vector<unsigned>> out;
  std::vector<int> cols(k);
  // iterate over pivot column combinations
  for (int i = 0; i < k; ++i) cols[i] = i;
  while (true) {
    // free positions: row i may have entries in columns > cols[i], excluding pivots
    std::vector<std::pair<int, int>> free_slots;  // (row, col)
    for (int i = 0; i < k; ++i)
      for (int c = cols[i] + 1; c < n; ++c) {
        bool is_pivot = false;
        for (int j = 0; j < k; ++j)
          if (cols[j] == c) is_pivot = true;
        if (!is_pivot) free_slots.push_back({i, c});
      }
    unsigned long combos = 1ull << free_slots.size();
    for (unsigned long mask = 0; mask < combos; ++mask) {
      std::vector<unsigned> rows(k, 0);
      for (int i = 0; i < k; ++i) rows[i] |= 1u << cols[i];
      for (size_t s = 0; s < free_slots.size(); ++s)
        if (mask >> s & 1) rows[free_slots[s].first] |= 1u << free_slots[s].second;
      out.push_back(rows);
    }
    // next combination
    int i = k - 1;
    while (i >= 0 && cols[i] == n - k + i) --i;
    if (i < 0) break;
    ++cols[i];
    for (int j = i + 1; j < k; ++j) cols[j] = cols[j - 1] + 1;
  }
  return out;
}

}  // namespace detail

// enumerate every maximal B-isotropic G over m hyperbolic planes (F_2) with
// every choice of self-dual lines, and confirm the stepping lemmas on each
inline EnumerateReport enumerate_verify(int max_total_dim) {
  if (max_total_dim > 8) throw error("enumerate_verify: bound is 8");
  EnumerateReport rep;
  rep.max_total_dim = max_total_dim;
  gf2m::Field F(1);
  for (int m = 1; 2 * m <= max_total_dim; ++m) {
    int n = 2 * m;
    QuadSpace V = QuadSpace::hyperbolic(F, m);
    // lines of one hyperbolic plane: (1,0), (0,1), (1,1); the first two are
    // Q-isotropic
    const gf2m::Mat lines[3] = {{{1, 0}}, {{0, 1}}, {{1, 1}}};
    auto subs = detail::all_subspaces_f2(n, m);
    for (const auto& rows : subs) {
      // isotropy of the candidate G
      gf2m::Mat g;
      for (unsigned r : rows) {
        gf2m::Vec v(n, 0);
        for (int j = 0; j < n; ++j) v[j] = (r >> j) & 1;
        g.push_back(v);
      }
      bool b_isotropic = true, q_isotropic = true;
      for (size_t i = 0; i < g.size() && b_isotropic; ++i) {
        if (V.q(g[i]) != 0) q_isotropic = false;
        for (size_t j = 0; j < g.size(); ++j)
          if (V.b(g[i], g[j]) != 0) b_isotropic = false;
      }
      if (!b_isotropic) continue;
      ++rep.systems;

      // all condition tuples; place w is the last plane by symmetry of the
      // construction (every plane is equivalent under relabeling)
      int w = m - 1;
      std::vector<int> choice(m, 0);
      while (true) {
        SelmerSystem sys;
        sys.F = F;
        sys.q_isotropic_global = false;
        for (int i = 0; i < m; ++i) {
          SelmerPlace pl;
          pl.label = "v" + std::to_string(i + 1);
          pl.H = QuadSpace::hyperbolic_plane(F);
          pl.L = lines[choice[i]];
          pl.flavor = choice[i] < 2 ? ConditionFlavor::QIsotropicLagrangian
                                    : ConditionFlavor::BilinearSelfDual;
          sys.places.push_back(pl);
        }
        sys.G = g;

        int old_dim = selmer_dim(sys);
        if (greenberg_wiles_delta(sys, sys.places[w].label) != 1) ++rep.violations;
        ++rep.gw_checked;

        bool res_zero = selmer_residue(sys, w).empty();
        for (int alt = 0; alt < 3; ++alt) {
          if (alt == choice[w]) continue;
          SelmerSystem t = sys;
          t.places[w].L = lines[alt];
          t.places[w].flavor = ConditionFlavor::BilinearSelfDual;
          int new_dim = selmer_dim(t);
          // dimension can move by at most 1 when a single line changes
          if (std::abs(new_dim - old_dim) > 1) ++rep.violations;
          ++rep.bound_checked;
          if (!res_zero && new_dim != old_dim - 1) ++rep.violations;
          if (!res_zero) ++rep.bilinear_checked;
        }

        // quadratic dichotomy: all conditions Q-isotropic, G Q-isotropic,
        // swap between the two isotropic lines at w
        bool all_q = q_isotropic;
        for (int i = 0; i < m; ++i)
          if (choice[i] >= 2) all_q = false;
        if (all_q) {
          SelmerSystem t = sys;
          t.q_isotropic_global = true;
          t.places[w].L = lines[1 - choice[w]];
          int new_dim = selmer_dim(t);
          if (new_dim != old_dim + (res_zero ? 1 : -1)) ++rep.violations;
          ++rep.quadratic_checked;
        }

        int i = 0;
        while (i < m && ++choice[i] == 3) choice[i++] = 0;
        if (i == m) break;
      }
    }
  }
  return rep;
}

// random Q-preserving transvection walk from the standard Lagrangian
inline SelmerSystem random_system(const gf2m::Field& F, int planes, u64 seed,
                                  int word_length = 64) {
  std::mt19937_64 rng(seed);
  SelmerSystem sys;
  sys.F = F;
  int n = 2 * planes;
  for (int i = 0; i < planes; ++i) {
    SelmerPlace pl;
    pl.label = "v" + std::to_string(i + 1);
    pl.H = QuadSpace::hyperbolic_plane(F);
    pl.L = {{1, 0}};
    pl.flavor = ConditionFlavor::QIsotropicLagrangian;
    sys.places.push_back(pl);
  }
  QuadSpace V = QuadSpace::hyperbolic(F, planes);
  // start: span of the e-vectors, one per plane
  gf2m::Mat g;
  for (int i = 0; i < planes; ++i) {
    gf2m::Vec v(n, 0);
    v[2 * i] = 1;
    g.push_back(v);
  }
  // transvections x -> x + B(x,v) v preserve Q exactly when Q(v) = 1
  for (int step = 0; step < word_length; ++step) {
    gf2m::Vec v(n, 0);
    do {
      for (auto& c : v) c = (gf2m::El)(rng() % F.order());
    } while (V.q(v) != 1);
    for (auto& row : g) {
      gf2m::El c = V.b(row, v);
      if (c != 0) row = gf2m::add(row, gf2m::scale(F, c, v));
    }
  }
  sys.G = g;
  sys.validate();
  return sys;
}

// ----- JSON serialization ("selmersys/1") -----------------------------------

namespace detail {

inline std::string hex_row(const gf2m::Vec& v, int d) {
  u64 packed = 0;
  int bits = 0;
  std::string out;
  for (gf2m::El e : v) {
    packed |= (u64)e << bits;
    bits += d;
    while (bits >= 4) {
      out += "0123456789abcdef"[packed & 0xf];
      packed >>= 4;
      bits -= 4;
    }
  }
  if (bits > 0) out += "0123456789abcdef"[packed & 0xf];
  return out;
}

inline gf2m::Vec unhex_row(const std::string& s, int d, int len) {
  gf2m::Vec v;
  u64 packed = 0;
  int bits = 0;
  size_t pos = 0;
  for (int i = 0; i < len; ++i) {
    while (bits < d) {
      if (pos >= s.size()) throw error("selmersys: truncated hex row");
      char c = s[pos++];
      u64 nib = c >= 'a' ? c - 'a' + 10 : c - '0';
      if (nib > 15) throw error("selmersys: bad hex digit");
      packed |= nib << bits;
      bits += 4;
    }
    v.push_back((gf2m::El)(packed & ((1u << d) - 1)));
    packed >>= d;
    bits -= d;
  }
  return v;
}

}  // namespace detail

inline nlohmann::json to_json(const SelmerSystem& sys) {
  nlohmann::json j;
  j["schema"] = "selmersys/1";
  j["field_degree"] = sys.F.d;
  j["q_isotropic_global"] = sys.q_isotropic_global;
  j["places"] = nlohmann::json::array();
  for (const auto& p : sys.places) {
    nlohmann::json pj;
    pj["label"] = p.label;
    pj["dim"] = p.H.dim;
    pj["flavor"] = p.flavor == ConditionFlavor::QIsotropicLagrangian ? "q_isotropic" : "self_dual";
    pj["form"] = nlohmann::json::array();
    for (const auto& row : p.H.U) pj["form"].push_back(detail::hex_row(row, sys.F.d));
    pj["condition"] = nlohmann::json::array();
    for (const auto& row : p.L) pj["condition"].push_back(detail::hex_row(row, sys.F.d));
    j["places"].push_back(pj);
  }
  j["global_image"] = nlohmann::json::array();
  for (const auto& row : sys.G) j["global_image"].push_back(detail::hex_row(row, sys.F.d));
  return j;
}

inline SelmerSystem from_json(const nlohmann::json& j) {
  if (j.value("schema", "") != "selmersys/1") throw error("selmersys: unknown schema");
  SelmerSystem sys;
  sys.F = gf2m::Field(j.at("field_degree").get<int>());
  sys.q_isotropic_global = j.value("q_isotropic_global", true);
  for (const auto& pj : j.at("places")) {
    SelmerPlace p;
    p.label = pj.at("label").get<std::string>();
    p.H.F = sys.F;
    p.H.dim = pj.at("dim").get<int>();
    p.flavor = pj.at("flavor").get<std::string>() == "q_isotropic"
                   ? ConditionFlavor::QIsotropicLagrangian
                   : ConditionFlavor::BilinearSelfDual;
    for (const auto& row : pj.at("form"))
      p.H.U.push_back(detail::unhex_row(row.get<std::string>(), sys.F.d, p.H.dim));
    for (const auto& row : pj.at("condition"))
      p.L.push_back(detail::unhex_row(row.get<std::string>(), sys.F.d, p.H.dim));
    sys.places.push_back(p);
  }
  int n = sys.total_dim();
  for (const auto& row : j.at("global_image"))
    sys.G.push_back(detail::unhex_row(row.get<std::string>(), sys.F.d, n));
  sys.validate();
  return sys;
}

}  // namespace selmersys
}  // namespace lrlab
