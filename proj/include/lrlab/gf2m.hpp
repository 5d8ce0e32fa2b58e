// Small binary fields GF(2^d) and dense linear algebra over them. Vectors are
// byte-per-element; the dimensions in play (<= 32) keep this comfortably fast.
#pragma once

#include <lrlab/arith.hpp>

#include <cstdint>

namespace lrlab {
namespace gf2m {

using El = std::uint8_t;
using Vec = std::vector<El>;
using Mat = std::vector<Vec>;

struct Field {
  int d = 1;
  unsigned poly = 0b11;  // reduction polynomial, degree d

  Field() = default;
  explicit Field(int degree) : d(degree) {
    switch (degree) {
      case 1: poly = 0b11; break;
      case 2: poly = 0b111; break;
      case 3: poly = 0b1011; break;
      case 4: poly = 0b10011; break;
      default: throw error("Field: supported degrees are 1..4");
    }
  }

  unsigned order() const { return 1u << d; }

  El add(El a, El b) const { return a ^ b; }

  El mul(El a, El b) const {
    unsigned r = 0, x = a;
    for (unsigned y = b; y; y >>= 1) {
      if (y & 1) r ^= x;
      x <<= 1;
      if (x & (1u << d)) x ^= poly;
    }
    return (El)r;
  }

  El pow(El a, unsigned e) const {
    El r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  El inv(El a) const {
    if (a == 0) throw error("Field: inverse of zero");
    return pow(a, order() - 2);
  }
};

inline Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] ^ b[i];
  return r;
}

inline Vec scale(const Field& F, El c, const Vec& a) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = F.mul(c, a[i]);
  return r;
}

inline bool is_zero(const Vec& a) {
  for (El x : a)
    if (x) return false;
  return true;
}

// in-place reduced row echelon form; returns the rank, zero rows removed
inline int rref(const Field& F, Mat& m) {
  if (m.empty()) return 0;
  size_t cols = m[0].size();
  size_t row = 0;
  for (size_t col = 0; col < cols && row < m.size(); ++col) {
    size_t piv = row;
    while (piv < m.size() && m[piv][col] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[row], m[piv]);
    El inv = F.inv(m[row][col]);
    for (size_t j = 0; j < cols; ++j) m[row][j] = F.mul(inv, m[row][j]);
    for (size_t i = 0; i < m.size(); ++i) {
      if (i == row || m[i][col] == 0) continue;
      El c = m[i][col];
      for (size_t j = 0; j < cols; ++j) m[i][j] ^= F.mul(c, m[row][j]);
    }
    ++row;
  }
  m.resize(row);
  return (int)row;
}

inline int rank(const Field& F, Mat m) { return rref(F, m); }

// reduce v against an rref basis; returns the residual
inline Vec reduce_against(const Field& F, const Mat& basis, Vec v) {
  for (const Vec& b : basis) {
    size_t lead = 0;
    while (lead < b.size() && b[lead] == 0) ++lead;
    if (lead == b.size()) continue;
    if (v[lead] != 0) {
      El c = v[lead];  // basis rows are normalized to leading 1
      for (size_t j = 0; j < v.size(); ++j) v[j] ^= F.mul(c, b[j]);
    }
  }
  return v;
}

inline bool contains(const Field& F, const Mat& rref_basis, const Vec& v) {
  return is_zero(reduce_against(F, rref_basis, v));
}

inline Mat sum(const Field& F, Mat a, const Mat& b) {
  a.insert(a.end(), b.begin(), b.end());
  rref(F, a);
  return a;
}

// Zassenhaus: basis of span(a) ∩ span(b)
inline Mat intersect(const Field& F, const Mat& a, const Mat& b) {
  if (a.empty() || b.empty()) return {};
  size_t n = a[0].size();
  Mat big;
  for (const Vec& v : a) {
    Vec row(2 * n);
    for (size_t i = 0; i < n; ++i) row[i] = row[n + i] = v[i];
    big.push_back(row);
  }
  for (const Vec& v : b) {
    Vec row(2 * n, 0);
    for (size_t i = 0; i < n; ++i) row[i] = v[i];
    big.push_back(row);
  }
  rref(F, big);
  Mat out;
  for (const Vec& row : big) {
    bool left_zero = true;
    for (size_t i = 0; i < n; ++i)
      if (row[i]) left_zero = false;
    if (!left_zero) continue;
    Vec v(row.begin() + n, row.end());
    if (!is_zero(v)) out.push_back(v);
  }
  rref(F, out);
  return out;
}

// basis of the null space {x : A x = 0}, rows of A are equations
inline Mat kernel(const Field& F, Mat a, size_t cols) {
  rref(F, a);
  std::vector<int> pivot_of_col(cols, -1);
  for (size_t r = 0; r < a.size(); ++r) {
    size_t lead = 0;
    while (lead < cols && a[r][lead] == 0) ++lead;
    if (lead < cols) pivot_of_col[lead] = (int)r;
  }
  Mat out;
  for (size_t free = 0; free < cols; ++free) {
    if (pivot_of_col[free] >= 0) continue;
    Vec v(cols, 0);
    v[free] = 1;
    for (size_t c = 0; c < cols; ++c)
      if (pivot_of_col[c] >= 0) v[c] = a[pivot_of_col[c]][free];
    out.push_back(v);
  }
  return out;
}

// one solution x of A x = rhs, or nullopt
inline std::optional<Vec> solve(const Field& F, Mat a, Vec rhs) {
  size_t cols = a.empty() ? 0 : a[0].size();
  for (size_t i = 0; i < a.size(); ++i) a[i].push_back(rhs[i]);
  rref(F, a);
  Vec x(cols, 0);
  for (const Vec& row : a) {
    size_t lead = 0;
    while (lead < cols && row[lead] == 0) ++lead;
    if (lead == cols) {
      if (row[cols] != 0) return std::nullopt;  // inconsistent
      continue;
    }
    x[lead] = row[cols];
  }
  // verify (free variables set to zero may interact through reduced form; the
  // rref back-substitution above is exact because rows are fully reduced)
  return x;
}

}  // namespace gf2m
}  // namespace lrlab
