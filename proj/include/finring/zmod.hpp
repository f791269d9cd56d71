#pragma once

// Integer helpers and linear algebra over the chain ring Z/p^K: Howell form
// (canonical generators of submodules), Smith form with transforms, and a
// reusable solver for systems whose equations live in mixed moduli p^{k_e}.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "finring/error.hpp"

namespace finring {

using Int = std::int64_t;
using Vec = std::vector<Int>;
using Mat = std::vector<Vec>;

inline bool is_prime(Int p) {
  if (p < 2) return false;
  for (Int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline Int ipow(Int base, int e) {
  Int r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

inline Int floor_mod(Int x, Int m) {
  Int r = x % m;
  return r < 0 ? r + m : r;
}

/// Inverse of a unit modulo m (extended Euclid). Precondition gcd(a,m)=1.
inline Int inverse_mod(Int a, Int m) {
  Int g = m, x = 0, x1 = 1, a1 = floor_mod(a, m);
  while (a1 != 0) {
    Int q = g / a1;
    std::tie(g, a1) = std::make_pair(a1, g - q * a1);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  return floor_mod(x, m);
}

/// Arithmetic context for Z/p^K.
struct PrimePower {
  Int p = 2;
  int K = 1;
  Int N = 2;

  PrimePower() = default;
  PrimePower(Int p_, int K_) : p(p_), K(K_), N(ipow(p_, K_)) {}

  Int mod(Int x) const { return floor_mod(x, N); }

  /// p-adic valuation of x mod N; K for zero.
  int val(Int x) const {
    x = mod(x);
    if (x == 0) return K;
    int v = 0;
    while (x % p == 0) {
      x /= p;
      ++v;
    }
    return v;
  }

  Int pow(int e) const { return ipow(p, e); }

  /// Unit u with x = p^{val(x)} u (mod N); x must be nonzero.
  Int unit_part(Int x) const {
    x = mod(x);
    while (x % p == 0) x /= p;
    return x;
  }
};

namespace detail {

inline void axpy_row(Vec& dst, const Vec& src, Int f, const PrimePower& R) {
  if (f == 0) return;
  for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = R.mod(dst[j] - f * src[j]);
}

inline bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](Int x) { return x == 0; });
}

}  // namespace detail

/// Howell normal form of the Z/p^K-module spanned by `rows`. The result is
/// unique for a given module: pivots are powers of p, entries above a pivot
/// are reduced below it, and the span of the rows with pivot column >= j
/// contains every element of the module vanishing before column j.
inline Mat howell_form(Mat rows, const PrimePower& R) {
  for (auto& r : rows)
    for (auto& x : r) x = R.mod(x);
  std::erase_if(rows, detail::is_zero);
  if (rows.empty()) return {};
  const std::size_t m = rows.front().size();
  Mat out;
  std::vector<std::size_t> pivot_col;
  for (std::size_t j = 0; j < m && !rows.empty(); ++j) {
    int best = R.K;
    std::size_t bi = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      int v = R.val(rows[i][j]);
      if (v < best) {
        best = v;
        bi = i;
      }
    }
    if (best == R.K) continue;
    Vec piv = rows[bi];
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(bi));
    Int winv = inverse_mod(R.unit_part(piv[j]), R.N);
    for (auto& x : piv) x = R.mod(x * winv);
    const Int pv = R.pow(best);
    for (auto& r : rows) {
      if (r[j] != 0) detail::axpy_row(r, piv, r[j] / pv, R);
    }
    if (best > 0) {
      Vec ann = piv;
      const Int f = R.pow(R.K - best);
      for (auto& x : ann) x = R.mod(x * f);
      if (!detail::is_zero(ann)) rows.push_back(std::move(ann));
    }
    std::erase_if(rows, detail::is_zero);
    out.push_back(std::move(piv));
    pivot_col.push_back(j);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t j = pivot_col[i];
    const Int pv = out[i][j];
    for (std::size_t h = 0; h < i; ++h) {
      Int q = out[h][j] / pv;
      if (q != 0) detail::axpy_row(out[h], out[i], q, R);
    }
  }
  return out;
}

/// Smith form D = U * A * V over Z/p^K, with V^{-1} tracked as well.
struct SmithForm {
  Mat U, V, Vinv;
  std::vector<int> diag_val;  // valuation of D[t][t]; K means zero
};

inline Mat identity_matrix(std::size_t n) {
  Mat I(n, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

inline SmithForm smith_form(Mat M, std::size_t cols, const PrimePower& R) {
  const std::size_t rows = M.size();
  SmithForm s{identity_matrix(rows), identity_matrix(cols), identity_matrix(cols), {}};
  for (auto& r : M)
    for (auto& x : r) x = R.mod(x);
  const std::size_t lim = std::min(rows, cols);
  for (std::size_t t = 0; t < lim; ++t) {
    int best = R.K;
    std::size_t bi = t, bj = t;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j) {
        int v = R.val(M[i][j]);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (best == R.K) {
      for (std::size_t u = t; u < lim; ++u) s.diag_val.push_back(R.K);
      break;
    }
    std::swap(M[t], M[bi]);
    std::swap(s.U[t], s.U[bi]);
    if (bj != t) {
      for (auto& r : M) std::swap(r[t], r[bj]);
      for (auto& r : s.V) std::swap(r[t], r[bj]);
      std::swap(s.Vinv[t], s.Vinv[bj]);
    }
    Int winv = inverse_mod(R.unit_part(M[t][t]), R.N);
    for (auto& x : M[t]) x = R.mod(x * winv);
    for (auto& x : s.U[t]) x = R.mod(x * winv);
    const Int pv = R.pow(best);
    for (std::size_t i = t + 1; i < rows; ++i) {
      Int f = M[i][t] / pv;
      if (f == 0) continue;
      detail::axpy_row(M[i], M[t], f, R);
      detail::axpy_row(s.U[i], s.U[t], f, R);
    }
    for (std::size_t j = t + 1; j < cols; ++j) {
      Int f = M[t][j] / pv;
      if (f == 0) continue;
      for (std::size_t i = 0; i < rows; ++i) M[i][j] = R.mod(M[i][j] - f * M[i][t]);
      for (std::size_t i = 0; i < cols; ++i) s.V[i][j] = R.mod(s.V[i][j] - f * s.V[i][t]);
      for (std::size_t i = 0; i < cols; ++i) s.Vinv[t][i] = R.mod(s.Vinv[t][i] + f * s.Vinv[j][i]);
    }
    s.diag_val.push_back(best);
  }
  while (s.diag_val.size() < lim) s.diag_val.push_back(R.K);
  return s;
}

/// Solves a * A = b where row u of A is the coefficient row of unknown u and
/// column e is an equation modulo p^{exps[e]}. Solutions are returned as
/// residues mod p^K. The factorisation is computed once per solver.
class LinearSolver {
 public:
  LinearSolver() = default;

  LinearSolver(const Mat& A, std::vector<int> exps, const PrimePower& R)
      : R_(R), exps_(std::move(exps)), unknowns_(A.size()) {
    const std::size_t cols = exps_.size();
    Mat scaled(unknowns_, Vec(cols, 0));
    for (std::size_t u = 0; u < unknowns_; ++u)
      for (std::size_t e = 0; e < cols; ++e)
        scaled[u][e] = R_.mod(A[u][e] * R_.pow(R_.K - exps_[e]));
    smith_ = smith_form(std::move(scaled), cols, R_);
  }

  std::optional<Vec> solve(const Vec& b) const {
    const std::size_t cols = exps_.size();
    Vec c(cols, 0);
    for (std::size_t e = 0; e < cols; ++e) {
      Int be = R_.mod(b[e] * R_.pow(R_.K - exps_[e]));
      if (be == 0) continue;
      for (std::size_t f = 0; f < cols; ++f) c[f] = R_.mod(c[f] + be * smith_.V[e][f]);
    }
    Vec ap(unknowns_, 0);
    for (std::size_t e = 0; e < cols; ++e) {
      int v = e < smith_.diag_val.size() ? smith_.diag_val[e] : R_.K;
      if (v == R_.K) {
        if (c[e] != 0) return std::nullopt;
        continue;
      }
      if (R_.val(c[e]) < v) return std::nullopt;
      ap[e] = c[e] / R_.pow(v);
    }
    Vec a(unknowns_, 0);
    for (std::size_t t = 0; t < unknowns_; ++t) {
      if (ap[t] == 0) continue;
      for (std::size_t u = 0; u < unknowns_; ++u) a[u] = R_.mod(a[u] + ap[t] * smith_.U[t][u]);
    }
    return a;
  }

  const PrimePower& ring() const { return R_; }

 private:
  PrimePower R_;
  std::vector<int> exps_;
  std::size_t unknowns_ = 0;
  SmithForm smith_;
};

}  // namespace finring
