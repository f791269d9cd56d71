#pragma once

// Nilpotent rings through their mod-p algebras: filtration profiles, Sims
// dimension, standard bases of cube-zero algebras, monomial bases adapted to
// the power filtration, reconstruction of a multiplication from a small set
// of products, and free cube-zero algebras with their quotient families.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "finring/error.hpp"
#include "finring/iso.hpp"
#include "finring/ring.hpp"
#include "finring/subgroup.hpp"

namespace finring {

/// R/pR on the images of the basis of R.
inline FiniteRing mod_p_algebra(const FiniteRing& R) {
  Table t = R.table();
  for (auto& c : t) c = floor_mod(c, R.p());
  return make_ring(AdditiveShape::uniform(R.p(), static_cast<int>(R.rank())), t);
}

inline RingElement reduce_mod_p(const FiniteRing& R, const RingElement& x) {
  RingElement y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = floor_mod(x[i], R.p());
  return y;
}

/// Calls f(rows) for every k-dimensional subspace of F_p^dim, given by its
/// reduced row echelon basis. Stops early when f returns false.
inline bool for_each_subspace(Int p, std::size_t dim, std::size_t k, const std::function<bool(const Mat&)>& f) {
  if (k > dim) return true;
  std::vector<std::size_t> piv(k);
  std::function<bool(std::size_t, std::size_t)> choose = [&](std::size_t idx, std::size_t from) -> bool {
    if (idx == k) {
      // free entries: row a, column c > piv[a], c not a pivot
      std::vector<std::pair<std::size_t, std::size_t>> slots;
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t c = piv[a] + 1; c < dim; ++c)
          if (std::find(piv.begin(), piv.end(), c) == piv.end()) slots.emplace_back(a, c);
      Mat rows(k, Vec(dim, 0));
      for (std::size_t a = 0; a < k; ++a) rows[a][piv[a]] = 1;
      std::vector<Int> digit(slots.size(), 0);
      for (;;) {
        for (std::size_t z = 0; z < slots.size(); ++z) rows[slots[z].first][slots[z].second] = digit[z];
        if (!f(rows)) return false;
        std::size_t z = 0;
        while (z < slots.size() && ++digit[z] == p) digit[z++] = 0;
        if (z == slots.size()) return true;
      }
    }
    for (std::size_t c = from; c + (k - idx) <= dim; ++c) {
      piv[idx] = c;
      if (!choose(idx + 1, c + 1)) return false;
    }
    return true;
  };
  return choose(0, 0);
}

namespace detail {

inline void require_algebra(const FiniteRing& A) {
  for (std::size_t i = 0; i < A.rank(); ++i)
    if (A.shape().exponent(i) != 1) throw Error(Errc::ShapeMismatch, "an F_p-algebra (shape 1,...,1) is required");
}

/// powers[k-1] = A^k, ending with the first zero power.
inline std::vector<SubgroupBasis> power_chain(const FiniteRing& A) {
  std::vector<SubgroupBasis> out{SubgroupBasis::whole(A.shape())};
  while (!out.back().is_trivial()) {
    SubgroupBasis next = product_span(A, out.back(), out.front());
    if (next == out.back()) throw Error(Errc::NotNilpotent, "the algebra is not nilpotent");
    out.push_back(std::move(next));
  }
  return out;
}

inline RingElement combine(const FiniteRing& A, const Vec& coeffs, const std::vector<RingElement>& vs) {
  RingElement x = A.zero();
  for (std::size_t k = 0; k < vs.size(); ++k)
    if (coeffs[k]) x = A.add(x, A.scale(coeffs[k], vs[k]));
  return x;
}

/// Standard basis vectors of A independent modulo H, chosen greedily.
inline std::vector<RingElement> complement_reps(const FiniteRing& A, SubgroupBasis H) {
  std::vector<RingElement> out;
  for (std::size_t i = 0; i < A.rank(); ++i) {
    if (H.contains(A.basis(i))) continue;
    out.push_back(A.basis(i));
    H = H + span(A, {A.basis(i)});
  }
  return out;
}

}  // namespace detail

struct FiltrationProfile {
  int w = 0;             // dim A
  int r = 0;             // dim A/A^2
  int s = 0;             // Sims dimension
  int t = 0;             // dim A^2/A^3
  int u = 0;             // dim A^3
  int m = 1;             // least m with A^m = 0
  std::vector<int> u_h;  // u_h[h-2] = dim A^h/A^{h+1}, 2 <= h <= m-1
  std::vector<int> d;    // d[i-1] = dim A^i, 1 <= i <= m

  bool invariants_hold() const {
    int sum = 0;
    for (int x : u_h) {
      if (x <= 0) return false;
      sum += x;
    }
    if (w != r + t + u || sum != t + u || s > t + 1) return false;
    return u_h.empty() ? t == 0 : u_h.front() == t;
  }
};

struct SimsWitness {
  int s = 0;
  std::vector<RingElement> xs;  // basis of S modulo A^2
};

/// Smallest subspace V of A modulo A^2 with (V + A^2)^2 = A^2, by ascending
/// dimension over all subspaces.
inline SimsWitness sims_search(const FiniteRing& A) {
  detail::require_algebra(A);
  const auto powers = detail::power_chain(A);
  const SubgroupBasis A2 = powers.size() > 1 ? powers[1] : SubgroupBasis::trivial(A.shape());
  const auto reps = detail::complement_reps(A, A2);
  SimsWitness out;
  if (A2.is_trivial()) return out;
  for (std::size_t k = 1; k <= reps.size(); ++k) {
    bool found = false;
    for_each_subspace(A.p(), reps.size(), k, [&](const Mat& rows) {
      std::vector<RingElement> xs;
      for (const auto& row : rows) xs.push_back(detail::combine(A, row, reps));
      SubgroupBasis S = span(A, xs) + A2;
      if (product_span(A, S, S) == A2) {
        out.s = static_cast<int>(k);
        out.xs = std::move(xs);
        found = true;
        return false;
      }
      return true;
    });
    if (found) return out;
  }
  throw Error(Errc::NotNilpotent, "internal: no subalgebra squares onto A^2");
}

inline int sims_dimension(const FiniteRing& A) { return sims_search(A).s; }

inline FiltrationProfile filtration_profile(const FiniteRing& A) {
  detail::require_algebra(A);
  const auto powers = detail::power_chain(A);
  FiltrationProfile f;
  for (const auto& P : powers) f.d.push_back(P.order_exponent());
  f.d.pop_back();  // the zero power
  f.m = static_cast<int>(f.d.size()) + 1;
  auto dim = [&](int i) { return i <= static_cast<int>(f.d.size()) ? f.d[static_cast<std::size_t>(i - 1)] : 0; };
  f.w = dim(1);
  f.r = f.w - dim(2);
  f.t = dim(2) - dim(3);
  f.u = dim(3);
  for (int h = 2; h <= f.m - 1; ++h) f.u_h.push_back(dim(h) - dim(h + 1));
  f.s = sims_dimension(A);
  if (!f.invariants_hold()) throw Error(Errc::InvalidDims, "internal: filtration profile invariants failed");
  return f;
}

struct StandardBasisData {
  bool commutative = false;
  int r = 0, s = 0, t = 0;
  std::vector<RingElement> xs;  // x_1..x_r
  std::vector<RingElement> ys;  // y_1..y_t, a basis of A^2
  std::vector<std::pair<std::size_t, std::size_t>> monomial_reps;  // y_j = x_k x_l (0-based, k,l < s)
  std::vector<int> q;  // commutative: q_i = dim <x_1..x_i>^2
};

namespace detail {

/// Commutative chain: x_1..x_s spanning V modulo A^2 with x_i x_{i+1}
/// outside <x_1..x_i>^2, first found in a fixed order.
inline std::optional<std::vector<RingElement>> commutative_chain(const FiniteRing& A, const std::vector<RingElement>& V,
                                                                 const SubgroupBasis& A2) {
  const std::size_t s = V.size();
  const Int p = A.p();
  std::vector<Vec> cands;
  const Int total = ipow(p, static_cast<int>(s));
  for (Int code = 1; code < total; ++code) {
    Vec c(s);
    Int x = code;
    for (std::size_t k = s; k-- > 0;) {
      c[k] = x % p;
      x /= p;
    }
    std::size_t lead = 0;
    while (c[lead] == 0) ++lead;
    if (c[lead] == 1) cands.push_back(c);
  }
  std::vector<RingElement> chosen;
  std::function<bool()> dfs = [&]() -> bool {
    if (chosen.size() == s) return true;
    std::vector<RingElement> sq;
    for (std::size_t k = 0; k < chosen.size(); ++k)
      for (std::size_t l = k; l < chosen.size(); ++l) sq.push_back(A.mul(chosen[k], chosen[l]));
    const SubgroupBasis square = span(A, sq);
    const SubgroupBasis base = span(A, chosen) + A2;
    for (const auto& c : cands) {
      RingElement x = combine(A, c, V);
      if (base.contains(x)) continue;
      if (!chosen.empty() && square.contains(A.mul(chosen.back(), x))) continue;
      chosen.push_back(x);
      if (dfs()) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (!dfs()) return std::nullopt;
  return chosen;
}

}  // namespace detail

inline StandardBasisData standard_basis(const FiniteRing& A, bool commutative) {
  detail::require_algebra(A);
  const auto powers = detail::power_chain(A);  // NotNilpotent
  if (powers.size() > 3) throw Error(Errc::NotCubeZero, "A^3 is not zero");
  if (commutative && !A.is_commutative()) throw Error(Errc::ParameterOutOfRange, "the algebra is not commutative");
  const SubgroupBasis A2 = powers.size() > 1 ? powers[1] : SubgroupBasis::trivial(A.shape());
  const SimsWitness W = sims_search(A);
  StandardBasisData out;
  out.commutative = commutative;
  out.s = W.s;
  out.t = A2.order_exponent();
  out.xs = W.xs;
  if (commutative && W.s > 0) {
    auto chain = detail::commutative_chain(A, W.xs, A2);
    if (!chain) throw Error(Errc::InvalidDims, "internal: no increasing chain of squares found");
    out.xs = *chain;
  }
  for (auto& x : detail::complement_reps(A, span(A, out.xs) + A2)) out.xs.push_back(x);
  out.r = static_cast<int>(out.xs.size());
  const auto us = static_cast<std::size_t>(out.s);
  SubgroupBasis Y = SubgroupBasis::trivial(A.shape());
  auto take = [&](std::size_t k, std::size_t l) {
    RingElement y = A.mul(out.xs[k], out.xs[l]);
    if (Y.contains(y)) return;
    Y = Y + span(A, {y});
    out.ys.push_back(y);
    out.monomial_reps.emplace_back(k, l);
  };
  if (commutative) {
    for (std::size_t i = 0; i < us; ++i) {
      for (std::size_t k = 0; k <= i; ++k) take(k, i);
      out.q.push_back(static_cast<int>(out.ys.size()));
    }
  } else {
    for (std::size_t k = 0; k < us; ++k)
      for (std::size_t l = 0; l < us; ++l) take(k, l);
  }
  if (static_cast<int>(out.ys.size()) != out.t) throw Error(Errc::InvalidDims, "internal: products of x_1..x_s miss A^2");
  return out;
}

/// Checks the standard-basis invariants against A directly.
inline bool standard_basis_valid(const FiniteRing& A, const StandardBasisData& b) {
  const auto powers = detail::power_chain(A);
  const SubgroupBasis A2 = powers.size() > 1 ? powers[1] : SubgroupBasis::trivial(A.shape());
  if (static_cast<int>(b.xs.size()) != b.r || static_cast<int>(b.ys.size()) != b.t) return false;
  if ((span(A, b.xs) + A2).order_exponent() != b.r + A2.order_exponent() || !(span(A, b.xs) + A2).is_whole()) return false;
  if (!(span(A, b.ys) == A2) || A2.order_exponent() != b.t) return false;
  for (std::size_t j = 0; j < b.ys.size(); ++j) {
    auto [k, l] = b.monomial_reps[j];
    if (static_cast<int>(k) >= b.s || static_cast<int>(l) >= b.s || A.mul(b.xs[k], b.xs[l]) != b.ys[j]) return false;
  }
  std::vector<RingElement> first(b.xs.begin(), b.xs.begin() + b.s);
  SubgroupBasis S = span(A, first) + A2;
  if (!(product_span(A, S, S) == A2)) return false;
  if (b.commutative) {
    if (static_cast<int>(b.q.size()) != b.s) return false;
    for (int i = 0; i < b.s; ++i) {
      if (i > 0 && b.q[static_cast<std::size_t>(i)] <= b.q[static_cast<std::size_t>(i - 1)]) return false;
      if (b.q[static_cast<std::size_t>(i)] > b.t - b.s + i + 1) return false;
      std::vector<RingElement> sq;
      for (int k = 0; k <= i; ++k)
        for (int l = 0; l <= i; ++l) sq.push_back(A.mul(b.xs[static_cast<std::size_t>(k)], b.xs[static_cast<std::size_t>(l)]));
      std::vector<RingElement> ys(b.ys.begin(), b.ys.begin() + b.q[static_cast<std::size_t>(i)]);
      if (!(span(A, sq) == span(A, ys))) return false;
      for (int j = (i ? b.q[static_cast<std::size_t>(i - 1)] : 0); j < b.q[static_cast<std::size_t>(i)]; ++j)
        if (b.monomial_reps[static_cast<std::size_t>(j)].second != static_cast<std::size_t>(i)) return false;
    }
    if (b.s > 0 && b.q.back() != b.t) return false;
  }
  return true;
}

/// Basis x_1..x_r, e_1..e_{w-r} of a nilpotent algebra in which
/// e_1..e_{d(i)} span A^i and every e_j is a monomial in x_1..x_s.
struct MonomialBasis {
  FiltrationProfile profile;
  StandardBasisData standard;  // of A/A^3, lifted xs below
  std::vector<RingElement> xs, es;
  std::vector<std::vector<std::size_t>> words;  // e_j = x_{w0} x_{w1} ... (indices < s)
  Mat xx_coeffs;  // row i*r+j: x_i x_j in the e basis (lambda then mu)
  Mat xe_coeffs;  // row i*(w-r)+j: x_i e_j in the e basis (nu), i < s
};

inline MonomialBasis monomial_basis(const FiniteRing& A, bool commutative) {
  MonomialBasis out;
  out.profile = filtration_profile(A);
  const auto& f = out.profile;
  const auto powers = detail::power_chain(A);
  auto power = [&](int i) {
    return static_cast<std::size_t>(i) <= powers.size() ? powers[static_cast<std::size_t>(i - 1)] : SubgroupBasis::trivial(A.shape());
  };
  const QuotientRing Q = quotient_ring(A, power(3));
  out.standard = standard_basis(Q.ring, commutative);
  for (const auto& xq : out.standard.xs) out.xs.push_back(detail::combine(A, xq, Q.lifts));
  const auto s = static_cast<std::size_t>(f.s), u = static_cast<std::size_t>(f.u);
  const std::size_t ne = static_cast<std::size_t>(f.w - f.r);
  out.es.assign(ne, A.zero());
  out.words.assign(ne, {});
  for (std::size_t j = 0; j < out.standard.monomial_reps.size(); ++j) {
    auto [k, l] = out.standard.monomial_reps[j];
    out.es[u + j] = A.mul(out.xs[k], out.xs[l]);
    out.words[u + j] = {k, l};
  }
  auto dim = [&](int i) { return static_cast<std::size_t>(power(i).order_exponent()); };
  for (int h = 3; h <= f.m - 1; ++h) {
    const std::size_t lo = dim(h + 1), hi = dim(h), plo = dim(h), phi = dim(h - 1);
    SubgroupBasis cur = power(h + 1);
    std::size_t next = lo;
    for (std::size_t a = 0; a < s && next < hi; ++a)
      for (std::size_t b = plo; b < phi && next < hi; ++b) {
        if (commutative && h == 3 && b >= u + static_cast<std::size_t>(out.standard.q[a])) continue;
        RingElement e = A.mul(out.xs[a], out.es[b]);
        if (cur.contains(e)) continue;
        cur = cur + span(A, {e});
        out.es[next] = e;
        out.words[next] = {a};
        out.words[next].insert(out.words[next].end(), out.words[b].begin(), out.words[b].end());
        ++next;
      }
    if (next != hi) throw Error(Errc::InvalidDims, "internal: monomials x_a e_b do not span A^" + std::to_string(h));
  }
  std::vector<RingElement> all = out.xs;
  all.insert(all.end(), out.es.begin(), out.es.end());
  if (!span(A, all).is_whole() || all.size() != A.rank()) throw Error(Errc::InvalidDims, "internal: monomial basis is not a basis");
  const CoordinateSystem cs(A, all, std::vector<int>(all.size(), 1));
  const auto r = static_cast<std::size_t>(f.r);
  auto e_part = [&](const RingElement& y) {
    Vec c = *cs.coordinates(y);
    return Vec(c.begin() + static_cast<std::ptrdiff_t>(r), c.end());
  };
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) out.xx_coeffs.push_back(e_part(A.mul(out.xs[i], out.xs[j])));
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < ne; ++j) out.xe_coeffs.push_back(e_part(A.mul(out.xs[i], out.es[j])));
  return out;
}

/// Whether the subalgebra generated by the first s elements has the same
/// i-th powers as A for every i >= 2.
inline bool generated_powers_match(const FiniteRing& A, const std::vector<RingElement>& gens) {
  const SubgroupBasis S = subring_generated(A, gens);
  const auto powers = detail::power_chain(A);
  SubgroupBasis Si = S;
  for (std::size_t i = 2; i <= powers.size(); ++i) {
    Si = product_span(A, Si, S);
    if (!(Si == powers[i - 1])) return false;
  }
  return true;
}

// ------------------------------------------------ reconstruction of products

/// The products a nilpotent ring is rebuilt from, on generators x_1..x_r and
/// monomials e_j in x_1..x_s.
struct DeterminationData {
  AdditiveShape shape;
  bool commutative = false;
  std::size_t s = 0, u = 0;
  std::vector<RingElement> xs, es;
  std::vector<std::vector<std::size_t>> words;
  std::vector<int> q;
  std::map<std::pair<std::size_t, std::size_t>, RingElement> xx;  // x_i x_j
  std::map<std::pair<std::size_t, std::size_t>, RingElement> xe;  // x_i e_j, i < s
};

/// Reads off the products used by the reconstruction. Noncommutative: all
/// x_i x_j and all x_i e_j with i <= s. Commutative: x_i x_j with i <= j,
/// and x_i e_j with i <= s only for j <= u + q_i.
inline DeterminationData determination_data(const FiniteRing& R, bool commutative) {
  if (commutative && !R.is_commutative()) throw Error(Errc::ParameterOutOfRange, "the ring is not commutative");
  const FiniteRing A = mod_p_algebra(R);
  const MonomialBasis mb = monomial_basis(A, commutative);
  DeterminationData d;
  d.shape = R.shape();
  d.commutative = commutative;
  d.s = static_cast<std::size_t>(mb.profile.s);
  d.u = static_cast<std::size_t>(mb.profile.u);
  d.q = mb.standard.q;
  d.words = mb.words;
  for (const auto& x : mb.xs) d.xs.push_back(R.reduce(x));
  for (const auto& w : mb.words) {
    RingElement e = d.xs[w.back()];
    for (std::size_t k = w.size() - 1; k-- > 0;) e = R.mul(d.xs[w[k]], e);
    d.es.push_back(e);
  }
  const std::size_t r = d.xs.size();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = commutative ? i : 0; j < r; ++j) d.xx[{i, j}] = R.mul(d.xs[i], d.xs[j]);
  for (std::size_t i = 0; i < d.s; ++i)
    for (std::size_t j = 0; j < d.es.size(); ++j)
      if (!commutative || j < d.u + static_cast<std::size_t>(d.q[i])) d.xe[{i, j}] = R.mul(d.xs[i], d.es[j]);
  return d;
}

namespace detail {

class GeneratorAlgebra {
 public:
  explicit GeneratorAlgebra(const DeterminationData& d) : d_(d), zero_(d.shape.rank(), 0) {
    gens_ = d.xs;
    gens_.insert(gens_.end(), d.es.begin(), d.es.end());
    solver_ = LinearSolver(gens_, d.shape.exponents(), d.shape.chain());
  }

  const std::vector<RingElement>& gens() const { return gens_; }

  Vec coords(const RingElement& y) const {
    auto a = solver_.solve(y);
    if (!a) throw Error(Errc::InvalidDims, "internal: generators do not span the additive group");
    return *a;
  }

  RingElement reduce(RingElement y) const {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = floor_mod(y[i], d_.shape.modulus(i));
    return y;
  }

  RingElement add(const RingElement& a, const RingElement& b) const {
    RingElement y(a.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = a[i] + b[i];
    return reduce(y);
  }

  RingElement scale(Int k, const RingElement& a) const {
    RingElement y(a.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = floor_mod(k, d_.shape.modulus(i)) * a[i];
    return reduce(y);
  }

  /// Applies the additive map given by its values on the generators.
  RingElement apply(const std::vector<RingElement>& images, const RingElement& y) const {
    const Vec a = coords(y);
    RingElement out = zero_;
    for (std::size_t k = 0; k < images.size(); ++k)
      if (a[k]) out = add(out, scale(a[k], images[k]));
    return out;
  }

  const RingElement& zero() const { return zero_; }

 private:
  const DeterminationData& d_;
  std::vector<RingElement> gens_;
  LinearSolver solver_;
  RingElement zero_;
};

/// Left multiplication by every generator from x_i x_j and x_i e_j (i < s),
/// then the table on the standard basis.
inline FiniteRing assemble_from_products(const DeterminationData& d, const GeneratorAlgebra& G,
                                         const std::map<std::pair<std::size_t, std::size_t>, RingElement>& xx,
                                         const std::map<std::pair<std::size_t, std::size_t>, RingElement>& xe) {
  const std::size_t r = d.xs.size(), ne = d.es.size(), w = r + ne;
  std::vector<std::vector<RingElement>> L(w, std::vector<RingElement>(w));
  for (std::size_t i = 0; i < d.s; ++i) {
    for (std::size_t j = 0; j < r; ++j) L[i][j] = xx.at({i, j});
    for (std::size_t j = 0; j < ne; ++j) L[i][r + j] = xe.at({i, j});
  }
  // monomials: left multiplication composes
  for (std::size_t j = 0; j < ne; ++j)
    for (std::size_t g = 0; g < w; ++g) {
      RingElement y = G.gens()[g];
      for (std::size_t k = d.words[j].size(); k-- > 0;) y = G.apply(L[d.words[j][k]], y);
      L[r + j][g] = y;
    }
  // right multiplication by x_i (i < s) on generators
  std::vector<std::vector<RingElement>> Rm(d.s, std::vector<RingElement>(w));
  for (std::size_t i = 0; i < d.s; ++i) {
    for (std::size_t j = 0; j < r; ++j) Rm[i][j] = xx.at({j, i});
    for (std::size_t j = 0; j < ne; ++j) Rm[i][r + j] = L[r + j][i];
  }
  // x_a, a >= s: x_a e_b = ((x_a x_{i1}) x_{i2}) ... x_{ik}
  for (std::size_t a = d.s; a < r; ++a) {
    for (std::size_t j = 0; j < r; ++j) L[a][j] = xx.at({a, j});
    for (std::size_t b = 0; b < ne; ++b) {
      RingElement y = xx.at({a, d.words[b].front()});
      for (std::size_t k = 1; k < d.words[b].size(); ++k) y = G.apply(Rm[d.words[b][k]], y);
      L[a][r + b] = y;
    }
  }
  const std::size_t m = d.shape.rank();
  std::vector<Vec> basis_coords;
  for (std::size_t i = 0; i < m; ++i) {
    RingElement e(m, 0);
    e[i] = 1;
    basis_coords.push_back(G.coords(e));
  }
  std::vector<RingElement> prods(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      RingElement acc = G.zero();
      for (std::size_t g = 0; g < w; ++g) {
        if (!basis_coords[i][g]) continue;
        RingElement right = G.zero();
        for (std::size_t h = 0; h < w; ++h)
          if (basis_coords[j][h]) right = G.add(right, G.scale(basis_coords[j][h], L[g][h]));
        acc = G.add(acc, G.scale(basis_coords[i][g], right));
      }
      prods[i * m + j] = acc;
    }
  return FiniteRing::from_products(d.shape, prods);
}

}  // namespace detail

/// Rebuilds the multiplication from all x_i x_j and all x_i e_j (i <= s).
inline FiniteRing reconstruct_noncommutative(const DeterminationData& d) {
  const detail::GeneratorAlgebra G(d);
  return detail::assemble_from_products(d, G, d.xx, d.xe);
}

/// Rebuilds a commutative multiplication from x_i x_j (i <= j) and x_i e_j
/// (i <= s, j <= u + q_i), recovering p^a x_i e_j by descending induction on a.
inline FiniteRing reconstruct_commutative(const DeterminationData& d) {
  const detail::GeneratorAlgebra G(d);
  const std::size_t r = d.xs.size(), ne = d.es.size();
  std::map<std::pair<std::size_t, std::size_t>, RingElement> xx;
  for (const auto& [ij, y] : d.xx) {
    xx[ij] = y;
    xx[{ij.second, ij.first}] = y;
  }
  const Int p = d.shape.p();
  const int kappa = d.shape.max_exponent();
  auto known = [&](std::size_t i, std::size_t j) { return j < d.u + static_cast<std::size_t>(d.q[i]); };
  // decomposition of x_i x_{a'} over p x_k, e_j' (j' < u + q_b'), p e_j' (j' >= u + q_b')
  struct Split {
    std::size_t b;
    Vec coeffs;  // over the generator list below
  };
  std::map<std::pair<std::size_t, std::size_t>, Split> splits;  // (i, j) for unknown x_i e_j
  for (std::size_t i = 0; i < d.s; ++i)
    for (std::size_t j = 0; j < ne; ++j) {
      if (known(i, j)) continue;
      const std::size_t a1 = d.words[j].front(), b1 = d.words[j].back();
      if (d.words[j].size() != 2 || b1 <= i) throw Error(Errc::InvalidDims, "internal: monomial representation out of order");
      Mat gens;
      for (std::size_t k = 0; k < r; ++k) gens.push_back(G.scale(p, d.xs[k]));
      for (std::size_t jj = 0; jj < ne; ++jj) gens.push_back(jj < d.u + static_cast<std::size_t>(d.q[b1]) ? d.es[jj] : G.scale(p, d.es[jj]));
      const LinearSolver solver(gens, d.shape.exponents(), d.shape.chain());
      auto c = solver.solve(xx.at({i, a1}));
      if (!c) throw Error(Errc::InvalidDims, "internal: x_i x_a' outside the expected subgroup");
      splits[{i, j}] = {b1, *c};
    }
  // P[i][j] = p^a x_i e_j for the current a
  std::vector<std::vector<RingElement>> P(d.s, std::vector<RingElement>(ne, G.zero()));
  for (int a = kappa - 1; a >= 0; --a) {
    const Int pa = ipow(p, a);
    auto next = P;
    for (std::size_t i = 0; i < d.s; ++i)
      for (std::size_t j = 0; j < ne; ++j) {
        if (known(i, j)) {
          next[i][j] = G.scale(pa, d.xe.at({i, j}));
          continue;
        }
        const Split& sp = splits.at({i, j});
        RingElement y = G.zero();
        for (std::size_t k = 0; k < r; ++k)
          if (sp.coeffs[k]) y = G.add(y, G.scale(sp.coeffs[k] * pa * p, xx.at({sp.b, k})));
        for (std::size_t jj = 0; jj < ne; ++jj) {
          const Int c = sp.coeffs[r + jj];
          if (!c) continue;
          if (known(sp.b, jj)) y = G.add(y, G.scale(c * pa, d.xe.at({sp.b, jj})));
          else y = G.add(y, G.scale(c, P[sp.b][jj]));  // p^{a+1} x_b' e_j'
        }
        next[i][j] = y;
      }
    P = std::move(next);
  }
  std::map<std::pair<std::size_t, std::size_t>, RingElement> xe;
  for (std::size_t i = 0; i < d.s; ++i)
    for (std::size_t j = 0; j < ne; ++j) xe[{i, j}] = kappa > 0 ? P[i][j] : G.zero();
  return detail::assemble_from_products(d, G, xx, xe);
}

// ------------------------------------------------------ free cube-zero algebras

/// Free (commutative) F_p-algebra of cube zero on x_1..x_r, basis x_i then
/// the products x_i x_j (i <= j in the commutative case).
inline FiniteRing free_cube_zero(Int p, int r, bool commutative) {
  if (r < 1 || !is_prime(p)) throw Error(Errc::ParameterOutOfRange, "free_cube_zero needs p prime and r >= 1");
  const auto ur = static_cast<std::size_t>(r);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  std::size_t n = ur;
  for (std::size_t i = 0; i < ur; ++i)
    for (std::size_t j = commutative ? i : 0; j < ur; ++j) index[{i, j}] = n++;
  std::vector<RingElement> prods(n * n, RingElement(n, 0));
  for (std::size_t i = 0; i < ur; ++i)
    for (std::size_t j = 0; j < ur; ++j) {
      auto key = commutative ? std::make_pair(std::min(i, j), std::max(i, j)) : std::make_pair(i, j);
      prods[i * n + j][index.at(key)] = 1;
    }
  FiniteRing F = FiniteRing::from_products(AdditiveShape::uniform(p, static_cast<int>(n)), prods);
  if (detail::power_chain(F).size() > 3) throw Error(Errc::NotCubeZero, "internal: free algebra is not cube zero");
  return F;
}

struct FamilyResult {
  std::size_t subspace_count = 0;
  std::vector<FiniteRing> classes;
};

/// Quotients of the free cube-zero algebra of rank r by subspaces I of F^2
/// with dim F/I = n, up to isomorphism.
inline FamilyResult lower_bound_family(Int p, int r, int n, bool commutative) {
  const FiniteRing F = free_cube_zero(p, r, commutative);
  const auto ur = static_cast<std::size_t>(r);
  const std::size_t D = F.rank() - ur;
  FamilyResult out;
  if (n < r || static_cast<std::size_t>(n) > F.rank()) return out;
  const std::size_t k = F.rank() - static_cast<std::size_t>(n);
  for_each_subspace(p, D, k, [&](const Mat& rows) {
    ++out.subspace_count;
    std::vector<RingElement> gens;
    for (const auto& row : rows) {
      RingElement g(F.rank(), 0);
      for (std::size_t c = 0; c < D; ++c) g[ur + c] = row[c];
      gens.push_back(g);
    }
    FiniteRing Q = quotient_ring(F, span(F, gens)).ring;
    for (const auto& C : out.classes)
      if (is_isomorphic(C, Q)) return true;
    out.classes.push_back(std::move(Q));
    return true;
  });
  return out;
}

}  // namespace finring
