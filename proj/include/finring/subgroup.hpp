#pragma once

// Additive subgroups of a ring (ideals, subrings, powers R^k) and the
// constructions built on them: quotients, subrings as rings, direct sums,
// re-basing, identity and unit group.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "finring/error.hpp"
#include "finring/ring.hpp"
#include "finring/zmod.hpp"

namespace finring {

/// Subgroup of the additive group of a shape. Stored as the Howell form of
/// its generators in scaled coordinates (coordinate i times p^{K-k_i}), so
/// two equal subgroups have equal representations.
class SubgroupBasis {
 public:
  SubgroupBasis() = default;

  SubgroupBasis(const AdditiveShape& shape, const std::vector<RingElement>& gens) : shape_(shape) {
    const PrimePower R = shape_.chain();
    Mat rows;
    rows.reserve(gens.size());
    for (const auto& g : gens) rows.push_back(scaled(g));
    rows_ = howell_form(std::move(rows), R);
  }

  static SubgroupBasis trivial(const AdditiveShape& shape) { return {shape, {}}; }

  static SubgroupBasis whole(const AdditiveShape& shape) {
    std::vector<RingElement> gens;
    for (std::size_t i = 0; i < shape.rank(); ++i) {
      RingElement e(shape.rank(), 0);
      e[i] = 1;
      gens.push_back(std::move(e));
    }
    return {shape, gens};
  }

  const AdditiveShape& shape() const { return shape_; }

  /// Echelon generators as ring elements.
  std::vector<RingElement> generators() const {
    std::vector<RingElement> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(unscaled(r));
    return out;
  }

  /// log_p of the subgroup order.
  int order_exponent() const {
    const PrimePower R = shape_.chain();
    int e = 0;
    for (const auto& r : rows_) e += R.K - R.val(r[pivot(r)]);
    return e;
  }

  Int order() const { return ipow(shape_.p(), order_exponent()); }
  bool is_trivial() const { return rows_.empty(); }
  bool is_whole() const { return order_exponent() == shape_.n(); }

  bool contains(const RingElement& x) const {
    const PrimePower R = shape_.chain();
    Vec y = scaled(x);
    for (const auto& r : rows_) {
      const std::size_t j = pivot(r);
      const Int pv = r[j];
      if (y[j] % pv != 0) return false;
      detail::axpy_row(y, r, y[j] / pv, R);
    }
    return detail::is_zero(y);
  }

  bool contains(const SubgroupBasis& other) const {
    for (const auto& g : other.generators())
      if (!contains(g)) return false;
    return true;
  }

  /// Independent generators h_t with additive order p^{e_t}, e_t weakly
  /// decreasing, such that the subgroup is the direct sum of the <h_t>.
  std::vector<std::pair<RingElement, int>> decomposition() const {
    std::vector<std::pair<RingElement, int>> out;
    if (rows_.empty()) return out;
    const PrimePower R = shape_.chain();
    const SmithForm s = smith_form(rows_, shape_.rank(), R);
    for (std::size_t t = 0; t < s.diag_val.size(); ++t) {
      const int v = s.diag_val[t];
      if (v >= R.K) continue;
      Vec h = s.Vinv[t];
      for (auto& x : h) x = R.mod(x * R.pow(v));
      out.emplace_back(unscaled(h), R.K - v);
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
  }

  /// All elements, enumerated through the decomposition.
  std::vector<RingElement> elements() const {
    const auto dec = decomposition();
    const std::size_t m = shape_.rank();
    std::vector<RingElement> out{RingElement(m, 0)};
    for (const auto& [h, e] : dec) {
      const Int ord = ipow(shape_.p(), e);
      std::vector<RingElement> next;
      next.reserve(out.size() * static_cast<std::size_t>(ord));
      for (const auto& x : out) {
        RingElement y = x;
        for (Int a = 0; a < ord; ++a) {
          next.push_back(y);
          for (std::size_t i = 0; i < m; ++i) y[i] = floor_mod(y[i] + h[i], shape_.modulus(i));
        }
      }
      out = std::move(next);
    }
    return out;
  }

  SubgroupBasis operator+(const SubgroupBasis& o) const {
    auto g = generators();
    for (auto& x : o.generators()) g.push_back(std::move(x));
    return {shape_, g};
  }

  bool operator==(const SubgroupBasis& o) const { return shape_ == o.shape_ && rows_ == o.rows_; }

  /// Canonical key (the Howell rows), usable for ordering and hashing.
  const Mat& key() const { return rows_; }

 private:
  static std::size_t pivot(const Vec& r) {
    std::size_t j = 0;
    while (r[j] == 0) ++j;
    return j;
  }

  Vec scaled(const RingElement& x) const {
    const PrimePower R = shape_.chain();
    Vec y(shape_.rank());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = R.mod(floor_mod(x.at(i), shape_.modulus(i)) * R.pow(R.K - shape_.exponent(i)));
    return y;
  }

  RingElement unscaled(const Vec& y) const {
    const PrimePower R = shape_.chain();
    RingElement x(shape_.rank());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = y[i] / R.pow(R.K - shape_.exponent(i));
    return x;
  }

  AdditiveShape shape_;
  Mat rows_;
};

inline SubgroupBasis span(const FiniteRing& R, const std::vector<RingElement>& gens) {
  for (const auto& g : gens) R.check_conforms(g);
  return {R.shape(), gens};
}

/// Additive span of all products a*b with a in A, b in B.
inline SubgroupBasis product_span(const FiniteRing& R, const SubgroupBasis& A, const SubgroupBasis& B) {
  std::vector<RingElement> gens;
  const auto ga = A.generators(), gb = B.generators();
  for (const auto& a : ga)
    for (const auto& b : gb) gens.push_back(R.mul(a, b));
  return {R.shape(), gens};
}

/// p*H.
inline SubgroupBasis scaled_by_p(const FiniteRing& R, const SubgroupBasis& H) {
  std::vector<RingElement> gens;
  for (const auto& g : H.generators()) gens.push_back(R.scale(R.p(), g));
  return {R.shape(), gens};
}

/// R^k: the additive subgroup generated by all k-fold products.
inline SubgroupBasis power_ideal(const FiniteRing& R, int k) {
  if (k < 1) throw Error(Errc::ParameterOutOfRange, "power_ideal needs k >= 1");
  const SubgroupBasis whole = SubgroupBasis::whole(R.shape());
  SubgroupBasis P = whole;
  for (int i = 1; i < k && !P.is_trivial(); ++i) P = product_span(R, P, whole);
  return P;
}

struct NilpotencyResult {
  bool nilpotent = false;
  std::optional<int> index;  // least m with R^m = 0
};

inline NilpotencyResult is_nilpotent(const FiniteRing& R) {
  const SubgroupBasis whole = SubgroupBasis::whole(R.shape());
  SubgroupBasis P = whole;
  int m = 1;
  while (!P.is_trivial()) {
    SubgroupBasis next = product_span(R, P, whole);
    if (next == P) return {false, std::nullopt};
    P = std::move(next);
    ++m;
  }
  return {true, m};
}

inline SubgroupBasis subring_generated(const FiniteRing& R, const std::vector<RingElement>& gens) {
  SubgroupBasis H = span(R, gens);
  for (;;) {
    SubgroupBasis next = H + product_span(R, H, H);
    if (next == H) return H;
    H = std::move(next);
  }
}

inline SubgroupBasis ideal_generated(const FiniteRing& R, const std::vector<RingElement>& gens) {
  SubgroupBasis H = span(R, gens);
  const SubgroupBasis whole = SubgroupBasis::whole(R.shape());
  for (;;) {
    SubgroupBasis next = H + product_span(R, whole, H) + product_span(R, H, whole);
    if (next == H) return H;
    H = std::move(next);
  }
}

inline bool is_ideal(const FiniteRing& R, const SubgroupBasis& I) {
  for (const auto& g : I.generators())
    for (std::size_t i = 0; i < R.rank(); ++i) {
      if (!I.contains(R.mul(R.basis(i), g)) || !I.contains(R.mul(g, R.basis(i)))) return false;
    }
  return true;
}

inline bool is_subring(const FiniteRing& R, const SubgroupBasis& S) { return S.contains(product_span(R, S, S)); }

/// True when I is nilpotent as a (not necessarily unital) ring: I^m = 0.
inline bool is_nilpotent_subring(const FiniteRing& R, const SubgroupBasis& I) {
  SubgroupBasis P = I;
  while (!P.is_trivial()) {
    SubgroupBasis next = product_span(R, P, I);
    if (next == P) return false;
    P = std::move(next);
  }
  return true;
}

/// Coordinates with respect to an independent family b_1..b_q of ring
/// elements with additive orders p^{e_t}.
class CoordinateSystem {
 public:
  CoordinateSystem() = default;

  CoordinateSystem(const FiniteRing& R, std::vector<RingElement> basis, std::vector<int> orders)
      : shape_(R.shape()), basis_(std::move(basis)), orders_(std::move(orders)) {
    solver_ = LinearSolver(basis_, shape_.exponents(), shape_.chain());
  }

  std::optional<Vec> coordinates(const RingElement& x) const {
    auto a = solver_.solve(x);
    if (!a) return std::nullopt;
    for (std::size_t t = 0; t < a->size(); ++t) (*a)[t] = floor_mod((*a)[t], ipow(shape_.p(), orders_[t]));
    return a;
  }

  const std::vector<RingElement>& basis() const { return basis_; }
  const std::vector<int>& orders() const { return orders_; }

 private:
  AdditiveShape shape_;
  std::vector<RingElement> basis_;
  std::vector<int> orders_;
  LinearSolver solver_;
};

/// Structure constants of R with respect to a new additive basis.
inline FiniteRing table_in_basis(const FiniteRing& R, const std::vector<RingElement>& basis, const std::vector<int>& orders) {
  const AdditiveShape shape(R.p(), orders);
  const CoordinateSystem cs(R, basis, orders);
  const std::size_t q = basis.size();
  std::vector<RingElement> prods(q * q);
  for (std::size_t s = 0; s < q; ++s)
    for (std::size_t t = 0; t < q; ++t) {
      auto a = cs.coordinates(R.mul(basis[s], basis[t]));
      if (!a) throw Error(Errc::NotAnIdeal, "product leaves the span of the basis");
      prods[s * q + t] = *a;
    }
  return FiniteRing::from_products(shape, prods);
}

/// R presented on the basis b_1..b_m (orders must be weakly decreasing and
/// the b_i must generate R freely).
inline FiniteRing rebase(const FiniteRing& R, const std::vector<RingElement>& basis) {
  std::vector<int> orders;
  for (const auto& b : basis) {
    R.check_conforms(b);
    orders.push_back(R.order_exponent(b));
  }
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (orders[i] == 0) throw Error(Errc::InvalidBasisChange, "basis element " + std::to_string(i + 1) + " is zero");
    if (i > 0 && orders[i] > orders[i - 1])
      throw Error(Errc::InvalidBasisChange, "basis element orders must be weakly decreasing");
  }
  if (std::accumulate(orders.begin(), orders.end(), 0) != R.shape().n() || !span(R, basis).is_whole())
    throw Error(Errc::InvalidBasisChange, "elements do not form a basis of the additive group");
  return table_in_basis(R, basis, orders);
}

/// A subring presented as a ring, with its basis inside the ambient ring.
struct SubringPresentation {
  FiniteRing ring;
  std::vector<RingElement> basis;  // in the ambient ring
  AdditiveShape ambient_shape;

  /// Element of the ambient ring with coordinates `a` in `basis`.
  RingElement embed(const RingElement& a) const {
    RingElement x(ambient_shape.rank(), 0);
    for (std::size_t t = 0; t < basis.size(); ++t)
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = floor_mod(x[i] + a[t] * basis[t][i], ambient_shape.modulus(i));
    return x;
  }
};

inline SubringPresentation subring_as_ring(const FiniteRing& R, const SubgroupBasis& S) {
  if (!is_subring(R, S)) throw Error(Errc::NotAnIdeal, "subgroup is not closed under multiplication");
  std::vector<RingElement> basis;
  std::vector<int> orders;
  for (auto& [h, e] : S.decomposition()) {
    basis.push_back(h);
    orders.push_back(e);
  }
  SubringPresentation out;
  out.ring = table_in_basis(R, basis, orders);
  out.basis = std::move(basis);
  out.ambient_shape = R.shape();
  return out;
}

/// R/I on the transversal read off the Smith form of the relations.
struct QuotientRing {
  FiniteRing ring;
  Mat projection;                  // rank(R) x rank(R/I): y = x * projection
  std::vector<RingElement> lifts;  // representatives in R of the new basis

  RingElement project(const RingElement& x) const {
    const std::size_t q = ring.rank();
    RingElement y(q, 0);
    for (std::size_t t = 0; t < q; ++t) {
      const Int M = ring.shape().modulus(t);
      Int acc = 0;
      for (std::size_t i = 0; i < x.size(); ++i) acc = (acc + floor_mod(x[i], M) * floor_mod(projection[i][t], M)) % M;
      y[t] = acc;
    }
    return y;
  }
};

inline QuotientRing quotient_ring(const FiniteRing& R, const SubgroupBasis& I) {
  if (!(I.shape() == R.shape())) throw Error(Errc::ShapeMismatch, "subgroup belongs to a different shape");
  if (!is_ideal(R, I)) throw Error(Errc::NotAnIdeal, "subgroup is not a two-sided ideal");
  const std::size_t m = R.rank();
  const PrimePower P = R.shape().chain();
  Mat rel;
  for (std::size_t i = 0; i < m; ++i) {
    Vec r(m, 0);
    r[i] = P.mod(R.shape().modulus(i));
    rel.push_back(std::move(r));
  }
  for (auto& g : I.generators()) rel.push_back(std::move(g));
  const SmithForm s = smith_form(rel, m, P);
  std::vector<std::size_t> keep;
  for (std::size_t t = 0; t < m; ++t)
    if (s.diag_val[t] > 0) keep.push_back(t);
  std::stable_sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) { return s.diag_val[a] > s.diag_val[b]; });

  QuotientRing Q;
  std::vector<int> exps;
  for (std::size_t t : keep) exps.push_back(s.diag_val[t]);
  const AdditiveShape qs(R.p(), exps);
  Q.projection.assign(m, Vec(keep.size(), 0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t u = 0; u < keep.size(); ++u) Q.projection[i][u] = floor_mod(s.V[i][keep[u]], qs.modulus(u));
  for (std::size_t t : keep) Q.lifts.push_back(R.reduce(s.Vinv[t]));
  Q.ring = FiniteRing::make(qs, Table(keep.size() * keep.size() * keep.size(), 0));
  std::vector<RingElement> prods;
  for (std::size_t a = 0; a < keep.size(); ++a)
    for (std::size_t b = 0; b < keep.size(); ++b) prods.push_back(Q.project(R.mul(Q.lifts[a], Q.lifts[b])));
  Q.ring = FiniteRing::from_products(qs, prods);
  return Q;
}

/// Direct sum A + B with block-diagonal constants; basis reordered so
/// exponents stay weakly decreasing (stable: A's elements first on ties).
struct DirectSum {
  FiniteRing ring;
  std::vector<std::size_t> position_of_left;   // x_i of A -> index in the sum
  std::vector<std::size_t> position_of_right;  // x_j of B -> index in the sum
};

inline DirectSum direct_sum_with_positions(const FiniteRing& A, const FiniteRing& B) {
  if (A.p() != B.p()) throw Error(Errc::ShapeMismatch, "direct sum of rings of different characteristic primes");
  const std::size_t a = A.rank(), b = B.rank(), m = a + b;
  std::vector<std::pair<int, std::size_t>> order;  // (exponent, old index)
  for (std::size_t i = 0; i < a; ++i) order.emplace_back(A.shape().exponent(i), i);
  for (std::size_t j = 0; j < b; ++j) order.emplace_back(B.shape().exponent(j), a + j);
  std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  std::vector<std::size_t> pos(m);
  std::vector<int> exps;
  for (std::size_t k = 0; k < m; ++k) {
    pos[order[k].second] = k;
    exps.push_back(order[k].first);
  }
  Table t(m * m * m, 0);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < a; ++j)
      for (std::size_t l = 0; l < a; ++l) t[(pos[i] * m + pos[j]) * m + pos[l]] = A.c(i, j, l);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < b; ++j)
      for (std::size_t l = 0; l < b; ++l) t[(pos[a + i] * m + pos[a + j]) * m + pos[a + l]] = B.c(i, j, l);
  DirectSum out;
  out.ring = FiniteRing::make(AdditiveShape(A.p(), exps), t);
  out.position_of_left.assign(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(a));
  out.position_of_right.assign(pos.begin() + static_cast<std::ptrdiff_t>(a), pos.end());
  return out;
}

inline FiniteRing direct_sum(const FiniteRing& A, const FiniteRing& B) { return direct_sum_with_positions(A, B).ring; }

/// The two-sided identity, from the linear conditions e x_i = x_i e = x_i.
inline std::optional<RingElement> find_identity(const FiniteRing& R) {
  const std::size_t m = R.rank();
  if (m == 0) return RingElement{};
  Mat A(m);
  std::vector<int> exps;
  Vec b;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l < m; ++l) {
      for (std::size_t u = 0; u < m; ++u) {
        A[u].push_back(R.c(u, i, l));
        A[u].push_back(R.c(i, u, l));
      }
      exps.push_back(R.shape().exponent(l));
      exps.push_back(R.shape().exponent(l));
      b.push_back(i == l ? 1 : 0);
      b.push_back(i == l ? 1 : 0);
    }
  const LinearSolver solver(A, exps, R.shape().chain());
  auto e = solver.solve(b);
  if (!e) return std::nullopt;
  RingElement x = R.reduce(*e);
  for (std::size_t i = 0; i < m; ++i)
    if (R.mul(x, R.basis(i)) != R.basis(i) || R.mul(R.basis(i), x) != R.basis(i)) return std::nullopt;
  return x;
}

struct UnitGroupReport {
  Int order = 0;
  bool is_abelian = false;
  std::vector<Int> abelian_invariants;  // d_1 | d_2 | ... ; empty when not abelian
  Int exponent = 1;
};

inline std::vector<std::pair<Int, int>> factorize(Int n) {
  std::vector<std::pair<Int, int>> f;
  for (Int d = 2; d * d <= n; ++d) {
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    if (e) f.emplace_back(d, e);
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

/// Invariant factors of a finite abelian group given the multiset of its
/// element orders.
inline std::vector<Int> invariant_factors_from_orders(const std::vector<Int>& orders, Int group_order) {
  std::vector<std::vector<int>> parts;  // per prime: exponents of cyclic q-factors
  for (auto [q, e] : factorize(group_order)) {
    // N_j = #{x : x^{q^j} = 1} = q^{sum_i min(j, e_i)}
    std::vector<int> log_counts{0};
    for (int j = 1; j <= e; ++j) {
      const Int qj = ipow(q, j);
      Int cnt = 0;
      for (Int o : orders) {
        Int qpart = 1;
        Int r = o;
        while (r % q == 0) {
          r /= q;
          qpart *= q;
        }
        if (r == 1 && qj % qpart == 0) ++cnt;
      }
      int lg = 0;
      while (cnt > 1) {
        cnt /= q;
        ++lg;
      }
      log_counts.push_back(lg);
    }
    // number of factors with exponent >= j is log_counts[j] - log_counts[j-1]
    std::vector<int> exps;
    for (int j = e; j >= 1; --j) {
      int ge_j = log_counts[static_cast<std::size_t>(j)] - log_counts[static_cast<std::size_t>(j - 1)];
      int ge_j1 = j < e ? log_counts[static_cast<std::size_t>(j + 1)] - log_counts[static_cast<std::size_t>(j)] : 0;
      for (int c = 0; c < ge_j - ge_j1; ++c) exps.push_back(j);
    }
    parts.push_back(exps);
  }
  std::size_t len = 0;
  for (const auto& pe : parts) len = std::max(len, pe.size());
  std::vector<Int> inv(len, 1);
  auto fac = factorize(group_order);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    // exps are descending; align the largest with the last invariant factor
    const auto& pe = parts[k];
    for (std::size_t c = 0; c < pe.size(); ++c) inv[len - 1 - c] *= ipow(fac[k].first, pe[c]);
  }
  return inv;
}

inline UnitGroupReport unit_group(const FiniteRing& R) {
  const auto one = find_identity(R);
  if (!one) throw Error(Errc::NoIdentity, "ring has no identity element");
  const auto elems = R.elements();
  std::vector<RingElement> units;
  std::vector<Int> orders;
  for (const auto& x : elems) {
    // powers of x are eventually periodic; x is a unit iff 1 appears
    std::set<RingElement> seen;
    RingElement y = x;
    Int k = 1;
    bool unit = false;
    while (seen.insert(y).second) {
      if (y == *one) {
        unit = true;
        break;
      }
      y = R.mul(y, x);
      ++k;
    }
    if (unit) {
      units.push_back(x);
      orders.push_back(k);
    }
  }
  UnitGroupReport rep;
  rep.order = static_cast<Int>(units.size());
  for (Int o : orders) rep.exponent = std::lcm(rep.exponent, o);
  rep.is_abelian = true;
  for (std::size_t i = 0; i < units.size() && rep.is_abelian; ++i)
    for (std::size_t j = i + 1; j < units.size(); ++j)
      if (R.mul(units[i], units[j]) != R.mul(units[j], units[i])) {
        rep.is_abelian = false;
        break;
      }
  if (rep.is_abelian) rep.abelian_invariants = invariant_factors_from_orders(orders, rep.order);
  return rep;
}

}  // namespace finring
