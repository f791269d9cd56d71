#pragma once

// Isomorphism testing and canonical forms. Isomorphisms are searched as
// images of the additive basis: each image must have the right additive
// order, stay independent of the earlier images, and satisfy every product
// relation whose terms are already assigned.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "finring/error.hpp"
#include "finring/ring.hpp"
#include "finring/subgroup.hpp"

namespace finring {

namespace detail {

/// ord y, ord y^2, ord y^3, idempotence, |yR| and |Ry| (as p-exponents).
using ElementSignature = std::array<int, 6>;

inline ElementSignature signature(const FiniteRing& R, const RingElement& y) {
  const RingElement y2 = R.mul(y, y);
  std::vector<RingElement> left, right;
  for (std::size_t i = 0; i < R.rank(); ++i) {
    left.push_back(R.mul(y, R.basis(i)));
    right.push_back(R.mul(R.basis(i), y));
  }
  return {R.order_exponent(y), R.order_exponent(y2), R.order_exponent(R.mul(y2, y)), y2 == y ? 1 : 0,
          span(R, left).order_exponent(), span(R, right).order_exponent()};
}

inline std::map<ElementSignature, std::size_t> signature_histogram(const FiniteRing& R) {
  std::map<ElementSignature, std::size_t> h;
  for (const auto& y : R.elements()) ++h[signature(R, y)];
  return h;
}

/// R built up from a few generators: every node is a generator or the
/// product of two earlier nodes, and the nodes span R additively.
struct GeneratorProgram {
  struct Node {
    int a = -1, b = -1;  // a < 0: generator
    RingElement value;
  };
  std::vector<Node> nodes;
  std::vector<std::size_t> generator_nodes;
  std::vector<std::size_t> level_end;  // nodes [generator_nodes[t], level_end[t]) are fixed by generator t
  std::vector<int> span_exponent;      // order exponent of span(nodes[0..k])
  std::vector<Vec> basis_coords;       // x_i = sum_k basis_coords[i][k] * node_k
  struct Relation {
    std::size_t a, b;
    Vec coeffs;  // node_a node_b = sum_k coeffs[k] node_k
  };
  std::vector<std::vector<Relation>> relations;  // checked once generator t is placed

  explicit GeneratorProgram(const FiniteRing& R) {
    SubgroupBasis H = SubgroupBasis::trivial(R.shape());
    auto push = [&](int a, int b, RingElement v) {
      H = H + span(R, {v});
      nodes.push_back({a, b, std::move(v)});
      span_exponent.push_back(H.order_exponent());
    };
    // generators are taken outside R^2 + pR when possible, preferring the
    // one whose products with the existing nodes reach furthest
    const SubgroupBasis whole = SubgroupBasis::whole(R.shape());
    const SubgroupBasis decomposable = product_span(R, whole, whole) + scaled_by_p(R, whole);
    auto reach = [&](const RingElement& x) {
      std::vector<RingElement> vals{x};
      for (const auto& n : nodes) vals.push_back(n.value);
      SubgroupBasis K = H + span(R, {x});
      for (bool grew = true; grew;) {
        grew = false;
        const std::size_t cnt = vals.size();
        for (std::size_t a = 0; a < cnt; ++a)
          for (std::size_t b = 0; b < cnt; ++b) {
            RingElement v = R.mul(vals[a], vals[b]);
            if (K.contains(v)) continue;
            K = K + span(R, {v});
            vals.push_back(std::move(v));
            grew = true;
          }
      }
      return K.order_exponent();
    };
    while (!H.is_whole()) {
      std::size_t i = R.rank();
      std::pair<int, int> best{-1, -1};
      for (std::size_t c = 0; c < R.rank(); ++c) {
        if (H.contains(R.basis(c))) continue;
        const std::pair<int, int> key{decomposable.contains(R.basis(c)) ? 0 : 1, reach(R.basis(c))};
        if (key > best) {
          best = key;
          i = c;
        }
      }
      generator_nodes.push_back(nodes.size());
      push(-1, static_cast<int>(generator_nodes.size() - 1), R.basis(i));
      for (bool grew = true; grew;) {
        grew = false;
        for (std::size_t a = 0; a < nodes.size() && !grew; ++a)
          for (std::size_t b = 0; b < nodes.size() && !grew; ++b) {
            RingElement v = R.mul(nodes[a].value, nodes[b].value);
            if (H.contains(v)) continue;
            push(static_cast<int>(a), static_cast<int>(b), std::move(v));
            grew = true;
          }
      }
      level_end.push_back(nodes.size());
      Mat vals;
      for (const auto& n : nodes) vals.push_back(n.value);
      const LinearSolver solver(vals, R.shape().exponents(), R.shape().chain());
      const std::size_t prev = level_end.size() > 1 ? level_end[level_end.size() - 2] : 0;
      relations.emplace_back();
      for (std::size_t a = 0; a < nodes.size(); ++a)
        for (std::size_t b = 0; b < nodes.size(); ++b) {
          if (a < prev && b < prev) continue;
          bool is_node = false;
          for (const auto& n : nodes) is_node |= n.a == static_cast<int>(a) && n.b == static_cast<int>(b);
          if (is_node) continue;
          relations.back().push_back({a, b, *solver.solve(R.mul(nodes[a].value, nodes[b].value))});
        }
    }
    Mat vals;
    for (const auto& n : nodes) vals.push_back(n.value);
    if (nodes.empty()) return;
    const LinearSolver solver(vals, R.shape().exponents(), R.shape().chain());
    for (std::size_t i = 0; i < R.rank(); ++i) basis_coords.push_back(*solver.solve(R.basis(i)));
  }
};

}  // namespace detail

/// Images of x_1..x_m in R2 defining an isomorphism R1 -> R2, if one exists.
/// Searches images of a generating set of R1; every product node is then
/// forced, and its signature and the growth of the image span prune early.
inline std::optional<std::vector<RingElement>> find_isomorphism(const FiniteRing& R1, const FiniteRing& R2) {
  if (!(R1.shape() == R2.shape())) return std::nullopt;
  const std::size_t m = R1.rank();
  if (m == 0) return std::vector<RingElement>{};
  if (R1 == R2) {
    std::vector<RingElement> id;
    for (std::size_t i = 0; i < m; ++i) id.push_back(R1.basis(i));
    return id;
  }
  if (R1.is_commutative() != R2.is_commutative()) return std::nullopt;
  if (R1.is_null() || R2.is_null()) return std::nullopt;  // equal null rings were caught above
  if (find_identity(R1).has_value() != find_identity(R2).has_value()) return std::nullopt;
  if (R1.order() <= 4096 && detail::signature_histogram(R1) != detail::signature_histogram(R2)) return std::nullopt;

  const detail::GeneratorProgram prog(R1);
  const auto& nodes = prog.nodes;
  std::vector<detail::ElementSignature> node_sig;
  for (const auto& n : nodes) node_sig.push_back(detail::signature(R1, n.value));
  const auto elems = R2.elements();
  std::map<detail::ElementSignature, std::vector<std::size_t>> by_sig;
  std::vector<detail::ElementSignature> sig2(elems.size());
  for (std::size_t e = 0; e < elems.size(); ++e) {
    sig2[e] = detail::signature(R2, elems[e]);
    by_sig[sig2[e]].push_back(e);
  }

  // signatures of g_t + c g_s (s < t, 0 < c < p) must be preserved
  const std::size_t ng = prog.generator_nodes.size();
  std::vector<std::vector<detail::ElementSignature>> mixed(ng);
  for (std::size_t t = 0; t < ng; ++t)
    for (std::size_t q = 0; q < t; ++q)
      for (Int c = 1; c < R1.p(); ++c)
        mixed[t].push_back(detail::signature(
            R1, R1.add(nodes[prog.generator_nodes[t]].value, R1.scale(c, nodes[prog.generator_nodes[q]].value))));

  std::vector<RingElement> img(nodes.size());
  std::vector<SubgroupBasis> spans(nodes.size() + 1);
  spans[0] = SubgroupBasis::trivial(R2.shape());
  std::optional<std::vector<RingElement>> result;

  std::function<bool(std::size_t)> dfs = [&](std::size_t t) -> bool {
    if (t == prog.generator_nodes.size()) {
      std::vector<RingElement> basis_img;
      for (const auto& c : prog.basis_coords) {
        RingElement y = R2.zero();
        for (std::size_t k = 0; k < nodes.size(); ++k)
          if (c[k]) y = R2.add(y, R2.scale(c[k], img[k]));
        basis_img.push_back(y);
      }
      try {
        if (rebase(R2, basis_img) == R1) {
          result = std::move(basis_img);
          return true;
        }
      } catch (const Error&) {
      }
      return false;
    }
    const std::size_t g = prog.generator_nodes[t];
    auto it = by_sig.find(node_sig[g]);
    if (it == by_sig.end()) return false;
    for (std::size_t e : it->second) {
      bool ok = true;
      std::size_t z = 0;
      for (std::size_t q = 0; q < t && ok; ++q)
        for (Int c = 1; c < R1.p() && ok; ++c, ++z)
          ok = sig2[static_cast<std::size_t>(R2.index_of(R2.add(elems[e], R2.scale(c, img[prog.generator_nodes[q]]))))] == mixed[t][z];
      if (!ok) continue;
      for (std::size_t k = g; k < prog.level_end[t] && ok; ++k) {
        img[k] = k == g ? elems[e] : R2.mul(img[static_cast<std::size_t>(nodes[k].a)], img[static_cast<std::size_t>(nodes[k].b)]);
        ok = k == g || sig2[static_cast<std::size_t>(R2.index_of(img[k]))] == node_sig[k];
      }
      for (std::size_t q = 0; q < prog.relations[t].size() && ok; ++q) {
        const auto& rel = prog.relations[t][q];
        RingElement y = R2.zero();
        for (std::size_t k = 0; k < rel.coeffs.size(); ++k)
          if (rel.coeffs[k]) y = R2.add(y, R2.scale(rel.coeffs[k], img[k]));
        ok = R2.mul(img[rel.a], img[rel.b]) == y;
      }
      for (std::size_t k = g; k < prog.level_end[t] && ok; ++k) {
        spans[k + 1] = spans[k] + span(R2, {img[k]});
        ok = spans[k + 1].order_exponent() == prog.span_exponent[k];
      }
      if (ok && dfs(t + 1)) return true;
    }
    return false;
  };
  dfs(0);
  return result;
}

inline bool is_isomorphic(const FiniteRing& R1, const FiniteRing& R2) { return find_isomorphism(R1, R2).has_value(); }

/// Addition and multiplication tables over element indices, plus additive
/// orders. Used where the same ring is transformed by many bases.
class ElementArithmetic {
 public:
  static constexpr std::size_t kMaxElements = 1024;

  explicit ElementArithmetic(const FiniteRing& R) : R_(&R), N_(static_cast<std::size_t>(R.order())) {
    if (N_ > kMaxElements)
      throw Error(Errc::BudgetExceeded, "ring of order " + std::to_string(N_) + " is too large for tabulated arithmetic");
    const auto elems = R.elements();
    add_.resize(N_ * N_);
    mul_.resize(N_ * N_);
    ord_.resize(N_);
    for (std::size_t a = 0; a < N_; ++a) {
      ord_[a] = static_cast<std::uint8_t>(R.order_exponent(elems[a]));
      for (std::size_t b = 0; b < N_; ++b) {
        add_[a * N_ + b] = static_cast<std::uint16_t>(R.index_of(R.add(elems[a], elems[b])));
        mul_[a * N_ + b] = static_cast<std::uint16_t>(R.index_of(R.mul(elems[a], elems[b])));
      }
    }
  }

  std::size_t size() const { return N_; }
  std::size_t add(std::size_t a, std::size_t b) const { return add_[a * N_ + b]; }
  std::size_t mul(std::size_t a, std::size_t b) const { return mul_[a * N_ + b]; }
  int order_exponent(std::size_t a) const { return ord_[a]; }
  const FiniteRing& ring() const { return *R_; }

  std::size_t scale(Int k, std::size_t a) const {
    std::size_t r = 0;
    for (Int i = 0; i < k; ++i) r = add(r, a);
    return r;
  }

 private:
  const FiniteRing* R_;
  std::size_t N_;
  std::vector<std::uint16_t> add_, mul_;
  std::vector<std::uint8_t> ord_;
};

/// Calls f(basis, coords) for every basis (b_1..b_m) of the additive group
/// with ord(b_t) = p^{k_t}; coords maps an element index to the mixed-radix
/// code of its coordinates in that basis. Returns false if f asked to stop.
inline bool for_each_additive_basis(const ElementArithmetic& A,
                                    const std::function<bool(const std::vector<std::size_t>&, const std::vector<std::uint32_t>&)>& f) {
  const FiniteRing& R = A.ring();
  const std::size_t m = R.rank(), N = A.size();
  const Int p = R.p();
  std::vector<std::size_t> basis(m);
  // span_code[t][e]: coordinate code of e in span(b_0..b_{t-1}), or kNone.
  constexpr std::uint32_t kNone = 0xffffffffu;
  std::vector<std::vector<std::uint32_t>> code(m + 1, std::vector<std::uint32_t>(N, kNone));
  code[0][0] = 0;
  std::vector<std::vector<std::size_t>> members(m + 1);
  members[0] = {0};
  // mixed radix: coordinate 0 most significant; weight of coordinate t
  std::vector<std::uint32_t> weight(m, 1);
  for (std::size_t t = m; t-- > 1;) weight[t - 1] = weight[t] * static_cast<std::uint32_t>(R.shape().modulus(t));

  std::function<bool(std::size_t)> dfs = [&](std::size_t t) -> bool {
    if (t == m) return f(basis, code[m]);
    const int k = R.shape().exponent(t);
    const Int ord = R.shape().modulus(t);
    for (std::size_t b = 1; b < N; ++b) {
      if (A.order_exponent(b) != k) continue;
      if (code[t][A.scale(ipow(p, k - 1), b)] != kNone) continue;
      basis[t] = b;
      auto& nc = code[t + 1];
      auto& nm = members[t + 1];
      std::fill(nc.begin(), nc.end(), kNone);
      nm.clear();
      std::size_t mult = 0;  // a * b
      for (Int a = 0; a < ord; ++a) {
        for (std::size_t s : members[t]) {
          const std::size_t e = A.add(s, mult);
          nc[e] = code[t][s] + static_cast<std::uint32_t>(a) * weight[t];
          nm.push_back(e);
        }
        mult = A.add(mult, b);
      }
      if (!dfs(t + 1)) return false;
    }
    return true;
  };
  return dfs(0);
}

namespace detail {

/// Table entries of R in the basis, written into `out` (standard layout).
inline void transformed_table(const ElementArithmetic& A, const std::vector<std::size_t>& basis,
                              const std::vector<std::uint32_t>& coords, Table& out) {
  const FiniteRing& R = A.ring();
  const std::size_t m = basis.size();
  out.resize(m * m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::uint32_t c = coords[A.mul(basis[i], basis[j])];
      for (std::size_t l = m; l-- > 0;) {
        const auto M = static_cast<std::uint32_t>(R.shape().modulus(l));
        out[(i * m + j) * m + l] = static_cast<Int>(c % M);
        c /= M;
      }
    }
}

/// Lexicographic comparison in the canonical traversal (l outer, then i, then j).
inline int compare_canonical(const Table& a, const Table& b, std::size_t m) {
  for (std::size_t l = 0; l < m; ++l)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t k = (i * m + j) * m + l;
        if (a[k] != b[k]) return a[k] < b[k] ? -1 : 1;
      }
  return 0;
}

}  // namespace detail

/// Calls f on the table of R in every basis of its additive group.
inline void for_each_basis_table(const FiniteRing& R, const std::function<void(const Table&)>& f) {
  if (R.rank() == 0) {
    f(R.table());
    return;
  }
  const ElementArithmetic A(R);
  Table t;
  for_each_additive_basis(A, [&](const std::vector<std::size_t>& basis, const std::vector<std::uint32_t>& coords) {
    detail::transformed_table(A, basis, coords, t);
    f(t);
    return true;
  });
}

/// The lexicographically least table (traversal l, i, j) over all bases.
inline FiniteRing canonical_form(const FiniteRing& R) {
  const std::size_t m = R.rank();
  Table best = R.table();
  for_each_basis_table(R, [&](const Table& t) {
    if (detail::compare_canonical(t, best, m) < 0) best = t;
  });
  return make_ring(R.shape(), best);
}

}  // namespace finring
