#pragma once

// End-to-end checks of the worked examples shipped in examples_data.hpp.

#include <string>
#include <vector>

#include "finring/examples_data.hpp"
#include "finring/flatten.hpp"
#include "finring/iso.hpp"

namespace finring {

struct RegressionCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline Vec table_row(const FpTable& A, std::size_t i, std::size_t j) {
  Vec r;
  for (std::size_t k = 0; k < A.dim; ++k) r.push_back(A.at(i, j, k));
  return r;
}

}  // namespace detail

/// Z/8: units C2 x C2; its flattening is associative, isomorphic to
/// F_2[X]/(X^3), and has cyclic units of order 4.
inline RegressionCheck check_z8_flattening() {
  RegressionCheck c{"units and flattening of Z/8", false, ""};
  const FiniteRing R = parse_ring(examples::kZ8);
  const auto u = unit_group(R);
  auto F = flatten(R);
  const bool assoc = !check_associativity(F.table).has_value();
  bool iso = false, cyclic = false;
  if (assoc) {
    const FiniteRing A = F.table.as_ring();
    iso = is_isomorphic(A, parse_ring(examples::kF2TruncatedCubic));
    const auto ua = unit_group(A);
    cyclic = ua.order == 4 && ua.abelian_invariants == std::vector<Int>{4};
  }
  c.passed = u.abelian_invariants == std::vector<Int>{2, 2} && assoc && iso && cyclic;
  c.detail = "units " + detail::join(u.abelian_invariants, 'x') + ", flattening " + (assoc ? "associative" : "not associative") +
             (iso ? ", = F2[X]/(X^3)" : "") + (cyclic ? ", units C4" : "");
  return c;
}

/// The rank-2 ring over Z/9 whose flattening is not associative.
inline RegressionCheck check_nonassociative_flattening() {
  RegressionCheck c{"non-associative flattening", false, ""};
  auto F = flatten(parse_ring(examples::kNonAssocFlattening));
  const FpTable& A = F.table;
  const bool table_ok = A.dim == 4 && detail::table_row(A, 0, 0) == Vec{0, 2, 0, 1} && detail::table_row(A, 0, 1) == Vec{1, 1, 0, 0} &&
                        detail::table_row(A, 1, 0) == Vec{1, 1, 0, 0} && detail::table_row(A, 1, 1) == Vec{2, 0, 0, 1} &&
                        detail::table_row(A, 1, 3) == Vec{0, 0, 2, 0} && detail::table_row(A, 3, 1) == Vec{0, 0, 2, 0};
  const auto w = check_associativity(F.table);
  const bool witness_ok = w && w->triple == std::array<std::size_t, 3>{0, 0, 1} && w->left == Vec{1, 0, 2, 2} && w->right == Vec{1, 0, 0, 1};
  c.passed = table_ok && witness_ok;
  c.detail = std::string(table_ok ? "table matches" : "table differs") +
             (w ? ", (z1 z1) z2 = (" + detail::join(w->left) + ") vs z1 (z1 z2) = (" + detail::join(w->right) + ")" : ", associative");
  return c;
}

/// The same ring has identity 7x1 + x2, and on the basis (e, 4e + x1) its
/// flattening is F_3[X]/(X^4).
inline RegressionCheck check_identity_rebased_flattening() {
  RegressionCheck c{"identity and re-based flattening", false, ""};
  const FiniteRing R = parse_ring(examples::kNonAssocFlattening);
  const auto e = find_identity(R);
  const bool id_ok = e && *e == RingElement{7, 1};
  bool iso = false;
  if (id_ok) {
    const RingElement x = R.add(R.scale(4, *e), RingElement{1, 0});
    auto S = flatten(rebase(R, {*e, x})).table;
    iso = !check_associativity(S).has_value() && is_isomorphic(S.as_ring(), parse_ring(examples::kF3TruncatedQuartic));
  }
  c.passed = id_ok && iso;
  c.detail = (e ? "identity " + format_element(*e) : std::string("no identity")) + (iso ? ", flattening = F3[X]/(X^4)" : "");
  return c;
}

inline RegressionCheck check_x_squared_rings_differ() {
  RegressionCheck c{"x^2 = 3e vs x^2 = 6e", false, ""};
  c.passed = !is_isomorphic(parse_ring(examples::kUnitalXSquared3e), parse_ring(examples::kUnitalXSquared6e));
  c.detail = c.passed ? "not isomorphic" : "isomorphic";
  return c;
}

inline RegressionCheck check_idempotent_algebras_differ() {
  RegressionCheck c{"four idempotent algebras", false, ""};
  const std::vector<FiniteRing> rs{parse_ring(examples::kIdemBoth), parse_ring(examples::kIdemNeither), parse_ring(examples::kIdemLeft),
                                   parse_ring(examples::kIdemRight)};
  int distinct = 0, pairs = 0;
  for (std::size_t a = 0; a < rs.size(); ++a)
    for (std::size_t b = a + 1; b < rs.size(); ++b, ++pairs) distinct += !is_isomorphic(rs[a], rs[b]);
  c.passed = distinct == pairs && pairs == 6;
  c.detail = std::to_string(distinct) + "/" + std::to_string(pairs) + " pairs non-isomorphic";
  return c;
}

inline std::vector<RegressionCheck> worked_example_checks() {
  return {check_z8_flattening(), check_nonassociative_flattening(), check_identity_rebased_flattening(), check_x_squared_rings_differ(),
          check_idempotent_algebras_differ()};
}

}  // namespace finring
