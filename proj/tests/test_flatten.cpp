#include <gtest/gtest.h>

#include "finring/examples_data.hpp"
#include "finring/flatten.hpp"
#include "finring/iso.hpp"

using namespace finring;

namespace {

Vec phi_row(const FpTable& A, std::size_t i, std::size_t j) {
  Vec r;
  for (std::size_t k = 0; k < A.dim; ++k) r.push_back(A.at(i, j, k));
  return r;
}

}  // namespace

TEST(Flatten, Z8IsTruncatedPolynomialAlgebra) {
  auto F = flatten(parse_ring(examples::kZ8));
  EXPECT_FALSE(check_associativity(F.table).has_value());
  EXPECT_EQ(F.table.associative, Associativity::Yes);
  auto A = F.table.as_ring();
  EXPECT_TRUE(is_isomorphic(A, parse_ring(examples::kF2TruncatedCubic)));
  EXPECT_EQ(unit_group(A).abelian_invariants, (std::vector<Int>{4}));
}

TEST(Flatten, NonAssociativeTable) {
  auto F = flatten(parse_ring(examples::kNonAssocFlattening));
  const auto& A = F.table;
  ASSERT_EQ(A.dim, 4u);
  EXPECT_EQ(phi_row(A, 0, 0), (Vec{0, 2, 0, 1}));
  EXPECT_EQ(phi_row(A, 0, 1), (Vec{1, 1, 0, 0}));
  EXPECT_EQ(phi_row(A, 1, 0), (Vec{1, 1, 0, 0}));
  EXPECT_EQ(phi_row(A, 1, 1), (Vec{2, 0, 0, 1}));
  EXPECT_EQ(phi_row(A, 1, 3), (Vec{0, 0, 2, 0}));
  EXPECT_EQ(phi_row(A, 3, 1), (Vec{0, 0, 2, 0}));
  // z-ordering: x1, x2, 3x1, 3x2
  EXPECT_EQ(F.basis.ordering[2], (std::pair<std::size_t, int>{0, 1}));
  auto w = check_associativity(F.table);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->triple, (std::array<std::size_t, 3>{0, 0, 1}));
  EXPECT_EQ(w->left, (Vec{1, 0, 2, 2}));
  EXPECT_EQ(w->right, (Vec{1, 0, 0, 1}));
  EXPECT_THROW(F.table.as_ring(), Error);
}

TEST(Flatten, RebasedPresentationIsTruncatedQuartic) {
  auto A = flatten(parse_ring(examples::kUnitalXSquared3e)).table;
  EXPECT_FALSE(check_associativity(A).has_value());
  EXPECT_TRUE(is_isomorphic(A.as_ring(), parse_ring(examples::kF3TruncatedQuartic)));
}

TEST(Flatten, ZeroTableAssociative) {
  FpTable Z{3, 3, Table(27, 0), Associativity::Unknown, std::nullopt};
  EXPECT_FALSE(check_associativity(Z).has_value());
}

TEST(FlattenBasisDependence, Examples) {
  auto R = parse_ring(examples::kNonAssocFlattening);
  RingElement e{7, 1};
  RingElement x = R.add(R.scale(4, e), RingElement{1, 0});
  auto [a, b] = flatten_basis_dependence(R, {e, x});
  EXPECT_TRUE(check_associativity(a).has_value());
  EXPECT_FALSE(check_associativity(b).has_value());
  EXPECT_TRUE(is_isomorphic(b.as_ring(), parse_ring(examples::kF3TruncatedQuartic)));

  auto [c, d] = flatten_basis_dependence(R, {R.basis(0), R.basis(1)});
  EXPECT_EQ(c, d);

  auto Z4 = make_ring(AdditiveShape(2, {2}), {1});
  auto [f1, f3] = flatten_basis_dependence(Z4, {{3}});
  EXPECT_FALSE(check_associativity(f1).has_value());
  EXPECT_FALSE(check_associativity(f3).has_value());
  // 3 * 3 = 1 in the basis {3}: x^2 = 3x, digits (1, 1)
  EXPECT_EQ(phi_row(f3, 0, 0), (Vec{1, 1}));
  EXPECT_EQ(phi_row(f1, 0, 0), (Vec{1, 0}));

  try {
    flatten_basis_dependence(R, {e, R.scale(3, e)});
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), Errc::InvalidBasisChange);
  }
}

TEST(Flatten, DigitBijection) {
  for (const auto& [name, rec] : examples::named_records()) {
    auto R = parse_ring(rec);
    auto F = flatten(R);
    EXPECT_EQ(F.table.dim, static_cast<std::size_t>(R.shape().n()));
    std::set<Vec> seen;
    for (const auto& a : R.elements()) {
      Vec d = F.basis.to_digits(a, R.p());
      for (Int x : d) EXPECT_LT(x, R.p());
      EXPECT_EQ(F.basis.from_digits(d, R.p()), a);
      seen.insert(d);
    }
    EXPECT_EQ(seen.size(), static_cast<std::size_t>(R.order()));
  }
}

TEST(Flatten, ElementaryShapeReproducesTable) {
  for (const auto& [name, rec] : examples::named_records()) {
    auto R = parse_ring(rec);
    if (!R.shape().elementary()) continue;
    auto F = flatten(R);
    EXPECT_EQ(F.table.phi, R.table()) << name;
    EXPECT_FALSE(check_associativity(F.table).has_value()) << name;
  }
}

TEST(Flatten, TextFormatRoundTrip) {
  auto F = flatten(parse_ring(examples::kNonAssocFlattening));
  check_associativity(F.table);
  const std::string s = format_fp_table(F.table);
  EXPECT_NE(s.find("associative=no:1,1,2"), std::string::npos);
  auto back = parse_fp_table(s);
  EXPECT_EQ(back, F.table);
  EXPECT_EQ(back.associative, Associativity::No);
  auto G = flatten(parse_ring(examples::kZ8));
  check_associativity(G.table);
  EXPECT_NE(format_fp_table(G.table).find("associative=yes"), std::string::npos);
  EXPECT_THROW(parse_fp_table("p=2;shape=2\nc[1][1]=1\n"), Error);
}
