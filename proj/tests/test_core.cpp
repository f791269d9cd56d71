#include <gtest/gtest.h>

#include <random>
#include <set>

#include "finring/examples_data.hpp"
#include "finring/format.hpp"
#include "finring/subgroup.hpp"

using namespace finring;

namespace {

FiniteRing z_mod(Int p, int k) { return make_ring(AdditiveShape(p, {k}), {1}); }

// Free commutative cube-zero algebra of rank 2 over F_2: basis a, b, aa, ab, bb.
FiniteRing free_comm_rank2() {
  AdditiveShape sh = AdditiveShape::uniform(2, 5);
  std::vector<RingElement> prods(25, RingElement(5, 0));
  prods[0 * 5 + 0][2] = 1;
  prods[0 * 5 + 1][3] = 1;
  prods[1 * 5 + 0][3] = 1;
  prods[1 * 5 + 1][4] = 1;
  return FiniteRing::from_products(sh, prods);
}

// Oracle: closure of a set of elements under addition, by BFS.
std::set<RingElement> additive_closure(const FiniteRing& R, const std::vector<RingElement>& gens) {
  std::set<RingElement> s{R.zero()};
  std::vector<RingElement> frontier{R.zero()};
  while (!frontier.empty()) {
    std::vector<RingElement> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        auto y = R.add(x, g);
        if (s.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return s;
}

// Oracle: smallest set containing gens closed under + and *.
std::set<RingElement> ring_closure(const FiniteRing& R, std::vector<RingElement> gens) {
  std::set<RingElement> s = additive_closure(R, gens);
  for (;;) {
    std::vector<RingElement> g(s.begin(), s.end());
    for (const auto& a : s)
      for (const auto& b : s) g.push_back(R.mul(a, b));
    auto t = additive_closure(R, g);
    if (t == s) return s;
    s = std::move(t);
  }
}

std::set<RingElement> as_set(const SubgroupBasis& H) {
  auto e = H.elements();
  return {e.begin(), e.end()};
}

std::vector<FiniteRing> small_rings() {
  std::vector<FiniteRing> rs;
  for (const auto& [name, rec] : examples::named_records()) rs.push_back(parse_ring(rec));
  rs.push_back(free_comm_rank2());
  rs.push_back(null_ring(AdditiveShape(2, {2, 1})));
  rs.push_back(z_mod(3, 2));
  return rs;
}

}  // namespace

TEST(MakeRing, AcceptsWorkedExamples) {
  auto R = parse_ring(examples::kNonAssocFlattening);
  EXPECT_TRUE(R.validated());
  EXPECT_EQ(R.c(0, 0, 1), 5);
  auto Z8 = parse_ring(examples::kZ8);
  EXPECT_EQ(Z8.order(), 8);
}

TEST(MakeRing, RejectsCharacteristicViolation) {
  // shape (2,1), x2^2 = x1: 2(x2 x2) = 0 but 2 x1 != 0
  Table t(8, 0);
  t[(1 * 2 + 1) * 2 + 0] = 1;
  try {
    make_ring(AdditiveShape(2, {2, 1}), t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::CharIncompatible);
    EXPECT_NE(std::string(e.what()).find("c[2][2][1]"), std::string::npos);
  }
}

TEST(MakeRing, RejectsBadDimensionsAndNonAssociative) {
  EXPECT_THROW(
      try { make_ring(AdditiveShape(2, {1, 1}), Table(7, 0)); } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ShapeMismatch);
        throw;
      },
      Error);
  // x1 x1 = x2 and x2 x1 = x1 on F_2^2: (x1 x1) x1 = x1 but x1 (x1 x1) = x1 x2 = 0
  Table t(8, 0);
  t[(0 * 2 + 0) * 2 + 1] = 1;
  t[(1 * 2 + 0) * 2 + 0] = 1;
  try {
    make_ring(AdditiveShape::uniform(2, 2), t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotAssociative);
  }
}

TEST(MakeRing, ShapeValidation) {
  EXPECT_THROW(AdditiveShape(4, {1}), Error);
  EXPECT_THROW(AdditiveShape(2, {1, 2}), Error);
  EXPECT_THROW(AdditiveShape(2, {0}), Error);
  AdditiveShape s(3, {2, 2, 1});
  EXPECT_EQ(s.n(), 5);
  EXPECT_EQ(s.order(), 243);
}

TEST(ElementOps, WorkedProducts) {
  auto R = parse_ring(examples::kNonAssocFlattening);
  RingElement x1{1, 0}, x2{0, 1};
  EXPECT_EQ(R.mul(x1, R.mul(x1, x2)), (RingElement{1, 6}));
  EXPECT_EQ(R.mul(R.mul(x1, x1), x2), (RingElement{1, 6}));
  EXPECT_EQ(R.mul(R.zero(), RingElement{4, 7}), R.zero());
  auto Z8 = parse_ring(examples::kZ8);
  EXPECT_EQ(Z8.mul({3}, {3}), (RingElement{1}));
  EXPECT_EQ(Z8.neg({3}), (RingElement{5}));
  EXPECT_EQ(Z8.scale(3, {5}), (RingElement{7}));
  EXPECT_THROW(Z8.mul({1, 0}, {1}), Error);
}

TEST(ElementOps, ExhaustiveRingAxioms) {
  for (const auto& R : small_rings()) {
    if (R.order() > 81) continue;
    const auto E = R.elements();
    for (const auto& a : E)
      for (const auto& b : E)
        for (const auto& c : E) {
          ASSERT_EQ(R.mul(R.mul(a, b), c), R.mul(a, R.mul(b, c)));
          ASSERT_EQ(R.mul(a, R.add(b, c)), R.add(R.mul(a, b), R.mul(a, c)));
          ASSERT_EQ(R.mul(R.add(a, b), c), R.add(R.mul(a, c), R.mul(b, c)));
        }
  }
}

TEST(ElementOps, SampledAxiomsLargerRing) {
  auto R = free_comm_rank2();
  auto S = direct_sum(R, parse_ring(examples::kF2TruncatedCubic));
  std::mt19937 gen(7);
  auto rnd = [&] {
    RingElement a(S.rank());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = static_cast<Int>(gen() % static_cast<unsigned>(S.shape().modulus(i)));
    return a;
  };
  for (int it = 0; it < 2000; ++it) {
    auto a = rnd(), b = rnd(), c = rnd();
    ASSERT_EQ(S.mul(S.mul(a, b), c), S.mul(a, S.mul(b, c)));
    ASSERT_EQ(S.mul(a, S.add(b, c)), S.add(S.mul(a, b), S.mul(a, c)));
  }
}

TEST(Subgroup, OrderMembershipAndCanonicity) {
  std::mt19937 gen(11);
  for (const auto& R : small_rings()) {
    const auto E = R.elements();
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<RingElement> gens;
      const int k = static_cast<int>(gen() % 3);
      for (int i = 0; i < k; ++i) gens.push_back(E[gen() % E.size()]);
      SubgroupBasis H(R.shape(), gens);
      auto oracle = additive_closure(R, gens);
      EXPECT_EQ(static_cast<std::size_t>(H.order()), oracle.size());
      EXPECT_EQ(as_set(H), oracle);
      for (const auto& x : E) EXPECT_EQ(H.contains(x), oracle.count(x) == 1);
      SubgroupBasis again(R.shape(), H.generators());
      EXPECT_EQ(again, H);
      std::vector<RingElement> all(oracle.begin(), oracle.end());
      EXPECT_EQ(SubgroupBasis(R.shape(), all), H);
      Int prod = 1;
      for (const auto& g : H.generators()) prod *= ipow(R.p(), R.order_exponent(g));
      (void)prod;
    }
  }
}

TEST(PowerIdeal, Examples) {
  auto N = null_ring(AdditiveShape::uniform(2, 3));
  EXPECT_TRUE(power_ideal(N, 2).is_trivial());
  auto R3 = parse_ring(examples::kUnitalXSquared3e);
  for (int k = 1; k <= 5; ++k) EXPECT_TRUE(power_ideal(R3, k).is_whole());
  auto F = free_comm_rank2();
  EXPECT_EQ(power_ideal(F, 2).order(), 8);
  EXPECT_TRUE(power_ideal(F, 3).is_trivial());
  EXPECT_THROW(power_ideal(F, 0), Error);
}

TEST(PowerIdeal, ChainDecreasingAndMultiplicative) {
  for (const auto& R : small_rings()) {
    for (int i = 1; i <= 4; ++i) {
      auto Pi = power_ideal(R, i);
      EXPECT_TRUE(Pi.contains(power_ideal(R, i + 1)));
      for (int j = 1; j <= 3; ++j) EXPECT_TRUE(power_ideal(R, i + j).contains(product_span(R, Pi, power_ideal(R, j))));
    }
  }
}

TEST(Nilpotent, Examples) {
  auto n1 = is_nilpotent(null_ring(AdditiveShape(2, {1})));
  EXPECT_TRUE(n1.nilpotent);
  EXPECT_EQ(n1.index, 2);
  EXPECT_FALSE(is_nilpotent(parse_ring(examples::kZ8)).nilpotent);
  auto f = is_nilpotent(free_comm_rank2());
  EXPECT_TRUE(f.nilpotent);
  EXPECT_EQ(f.index, 3);
}

TEST(SubringGenerated, ExamplesAndOracle) {
  auto Z8 = parse_ring(examples::kZ8);
  EXPECT_TRUE(subring_generated(Z8, {}).is_trivial());
  EXPECT_EQ(as_set(subring_generated(Z8, {{2}})), (std::set<RingElement>{{0}, {2}, {4}, {6}}));
  auto R3 = parse_ring(examples::kUnitalXSquared3e);
  auto S = subring_generated(R3, {{1, 0}});
  EXPECT_EQ(S.order(), 9);
  std::mt19937 gen(3);
  for (const auto& R : small_rings()) {
    const auto E = R.elements();
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<RingElement> gens{E[gen() % E.size()], E[gen() % E.size()]};
      EXPECT_EQ(as_set(subring_generated(R, gens)), ring_closure(R, gens));
    }
  }
}

TEST(Ideal, GeneratedAndQuotient) {
  auto R3 = parse_ring(examples::kUnitalXSquared3e);
  auto I = ideal_generated(R3, {{0, 1}});
  EXPECT_EQ(I.order(), 27);
  EXPECT_TRUE(I.contains(RingElement{3, 0}));
  EXPECT_TRUE(is_ideal(R3, I));

  auto Z8 = parse_ring(examples::kZ8);
  auto Q = quotient_ring(Z8, span(Z8, {{4}}));
  EXPECT_EQ(Q.ring, make_ring(AdditiveShape(2, {2}), {1}));
  EXPECT_EQ(Q.project({5}), (RingElement{1}));

  auto F = free_comm_rank2();
  EXPECT_THROW(quotient_ring(F, span(F, {{1, 0, 0, 0, 0}})), Error);
}

TEST(Ideal, QuotientOrderAndHomomorphism) {
  for (const auto& R : small_rings()) {
    const auto E = R.elements();
    for (std::size_t s = 0; s < E.size(); s += std::max<std::size_t>(1, E.size() / 6)) {
      auto I = ideal_generated(R, {E[s]});
      auto Q = quotient_ring(R, I);
      EXPECT_EQ(Q.ring.order() * I.order(), R.order());
      EXPECT_TRUE(Q.ring.validated());
      for (const auto& a : E) {
        if (I.contains(a)) {
          EXPECT_TRUE(Q.ring.is_zero(Q.project(a)));
        }
        for (std::size_t t = 0; t < E.size(); t += 3) {
          const auto& b = E[t];
          EXPECT_EQ(Q.project(R.mul(a, b)), Q.ring.mul(Q.project(a), Q.project(b)));
          EXPECT_EQ(Q.project(R.add(a, b)), Q.ring.add(Q.project(a), Q.project(b)));
        }
      }
      for (std::size_t t = 0; t < Q.lifts.size(); ++t) EXPECT_EQ(Q.project(Q.lifts[t]), Q.ring.basis(t));
    }
  }
}

TEST(DirectSum, ExampleAndProperties) {
  auto F2 = make_ring(AdditiveShape(2, {1}), {1});
  auto N2 = null_ring(AdditiveShape(2, {1}));
  auto S = direct_sum(F2, N2);
  EXPECT_EQ(S, parse_ring(examples::kIdemNeither));
  EXPECT_THROW(direct_sum(F2, make_ring(AdditiveShape(3, {1}), {1})), Error);
  auto rs = small_rings();
  for (const auto& A : rs)
    for (const auto& B : rs) {
      if (A.p() != B.p() || A.order() * B.order() > 600) continue;
      auto D = direct_sum(A, B);
      EXPECT_EQ(D.order(), A.order() * B.order());
      EXPECT_EQ(is_nilpotent(D).nilpotent, is_nilpotent(A).nilpotent && is_nilpotent(B).nilpotent);
      EXPECT_EQ(find_identity(D).has_value(), find_identity(A).has_value() && find_identity(B).has_value());
    }
  auto D = direct_sum_with_positions(N2, parse_ring(examples::kZ8));
  EXPECT_EQ(D.ring.shape().exponents(), (std::vector<int>{3, 1}));
  EXPECT_EQ(D.position_of_left[0], 1u);
}

TEST(Identity, Examples) {
  auto R2 = parse_ring(examples::kNonAssocFlattening);
  EXPECT_EQ(find_identity(R2), (RingElement{7, 1}));
  EXPECT_FALSE(find_identity(null_ring(AdditiveShape(3, {1, 1}))).has_value());
  EXPECT_EQ(find_identity(parse_ring(examples::kZ8)), (RingElement{1}));
  for (const auto& R : small_rings()) {
    // oracle: exhaustive search for two-sided identities
    std::vector<RingElement> ids;
    for (const auto& e : R.elements()) {
      bool ok = true;
      for (std::size_t i = 0; i < R.rank() && ok; ++i) ok = R.mul(e, R.basis(i)) == R.basis(i) && R.mul(R.basis(i), e) == R.basis(i);
      if (ok) ids.push_back(e);
    }
    ASSERT_LE(ids.size(), 1u);
    EXPECT_EQ(find_identity(R).has_value(), ids.size() == 1);
    if (!ids.empty()) {
      EXPECT_EQ(*find_identity(R), ids[0]);
    }
  }
}

TEST(UnitGroup, Examples) {
  auto u8 = unit_group(parse_ring(examples::kZ8));
  EXPECT_EQ(u8.order, 4);
  EXPECT_TRUE(u8.is_abelian);
  EXPECT_EQ(u8.abelian_invariants, (std::vector<Int>{2, 2}));
  EXPECT_EQ(u8.exponent, 2);
  auto uc = unit_group(parse_ring(examples::kF2TruncatedCubic));
  EXPECT_EQ(uc.abelian_invariants, (std::vector<Int>{4}));
  auto u3 = unit_group(make_ring(AdditiveShape(3, {1}), {1}));
  EXPECT_EQ(u3.abelian_invariants, (std::vector<Int>{2}));
  EXPECT_THROW(unit_group(null_ring(AdditiveShape(2, {1}))), Error);
  // Z/9 x Z/4-like mixture: units of Z/9 are cyclic of order 6
  EXPECT_EQ(unit_group(z_mod(3, 2)).abelian_invariants, (std::vector<Int>{6}));
  auto uq = unit_group(parse_ring(examples::kF3TruncatedQuartic));
  Int prod = 1;
  for (Int d : uq.abelian_invariants) prod *= d;
  EXPECT_EQ(prod, uq.order);
  EXPECT_EQ(uq.order, 54);
}

TEST(Rebase, ChangesPresentation) {
  auto R2 = parse_ring(examples::kNonAssocFlattening);
  RingElement e{7, 1};
  RingElement x = R2.add(R2.scale(4, e), RingElement{1, 0});
  EXPECT_EQ(rebase(R2, {e, x}), parse_ring(examples::kUnitalXSquared3e));
  EXPECT_THROW(rebase(R2, {e, R2.scale(2, e)}), Error);
  EXPECT_THROW(rebase(R2, {e, RingElement{3, 0}}), Error);
}

TEST(SubringPresentationTest, EmbedsHomomorphically) {
  auto R3 = parse_ring(examples::kUnitalXSquared3e);
  auto S = subring_generated(R3, {{0, 3}});
  auto P = subring_as_ring(R3, S);
  EXPECT_EQ(P.ring.order(), S.order());
  for (const auto& a : P.ring.elements())
    for (const auto& b : P.ring.elements()) EXPECT_EQ(P.embed(P.ring.mul(a, b)), R3.mul(P.embed(a), P.embed(b)));
}

TEST(Format, RoundTripAndErrors) {
  for (const auto& R : small_rings()) EXPECT_EQ(parse_ring(format_ring(R)), R);
  EXPECT_THROW(parse_ring("p=2;shape=1\nc[1][1]=2\n"), Error);
  EXPECT_THROW(parse_ring("p=2;shape=1,1\nc[1][1]=1,0\n"), Error);
  EXPECT_THROW(parse_ring("p=2;shape=1\nc[1][2]=0\n"), Error);
  try {
    parse_ring("p=2;shape=1\nc[1][1]=x\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_EQ(parse_element("(1, 2,3)"), (RingElement{1, 2, 3}));
}
