#include <gtest/gtest.h>

#include <random>
#include <set>

#include "finring/examples_data.hpp"
#include "finring/nilpotent.hpp"

using namespace finring;

namespace {

// Random rings whose constants vanish unless l > max(i, j); such rings are
// nilpotent. Only the associative draws are kept.
std::vector<FiniteRing> random_nilpotent(Int p, const std::vector<int>& exps, std::size_t want, bool commutative, unsigned seed) {
  std::mt19937 rng(seed);
  const AdditiveShape sh(p, exps);
  const std::size_t m = sh.rank();
  std::vector<FiniteRing> out;
  for (int attempt = 0; attempt < 4000 && out.size() < want; ++attempt) {
    Table t(m * m * m, 0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = commutative ? i : 0; j < m; ++j)
        for (std::size_t l = std::max(i, j) + 1; l < m; ++l) {
          if (rng() % 2) continue;
          const int need = std::max(0, sh.exponent(l) - std::min(sh.exponent(i), sh.exponent(j)));
          const Int v = floor_mod(static_cast<Int>(rng() % 97) * ipow(p, need), sh.modulus(l));
          t[(i * m + j) * m + l] = v;
          if (commutative) t[(j * m + i) * m + l] = v;
        }
    try {
      out.push_back(make_ring(sh, t));
    } catch (const Error&) {
    }
  }
  return out;
}

FiniteRing chain_algebra(Int p) {
  // x, x^2, x^3 with x^4 = 0
  std::vector<RingElement> prods(9, RingElement(3, 0));
  prods[0 * 3 + 0][1] = 1;
  prods[0 * 3 + 1][2] = 1;
  prods[1 * 3 + 0][2] = 1;
  return FiniteRing::from_products(AdditiveShape::uniform(p, 3), prods);
}

// Oracle: elementwise span closure.
std::set<RingElement> closure(const FiniteRing& A, const std::vector<RingElement>& gens) {
  std::set<RingElement> s{A.zero()};
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<RingElement> cur(s.begin(), s.end());
    for (const auto& a : cur)
      for (const auto& g : gens) grew |= s.insert(A.add(a, g)).second;
  }
  return s;
}

std::set<RingElement> products(const FiniteRing& A, const std::set<RingElement>& X, const std::set<RingElement>& Y) {
  std::vector<RingElement> g;
  for (const auto& a : X)
    for (const auto& b : Y) g.push_back(A.mul(a, b));
  return closure(A, g);
}

// Oracle: Sims dimension by trying every k-tuple of elements.
int brute_sims(const FiniteRing& A) {
  const auto elems = A.elements();
  const std::set<RingElement> all(elems.begin(), elems.end());
  const auto A2 = products(A, all, all);
  const std::vector<RingElement> a2(A2.begin(), A2.end());
  for (int k = 0; k <= static_cast<int>(A.rank()); ++k) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
    for (;;) {
      std::vector<RingElement> gens = a2;
      for (auto i : idx) gens.push_back(elems[i]);
      auto S = closure(A, gens);
      if (products(A, S, S) == A2) return k;
      std::size_t z = 0;
      while (z < idx.size() && ++idx[z] == elems.size()) idx[z++] = 0;
      if (z == idx.size()) break;
    }
  }
  return -1;
}

const std::vector<FiniteRing>& cube_zero_corpus() {
  static const std::vector<FiniteRing> out = [] {
    std::vector<FiniteRing> v;
    for (Int p : {2, 3})
      for (int r = 1; r <= 3; ++r)
        for (bool comm : {true, false})
          for (int n = r; n <= 5; ++n) {
            if (p == 3 && (n > 4 || r > 2)) continue;
            if (!comm && r == 3 && n > 4) continue;
            for (auto& A : lower_bound_family(p, r, n, comm).classes) v.push_back(std::move(A));
          }
    return v;
  }();
  return out;
}

}  // namespace

TEST(ModP, Examples) {
  auto Z8 = mod_p_algebra(parse_ring(examples::kZ8));
  EXPECT_EQ(Z8.rank(), 1u);
  EXPECT_EQ(Z8.c(0, 0, 0), 1);
  auto A = mod_p_algebra(parse_ring(examples::kNonAssocFlattening));
  EXPECT_EQ(A.shape(), AdditiveShape::uniform(3, 2));
  EXPECT_EQ(A.mul(A.basis(0), A.basis(0)), (RingElement{0, 2}));
  EXPECT_EQ(A.mul(A.basis(1), A.basis(1)), (RingElement{2, 0}));
  EXPECT_EQ(A.mul(A.basis(0), A.basis(1)), (RingElement{1, 1}));
  auto N = mod_p_algebra(null_ring(AdditiveShape(5, {1, 1})));
  EXPECT_TRUE(N.is_null());
  EXPECT_EQ(N.rank(), 2u);
}

TEST(FiltrationProfile, Examples) {
  auto f = filtration_profile(null_ring(AdditiveShape::uniform(2, 4)));
  EXPECT_EQ(std::vector<int>({f.w, f.r, f.s, f.t, f.u, f.m}), std::vector<int>({4, 4, 0, 0, 0, 2}));
  auto g = filtration_profile(free_cube_zero(2, 2, true));
  EXPECT_EQ(std::vector<int>({g.w, g.r, g.s, g.t, g.u, g.m}), std::vector<int>({5, 2, 2, 3, 0, 3}));
  auto h = filtration_profile(chain_algebra(3));
  EXPECT_EQ(std::vector<int>({h.w, h.r, h.s, h.t, h.u, h.m}), std::vector<int>({3, 1, 1, 1, 1, 4}));
  EXPECT_EQ(h.u_h, (std::vector<int>{1, 1}));
  EXPECT_EQ(h.d, (std::vector<int>{3, 2, 1}));
  try {
    filtration_profile(mod_p_algebra(parse_ring(examples::kNonAssocFlattening)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotNilpotent);
  }
}

TEST(FiltrationProfile, DimensionsMatchElementSets) {
  const auto sample = random_nilpotent(2, {1, 1, 1, 1, 1}, 12, false, 7);
  ASSERT_EQ(sample.size(), 12u);
  for (const auto& R : sample) {
    auto f = filtration_profile(R);
    const auto elems = R.elements();
    std::set<RingElement> P(elems.begin(), elems.end());
    const std::set<RingElement> all = P;
    std::vector<int> dims;
    while (P.size() > 1) {
      int e = 0;
      for (std::size_t x = P.size(); x > 1; x /= 2) ++e;
      dims.push_back(e);
      P = products(R, P, all);
    }
    EXPECT_EQ(f.d, dims);
    EXPECT_TRUE(f.invariants_hold());
  }
}

TEST(Sims, Examples) {
  EXPECT_EQ(sims_dimension(null_ring(AdditiveShape::uniform(3, 3))), 0);
  std::vector<RingElement> prods(4, RingElement(2, 0));
  prods[0][1] = 1;
  EXPECT_EQ(sims_dimension(FiniteRing::from_products(AdditiveShape::uniform(2, 2), prods)), 1);
  EXPECT_EQ(sims_dimension(free_cube_zero(2, 2, true)), 2);
  EXPECT_THROW(sims_dimension(parse_ring(examples::kZ8)), Error);
}

TEST(Sims, MatchesTupleSearch) {
  auto corpus = random_nilpotent(2, {1, 1, 1, 1, 1}, 10, false, 11);
  for (auto& A : random_nilpotent(3, {1, 1, 1, 1}, 6, true, 12)) corpus.push_back(A);
  for (const auto& A : corpus) EXPECT_EQ(sims_dimension(A), brute_sims(A)) << format_ring(A);
}

TEST(StandardBasis, Examples) {
  auto F = free_cube_zero(2, 2, true);
  auto b = standard_basis(F, true);
  EXPECT_EQ(b.q, (std::vector<int>{1, 3}));
  EXPECT_TRUE(standard_basis_valid(F, b));
  auto N = standard_basis(null_ring(AdditiveShape::uniform(2, 3)), false);
  EXPECT_EQ(N.xs.size(), 3u);
  EXPECT_TRUE(N.ys.empty());
  try {
    standard_basis(mod_p_algebra(parse_ring(examples::kNonAssocFlattening)), false);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotNilpotent);
  }
  try {
    standard_basis(chain_algebra(2), false);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotCubeZero);
  }
}

TEST(StandardBasis, InvariantsOnCubeZeroAlgebras) {
  const auto corpus = cube_zero_corpus();
  EXPECT_GT(corpus.size(), 50u);
  for (const auto& A : corpus) {
    auto b = standard_basis(A, false);
    EXPECT_TRUE(standard_basis_valid(A, b)) << format_ring(A);
    EXPECT_LE(b.s, b.t + 1);
    if (A.is_commutative()) {
      auto c = standard_basis(A, true);
      EXPECT_TRUE(standard_basis_valid(A, c)) << format_ring(A);
    }
  }
}

TEST(StandardBasis, SubalgebraSquareInequality) {
  // dim S^2 - dim S/A^2 <= t - s + 1 for every subalgebra S containing A^2
  for (const auto& A : cube_zero_corpus()) {
    auto f = filtration_profile(A);
    const auto elems = A.elements();
    const std::set<RingElement> all(elems.begin(), elems.end());
    const auto A2 = products(A, all, all);
    std::vector<RingElement> reps;
    {
      std::set<RingElement> cur = A2;
      for (std::size_t i = 0; i < A.rank(); ++i)
        if (!cur.count(A.basis(i))) {
          reps.push_back(A.basis(i));
          std::vector<RingElement> g(cur.begin(), cur.end());
          g.push_back(A.basis(i));
          cur = closure(A, g);
        }
    }
    const std::size_t r = reps.size();
    // every subset of combinations: enumerate subspaces through spans of coefficient vectors
    std::set<std::set<RingElement>> seen;
    const Int total = ipow(A.p(), static_cast<int>(r));
    std::vector<std::vector<RingElement>> frontier{{}};
    for (std::size_t k = 0; k <= r; ++k) {
      std::vector<std::vector<RingElement>> next;
      for (const auto& gens : frontier) {
        std::vector<RingElement> g(A2.begin(), A2.end());
        g.insert(g.end(), gens.begin(), gens.end());
        auto S = closure(A, g);
        if (!seen.insert(S).second) continue;
        auto S2 = products(A, S, S);
        int dimS2 = 0, dimS = 0;
        for (std::size_t x = S2.size(); x > 1; x /= static_cast<std::size_t>(A.p())) ++dimS2;
        for (std::size_t x = S.size() / A2.size(); x > 1; x /= static_cast<std::size_t>(A.p())) ++dimS;
        EXPECT_LE(dimS2 - dimS, f.t - f.s + 1);
        for (Int code = 1; code < total; ++code) {
          RingElement v = A.zero();
          Int c = code;
          for (std::size_t t = 0; t < r; ++t, c /= A.p()) v = A.add(v, A.scale(c % A.p(), reps[t]));
          if (S.count(v)) continue;
          auto h = gens;
          h.push_back(v);
          next.push_back(h);
        }
      }
      frontier = std::move(next);
    }
  }
}

TEST(MonomialBasis, PowersOfGeneratedSubalgebra) {
  std::vector<FiniteRing> corpus{chain_algebra(2), chain_algebra(3)};
  for (auto& A : random_nilpotent(2, {1, 1, 1, 1, 1}, 15, false, 3)) corpus.push_back(A);
  for (auto& A : random_nilpotent(3, {1, 1, 1, 1}, 10, true, 4)) corpus.push_back(A);
  for (const auto& A : corpus) {
    auto mb = monomial_basis(A, false);
    std::vector<RingElement> first(mb.xs.begin(), mb.xs.begin() + mb.profile.s);
    EXPECT_TRUE(generated_powers_match(A, first)) << format_ring(A);
    // each e_j multiplies out from its word
    for (std::size_t j = 0; j < mb.es.size(); ++j) {
      RingElement e = mb.xs[mb.words[j].back()];
      for (std::size_t k = mb.words[j].size() - 1; k-- > 0;) e = A.mul(mb.xs[mb.words[j][k]], e);
      EXPECT_EQ(e, mb.es[j]);
      EXPECT_GE(mb.words[j].size(), 2u);
    }
  }
}

TEST(Determination, NoncommutativeReconstruction) {
  std::vector<FiniteRing> corpus{chain_algebra(2)};
  for (auto& R : random_nilpotent(2, {1, 1, 1, 1, 1}, 15, false, 21)) corpus.push_back(R);
  for (auto& R : random_nilpotent(2, {2, 2, 1, 1}, 15, false, 22)) corpus.push_back(R);
  for (auto& R : random_nilpotent(3, {2, 1, 1}, 10, false, 23)) corpus.push_back(R);
  corpus.push_back(make_ring(AdditiveShape(2, {3}), {2}));
  ASSERT_GT(corpus.size(), 30u);
  for (const auto& R : corpus) {
    auto d = determination_data(R, false);
    EXPECT_EQ(reconstruct_noncommutative(d), R) << format_ring(R);
  }
}

TEST(Determination, CommutativeReconstruction) {
  std::vector<FiniteRing> corpus{chain_algebra(3), free_cube_zero(2, 2, true)};
  for (auto& R : random_nilpotent(2, {1, 1, 1, 1, 1}, 15, true, 31)) corpus.push_back(R);
  for (auto& R : random_nilpotent(2, {2, 2, 1, 1}, 15, true, 32)) corpus.push_back(R);
  for (auto& R : random_nilpotent(2, {3, 2, 1}, 10, true, 33)) corpus.push_back(R);
  for (auto& R : random_nilpotent(3, {2, 2, 1}, 10, true, 34)) corpus.push_back(R);
  corpus.push_back(make_ring(AdditiveShape(2, {3}), {2}));
  ASSERT_GT(corpus.size(), 30u);
  std::size_t with_unknowns = 0;
  for (const auto& R : corpus) {
    auto d = determination_data(R, true);
    std::size_t full = d.s * d.es.size();
    if (d.xe.size() < full) ++with_unknowns;
    EXPECT_EQ(reconstruct_commutative(d), R) << format_ring(R);
  }
  EXPECT_GT(with_unknowns, 0u);
}

TEST(FreeCubeZero, Dimensions) {
  EXPECT_EQ(free_cube_zero(2, 1, true).rank(), 2u);
  EXPECT_EQ(free_cube_zero(2, 2, false).rank(), 6u);
  EXPECT_EQ(free_cube_zero(3, 2, true).rank(), 5u);
  EXPECT_EQ(free_cube_zero(2, 3, true).rank(), 9u);
  EXPECT_TRUE(free_cube_zero(2, 2, true).is_commutative());
  EXPECT_FALSE(free_cube_zero(2, 2, false).is_commutative());
}

TEST(LowerBoundFamily, Examples) {
  auto fam = lower_bound_family(2, 2, 4, true);
  EXPECT_EQ(fam.subspace_count, 7u);
  for (std::size_t i = 0; i < fam.classes.size(); ++i) {
    EXPECT_EQ(fam.classes[i].rank(), 4u);
    EXPECT_EQ(standard_basis(fam.classes[i], true).r, 2);
    for (std::size_t j = 0; j < i; ++j) EXPECT_FALSE(is_isomorphic(fam.classes[i], fam.classes[j]));
  }
  auto whole = lower_bound_family(2, 2, 5, true);
  ASSERT_EQ(whole.classes.size(), 1u);
  EXPECT_TRUE(is_isomorphic(whole.classes[0], free_cube_zero(2, 2, true)));
  EXPECT_TRUE(lower_bound_family(2, 2, 6, true).classes.empty());
  EXPECT_TRUE(lower_bound_family(2, 2, 1, true).classes.empty());
}
