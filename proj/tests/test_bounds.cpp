#include <gtest/gtest.h>

#include <cmath>

#include "finring/bounds.hpp"
#include "finring/census.hpp"

using namespace finring;

namespace {

BigInt big_pow(Int p, int e) { return boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(e)); }

bool expect_code(Errc code, const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace

TEST(Gaussian, Examples) {
  EXPECT_EQ(gaussian_binomial(2, 1, 2).value, 3);
  EXPECT_EQ(gaussian_binomial(3, 1, 3).value, 13);
  for (int t = 0; t <= 6; ++t) EXPECT_EQ(gaussian_binomial(t, t, 5).value, 1);
  EXPECT_EQ(gaussian_binomial(4, 0, 2).value, 1);
  EXPECT_TRUE(expect_code(Errc::ParameterOutOfRange, [] { gaussian_binomial(2, 3, 2); }));
  EXPECT_TRUE(expect_code(Errc::ParameterOutOfRange, [] { gaussian_binomial(3, 1, 4); }));
}

TEST(Gaussian, CountsSubspaces) {
  for (Int p : {2, 3, 5})
    for (int t = 0; t <= (p == 2 ? 6 : 4); ++t)
      for (int d = 0; d <= t; ++d) {
        BigInt count = 0;
        for_each_subspace(p, static_cast<std::size_t>(t), static_cast<std::size_t>(d), [&](const Mat&) {
          ++count;
          return true;
        });
        const auto g = gaussian_binomial(t, d, p);
        EXPECT_EQ(g.value, count) << p << " " << t << " " << d;
        EXPECT_TRUE(g.factor_inequality_holds);
        EXPECT_LE(g.value, big_pow(p, d * (t - d + 1)));
      }
}

TEST(Gaussian, LargeArgumentsStayExact) {
  for (Int p : {2, 3, 7})
    for (int t = 8; t <= 40; t += 8)
      for (int d = 1; d < t; d += 3) {
        const auto g = gaussian_binomial(t, d, p);
        EXPECT_TRUE(g.factor_inequality_holds);
        EXPECT_LE(g.value, big_pow(p, d * (t - d + 1)));
        // symmetry and Pascal: [t,d] = [t-1,d-1] + p^d [t-1,d]
        EXPECT_EQ(g.value, gaussian_binomial(t, t - d, p).value);
        EXPECT_EQ(g.value, gaussian_binomial(t - 1, d - 1, p).value + big_pow(p, d) * gaussian_binomial(t - 1, d, p).value);
      }
}

TEST(Alpha, Examples) {
  const auto small = alpha_upper({4, 1, 2, 2, false});
  EXPECT_EQ(small.value, 32);
  EXPECT_EQ(small.branch, AlphaBranch::SmallS);
  const auto large = alpha_upper({9, 8, 12, 2, false});
  EXPECT_EQ(large.branch, AlphaBranch::LargeS);
  EXPECT_EQ(large.f, 3);
  EXPECT_EQ(large.g, 3);
  EXPECT_EQ(large.d, 11);
  EXPECT_EQ(large.value, 957);
  EXPECT_EQ(alpha_upper({4, 1, 2, 2, true}).value, 20);
}

TEST(Alpha, BranchBoundary) {
  // s > 2 sqrt(r) + 1: r = 4 needs s > 5, r = 9 needs s > 7
  EXPECT_EQ(alpha_upper({9, 7, 12, 2, false}).branch, AlphaBranch::SmallS);
  EXPECT_EQ(alpha_upper({9, 8, 12, 2, false}).branch, AlphaBranch::LargeS);
  EXPECT_EQ(alpha_upper({10, 7, 12, 2, false}).branch, AlphaBranch::SmallS);  // 2 sqrt 10 + 1 = 7.32
  for (int r = 0; r <= 30; ++r)
    for (int s = 0; s <= r; ++s) {
      const bool large = s > 2 * std::sqrt(static_cast<double>(r)) + 1;
      EXPECT_EQ(alpha_upper({r, s, s + 3, 2, false}).branch == AlphaBranch::LargeS, large) << r << " " << s;
    }
}

TEST(Alpha, InvalidDims) {
  EXPECT_TRUE(expect_code(Errc::InvalidDims, [] { alpha_upper({4, 4, 2, 2, false}); }));  // s > t + 1
  EXPECT_TRUE(expect_code(Errc::InvalidDims, [] { alpha_upper({2, 3, 5, 2, false}); }));  // s > r
  EXPECT_TRUE(expect_code(Errc::InvalidDims, [] { bound_report(5, 2, 1, 4, 5, false); }));  // r + t > w
}

TEST(Alpha, ReportComponentsNonNegative) {
  for (int n = 1; n <= 12; ++n)
    for (int r = 1; r <= n; ++r)
      for (int t = 0; r + t <= n; ++t)
        for (int s = 0; s <= std::min(r, t + 1); ++s)
          for (int w = r + t; w <= n; ++w)
            for (bool comm : {false, true}) {
              const auto b = bound_report(n, r, s, t, w, comm);
              EXPECT_GE(b.alpha, 0);
              EXPECT_GE(b.beta, -1e-9);
              EXPECT_GE(b.gamma, -1e-9);
              EXPECT_NEAR(b.delta, static_cast<double>(b.alpha) + b.beta + b.gamma, 1e-9);
            }
}

TEST(FBounds, Examples) {
  EXPECT_TRUE(commutative_f_bounds(5, 1).zero);
  const auto b = commutative_f_bounds(3, 2, 2);
  EXPECT_FALSE(b.zero);
  EXPECT_EQ(b.lower, -2);
  EXPECT_EQ(b.upper, 3);
  for (int r = 1; r <= 6; ++r) {
    const auto e = commutative_f_bounds(r, r);
    EXPECT_EQ(e.lower, -r * r);
    EXPECT_EQ(e.upper, 0);
  }
  EXPECT_TRUE(expect_code(Errc::ParameterOutOfRange, [] { commutative_f_bounds(2, 3); }));
}

TEST(FBounds, CommutativeCubeZeroCountsWithinBounds) {
  for (Int p : {2, 3})
    for (int n = 1; n <= 5; ++n) {
      std::map<int, BigInt> count;
      for (const auto& c : cube_zero_classes(p, n, true)) ++count[c.profile.r];
      for (int r = 0; r <= n; ++r) {
        const auto b = commutative_f_bounds(n, r, p);
        const BigInt f = count.count(r) ? count[r] : BigInt(0);
        if (b.zero) {
          EXPECT_EQ(f, 0) << p << " " << n << " " << r;
          continue;
        }
        if (r == 0) continue;  // dim R/R^2 = 0 forces R = 0
        // p^lower <= f <= p^upper, with negative exponents compared as p^-e * f >= 1
        if (b.lower >= 0) {
          EXPECT_LE(big_pow(p, static_cast<int>(b.lower)), f) << p << " " << n << " " << r;
        } else {
          EXPECT_GE(f * big_pow(p, static_cast<int>(-b.lower)), 1) << p << " " << n << " " << r;
        }
        if (b.upper >= 0) {
          EXPECT_LE(f, big_pow(p, static_cast<int>(b.upper))) << p << " " << n << " " << r;
        }
      }
    }
}

TEST(Alpha, DominatesCubeZeroCounts) {
  for (bool comm : {false, true})
    for (int n = 1; n <= 5; ++n) {
      std::map<std::tuple<int, int, int>, BigInt> count;
      for (const auto& c : cube_zero_classes(2, n, comm)) ++count[{c.profile.r, c.profile.s, c.profile.t}];
      for (const auto& [rst, k] : count) {
        const auto [r, s, t] = rst;
        const auto a = alpha_upper({r, s, t, 2, comm});
        EXPECT_LE(k, big_pow(2, static_cast<int>(a.value))) << "n=" << n << " r=" << r << " s=" << s << " t=" << t;
      }
    }
}

TEST(Objective, Names) {
  for (auto v : {ObjectiveVariant::NCLow, ObjectiveVariant::NCHigh, ObjectiveVariant::CLow, ObjectiveVariant::CHigh})
    EXPECT_EQ(parse_objective_variant(to_string(v)), v);
  EXPECT_EQ(to_string(ObjectiveVariant::NCHigh), "NC-high");
  EXPECT_TRUE(expect_code(Errc::ParseError, [] { parse_objective_variant("NC-mid"); }));
}

TEST(Objective, MaximaAreCertified) {
  const std::vector<std::pair<ObjectiveVariant, double>> cases{{ObjectiveVariant::NCLow, 18.0 / 125},
                                                               {ObjectiveVariant::NCHigh, 4.0 / 27},
                                                               {ObjectiveVariant::CLow, 9.0 / 125},
                                                               {ObjectiveVariant::CHigh, 2.0 / 27}};
  for (const auto& [v, want] : cases) {
    const auto m = delta_objective_max(v);
    EXPECT_NEAR(m.value, want, 1e-6) << to_string(v);
    EXPECT_TRUE(m.certified) << to_string(v);
    EXPECT_LE(m.certified_upper - m.value, 1e-6) << to_string(v);
    EXPECT_GE(m.certified_upper, want - 1e-9) << to_string(v);
    EXPECT_NEAR(detail::eval(v, m.argmax), m.value, 1e-12);
    for (double c : m.argmax) {
      EXPECT_GE(c, -1e-12);
      EXPECT_LE(c, 1 + 1e-12);
    }
  }
}

TEST(Objective, Deterministic) {
  const auto a = delta_objective_max(ObjectiveVariant::CLow), b = delta_objective_max(ObjectiveVariant::CLow);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.argmax, b.argmax);
}

TEST(Discrete, SmallestCase) {
  const auto d = discrete_delta_max(1, false);
  EXPECT_EQ(d.r, 1);
  EXPECT_EQ(d.w, 1);
  EXPECT_LE(d.delta, 1.0);
  EXPECT_TRUE(expect_code(Errc::ParameterOutOfRange, [] { discrete_delta_max(0, true); }));
}

TEST(Discrete, MatchesExhaustiveMaximum) {
  for (bool comm : {false, true})
    for (int n = 2; n <= 14; ++n) {
      double best = -1;
      for (int r = 1; r <= n; ++r)
        for (int t = 0; r + t <= n; ++t)
          for (int s = 0; s <= std::min(r, t + 1); ++s)
            for (int w = comm ? n : r + t; w <= n; ++w) {
              if (!comm && w == n && w == r + t) continue;
              best = std::max(best, bound_report(n, r, s, t, w, comm).delta);
            }
      const auto d = discrete_delta_max(n, comm);
      EXPECT_EQ(d.delta, best);
      EXPECT_EQ(bound_report(n, d.r, d.s, d.t, d.w, comm).delta, d.delta);
    }
}

TEST(Discrete, TrendDecreasesTowardLimit) {
  for (bool comm : {false, true}) {
    const double a = discrete_delta_max(30, comm).normalized, b = discrete_delta_max(60, comm).normalized,
                 c = discrete_delta_max(120, comm).normalized;
    EXPECT_GT(a, b);
    EXPECT_GT(b, c);
    const double limit = comm ? 2.0 / 27 : 4.0 / 27;
    EXPECT_LT(std::abs(c - limit), std::abs(a - limit));
  }
}

// The normalised discrete maxima are required to lie strictly between the
// low-region constant and the limit.
TEST(Discrete, NormalizedBetweenLowConstantAndLimit) {
  for (bool comm : {false, true}) {
    const double low = comm ? 9.0 / 125 : 18.0 / 125, limit = comm ? 2.0 / 27 : 4.0 / 27;
    for (int n : {30, 60, 120}) {
      const double v = discrete_delta_max(n, comm).normalized;
      EXPECT_GT(v, low) << "n=" << n << " comm=" << comm;
      EXPECT_LT(v, limit) << "n=" << n << " comm=" << comm;
    }
  }
}
