#pragma once

// Counting quantities from the upper-bound arguments: subspace counts, the
// exponent bounds for cube-zero algebras with a given profile, the
// normalised cubic objectives and their maxima, and the discrete maxima
// they approximate.

#include <algorithm>
#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "finring/error.hpp"
#include "finring/zmod.hpp"

namespace finring {

using BigInt = boost::multiprecision::cpp_int;

struct GaussianBinomial {
  BigInt value;
  bool factor_inequality_holds = true;  // (p^t - p^i)/(p^d - p^i) <= p^{t-d+1} for all i < d
};

/// Number of d-dimensional subspaces of F_p^t.
inline GaussianBinomial gaussian_binomial(int t, int d, Int p) {
  if (d < 0 || t < 0 || d > t || !is_prime(p)) throw Error(Errc::ParameterOutOfRange, "gaussian_binomial needs 0 <= d <= t, p prime");
  GaussianBinomial g;
  BigInt num = 1, den = 1;
  const BigInt P = p;
  for (int i = 0; i < d; ++i) {
    const BigInt a = boost::multiprecision::pow(P, static_cast<unsigned>(t)) - boost::multiprecision::pow(P, static_cast<unsigned>(i));
    const BigInt b = boost::multiprecision::pow(P, static_cast<unsigned>(d)) - boost::multiprecision::pow(P, static_cast<unsigned>(i));
    num *= a;
    den *= b;
    if (a > b * boost::multiprecision::pow(P, static_cast<unsigned>(t - d + 1))) g.factor_inequality_holds = false;
  }
  g.value = num / den;
  return g;
}

// ------------------------------------------------------------ alpha bounds

struct ProofBoundInput {
  int r = 0, s = 0, t = 0;
  Int p = 2;
  bool commutative = false;
};

enum class AlphaBranch { SmallS, LargeS };

struct AlphaBound {
  Int value = 0;
  AlphaBranch branch = AlphaBranch::SmallS;
  int f = 0, g = 0, d = 0;  // large-s parameters
};

/// Exponent bound for the number of cube-zero algebras with dim R/R^2 = r,
/// Sims dimension s and dim R^2 = t: r^2 t (commutative: r(r+1)t/2) when
/// s <= 2 sqrt(r) + 1, else C(g,2) d (t-d+1) + r^2 d (commutative:
/// r(r+1)d/2) with f = floor(sqrt r), g = ceil(r/f), d = 2f + t - s + 1.
inline AlphaBound alpha_upper(const ProofBoundInput& in) {
  const auto [r, s, t, p, comm] = in;
  (void)p;
  if (r < 0 || s < 0 || t < 0 || s > t + 1 || s > r)
    throw Error(Errc::InvalidDims, "need 0 <= s <= min(r, t+1); got r=" + std::to_string(r) + " s=" + std::to_string(s) +
                                       " t=" + std::to_string(t));
  const Int products = comm ? Int(r) * (r + 1) / 2 : Int(r) * r;
  AlphaBound a;
  // s > 2 sqrt(r) + 1  <=>  s - 1 > 0 and (s-1)^2 > 4r
  if (s - 1 <= 0 || Int(s - 1) * (s - 1) <= 4 * Int(r)) {
    a.value = products * t;
    return a;
  }
  a.branch = AlphaBranch::LargeS;
  a.f = static_cast<int>(std::sqrt(static_cast<double>(r)));
  while (Int(a.f + 1) * (a.f + 1) <= r) ++a.f;
  while (Int(a.f) * a.f > r) --a.f;
  a.g = (r + a.f - 1) / a.f;
  a.d = 2 * a.f + t - s + 1;
  a.value = Int(a.g) * (a.g - 1) / 2 * a.d * (t - a.d + 1) + products * a.d;
  return a;
}

/// The exponents of the upper-bound count for a nilpotent ring of order p^n
/// with reduced profile (r, s, t, w): alpha for the cube-zero quotient,
/// beta for the remaining products mod p, gamma for their lifts.
struct BoundReport {
  Int alpha = 0;
  double beta = 0, gamma = 0, delta = 0;
  AlphaBranch branch = AlphaBranch::SmallS;
};

inline BoundReport bound_report(int n, int r, int s, int t, int w, bool commutative) {
  if (r < 0 || t < 0 || w < r + t || w > n) throw Error(Errc::InvalidDims, "need r + t <= w <= n");
  BoundReport b;
  const auto al = alpha_upper({r, s, t, 2, commutative});
  b.alpha = al.value;
  b.branch = al.branch;
  const double R = r, S = s, T = t, W = w, N = n;
  if (!commutative) {
    b.gamma = (R * R + S * (W - R)) * (N - W);
    b.beta = R * R * (W - R - T) + 0.5 * S * ((W - R) * (W - R) - (S - 1) * (S - 1));
  } else {
    const double u = W - R - T, m = N - R - T;
    b.beta = 0.5 * R * R * m + (S * T - 0.5 * S * S) * m;
    b.gamma = S * u * m - 0.5 * S * u * u;
  }
  b.delta = static_cast<double>(b.alpha) + b.beta + b.gamma;
  return b;
}

// --------------------------------------------------- commutative f(n, r)

struct CommutativeFBounds {
  bool zero = false;  // f(n, r) = 0
  Int lower = 0, upper = 0;
};

/// Exponent bounds for the number f(n, r) of commutative cube-zero algebras
/// of dimension n with dim R/R^2 = r.
inline CommutativeFBounds commutative_f_bounds(int n, int r, Int p = 2) {
  if (r < 0 || r > n || !is_prime(p)) throw Error(Errc::ParameterOutOfRange, "need 0 <= r <= n and p prime");
  CommutativeFBounds b;
  const Int k = Int(r) * (r + 1) / 2, m = n - r;
  b.zero = k < m;
  b.lower = k * m - m * m - Int(r) * r;
  b.upper = k * m - m * m + m;
  return b;
}

// ------------------------------------------------------------ objectives

enum class ObjectiveVariant { NCLow, NCHigh, CLow, CHigh };

inline std::string to_string(ObjectiveVariant v) {
  switch (v) {
    case ObjectiveVariant::NCLow: return "NC-low";
    case ObjectiveVariant::NCHigh: return "NC-high";
    case ObjectiveVariant::CLow: return "C-low";
    case ObjectiveVariant::CHigh: return "C-high";
  }
  return "?";
}

inline ObjectiveVariant parse_objective_variant(const std::string& s) {
  for (auto v : {ObjectiveVariant::NCLow, ObjectiveVariant::NCHigh, ObjectiveVariant::CLow, ObjectiveVariant::CHigh})
    if (to_string(v) == s) return v;
  throw Error(Errc::ParseError, "unknown objective '" + s + "' (NC-low, NC-high, C-low, C-high)");
}

namespace detail {

struct Interval {
  double lo = 0, hi = 0;
  Interval() = default;
  Interval(double a) : lo(a), hi(a) {}
  Interval(double a, double b) : lo(a), hi(b) {}
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

inline Interval operator+(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline Interval operator-(Interval a, Interval b) { return {a.lo - b.hi, a.hi - b.lo}; }
inline Interval operator-(Interval a) { return {-a.hi, -a.lo}; }
inline Interval operator*(Interval a, Interval b) {
  const double c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

/// Value with gradient in the four objective variables.
template <class T>
struct Dual {
  T v;
  std::array<T, 4> d{};
  Dual() = default;
  Dual(double c) : v(c) {
    for (auto& x : d) x = T(0.0);
  }
  static Dual var(T value, std::size_t i) {
    Dual out(0.0);
    out.v = value;
    out.d[i] = T(1.0);
    return out;
  }
};

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> c;
  c.v = a.v + b.v;
  for (std::size_t i = 0; i < 4; ++i) c.d[i] = a.d[i] + b.d[i];
  return c;
}
template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> c;
  c.v = a.v - b.v;
  for (std::size_t i = 0; i < 4; ++i) c.d[i] = a.d[i] - b.d[i];
  return c;
}
template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> c;
  c.v = a.v * b.v;
  for (std::size_t i = 0; i < 4; ++i) c.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return c;
}
template <class T>
Dual<T> operator+(const Dual<T>& a, double b) { return a + Dual<T>(b); }
template <class T>
Dual<T> operator-(double a, const Dual<T>& b) { return Dual<T>(a) - b; }
template <class T>
Dual<T> operator*(double a, const Dual<T>& b) { return Dual<T>(a) * b; }

inline Interval operator+(Interval a, double b) { return a + Interval(b); }
inline Interval operator-(double a, Interval b) { return Interval(a) - b; }
inline Interval operator*(double a, Interval b) { return Interval(a) * b; }

/// Objective in x = r/n, y = s/n, z = t/n, v = w/n.
template <class T>
T objective(ObjectiveVariant var, const T& x, const T& y, const T& z, const T& v) {
  switch (var) {
    case ObjectiveVariant::NCLow:
    case ObjectiveVariant::NCHigh: {
      T f = (y * v + x * x - x * y) * (1.0 - v) + x * x * (v - x - y) + 0.5 * (y * ((v - x) * (v - x) - y * y));
      if (var == ObjectiveVariant::NCHigh) f = f + 0.5 * (x * y * z);
      return f;
    }
    case ObjectiveVariant::CLow:
    case ObjectiveVariant::CHigh: {
      const T u = 1.0 - x - z;
      T f = 0.5 * (x * x * (1.0 - x - y)) + (y * z - 0.5 * (y * y)) * u + 0.5 * (y * u * u);
      if (var == ObjectiveVariant::CHigh) f = f + 0.5 * (x * y * z);
      return f;
    }
  }
  return T(0.0);
}

struct Linear {
  std::array<double, 4> a;
  double b;  // a . X <= b
};

struct Region {
  std::array<Interval, 4> box;  // variable ranges; unused variables are [0,0]
  std::vector<Linear> cons;

  bool feasible(const std::array<double, 4>& X) const {
    for (std::size_t i = 0; i < 4; ++i)
      if (X[i] < box[i].lo || X[i] > box[i].hi) return false;
    for (const auto& c : cons) {
      double s = 0;
      for (std::size_t i = 0; i < 4; ++i) s += c.a[i] * X[i];
      if (s > c.b + 1e-15) return false;
    }
    return true;
  }
};

inline Region objective_region(ObjectiveVariant var) {
  Region R;
  const bool nc = var == ObjectiveVariant::NCLow || var == ObjectiveVariant::NCHigh;
  const bool low = var == ObjectiveVariant::NCLow || var == ObjectiveVariant::CLow;
  R.box = {Interval(0, 1), Interval(0, 1), Interval(0, 1), Interval(0, 1)};
  if (var == ObjectiveVariant::NCLow) R.box[2] = Interval(0, 0);  // z does not occur
  if (!nc) R.box[3] = Interval(0, 0);                            // v does not occur
  R.cons.push_back({{-1, 1, 0, 0}, 0});                          // y <= x
  R.cons.push_back({{1, 1, 0, 0}, 1});                           // x + y <= 1
  if (!nc) {
    R.cons.push_back({{0, 1, -1, 0}, 0});  // y <= z
    R.cons.push_back({{1, 0, 1, 0}, 1});   // x + z <= 1
  }
  if (low)
    R.cons.push_back({{1, 0, 0, 0}, 0.6});
  else
    R.cons.push_back({{-1, 0, 0, 0}, -0.6});
  return R;
}

/// Shrinks a box to the bounding box of its intersection with the
/// constraints (a few propagation passes). Returns false when empty.
inline bool clip(std::array<Interval, 4>& X, const std::vector<Linear>& cons) {
  for (int pass = 0; pass < 3; ++pass)
    for (const auto& c : cons)
      for (std::size_t i = 0; i < 4; ++i) {
        if (c.a[i] == 0) continue;
        double rest = 0;
        for (std::size_t j = 0; j < 4; ++j)
          if (j != i) rest += std::min(c.a[j] * X[j].lo, c.a[j] * X[j].hi);
        const double bound = (c.b - rest) / c.a[i];
        if (c.a[i] > 0)
          X[i].hi = std::min(X[i].hi, bound);
        else
          X[i].lo = std::max(X[i].lo, bound);
        if (X[i].lo > X[i].hi) {
          if (X[i].lo - X[i].hi > 1e-12) return false;
          X[i].hi = X[i].lo;
        }
      }
  return true;
}

inline double eval(ObjectiveVariant var, const std::array<double, 4>& X) { return objective<double>(var, X[0], X[1], X[2], X[3]); }

/// Upper bound of the objective over a box: the smaller of the natural
/// interval extension and the mean-value form about the centre. `weights`
/// receives |gradient enclosure| * width per variable.
inline double box_upper(ObjectiveVariant var, const std::array<Interval, 4>& X, std::array<double, 4>& weights) {
  const Interval natural = objective<Interval>(var, X[0], X[1], X[2], X[3]);
  std::array<Dual<Interval>, 4> D;
  for (std::size_t i = 0; i < 4; ++i) D[i] = Dual<Interval>::var(X[i], i);
  const auto g = objective<Dual<Interval>>(var, D[0], D[1], D[2], D[3]);
  std::array<double, 4> c{};
  for (std::size_t i = 0; i < 4; ++i) c[i] = X[i].mid();
  Interval mvf(eval(var, c));
  for (std::size_t i = 0; i < 4; ++i) {
    mvf = mvf + g.d[i] * Interval(X[i].lo - c[i], X[i].hi - c[i]);
    weights[i] = std::max(std::abs(g.d[i].lo), std::abs(g.d[i].hi)) * X[i].width();
  }
  return std::min(natural.hi, mvf.hi);
}

}  // namespace detail

struct ObjectiveMax {
  double value = 0;
  std::array<double, 4> argmax{};  // x, y, z, v
  double certified_upper = 0;      // largest box upper bound when the search stopped
  bool certified = false;          // certified_upper - value <= tolerance
  std::size_t boxes = 0;
};

/// Maximum of a normalised objective over its region: grid scan (step
/// 1/100 per variable), compass refinement down to step 1e-8, then a
/// branch-and-bound over boxes with interval upper bounds that stops once
/// no box can beat the value by more than `tolerance`.
inline ObjectiveMax delta_objective_max(ObjectiveVariant var, double tolerance = 1e-6, std::size_t max_boxes = 4000000) {
  const detail::Region R = detail::objective_region(var);
  ObjectiveMax out;
  out.value = -1e300;
  const int steps = 100;
  std::array<int, 4> lim{};
  for (std::size_t i = 0; i < 4; ++i) lim[i] = R.box[i].width() > 0 ? steps : 0;
  std::array<double, 4> X{};
  for (int a = 0; a <= lim[0]; ++a)
    for (int b = 0; b <= lim[1]; ++b)
      for (int c = 0; c <= lim[2]; ++c)
        for (int d = 0; d <= lim[3]; ++d) {
          X = {R.box[0].lo + R.box[0].width() * a / steps, R.box[1].lo + R.box[1].width() * b / steps,
               R.box[2].lo + R.box[2].width() * c / steps, R.box[3].lo + R.box[3].width() * d / steps};
          if (!R.feasible(X)) continue;
          const double f = detail::eval(var, X);
          if (f > out.value) {
            out.value = f;
            out.argmax = X;
          }
        }
  // compass search
  for (double h = 1.0 / steps; h >= 1e-8; h /= 2) {
    for (bool moved = true; moved;) {
      moved = false;
      for (std::size_t i = 0; i < 4; ++i) {
        if (lim[i] == 0) continue;
        for (double sgn : {-1.0, 1.0}) {
          auto Y = out.argmax;
          Y[i] = std::clamp(Y[i] + sgn * h, R.box[i].lo, R.box[i].hi);
          if (!R.feasible(Y)) continue;
          const double f = detail::eval(var, Y);
          if (f > out.value + 1e-15) {
            out.value = f;
            out.argmax = Y;
            moved = true;
          }
        }
      }
    }
  }
  // branch and bound
  struct Box {
    double upper;
    std::array<detail::Interval, 4> X;
    std::array<double, 4> w;
    bool operator<(const Box& o) const { return upper < o.upper; }
  };
  std::priority_queue<Box> queue;
  auto push = [&](std::array<detail::Interval, 4> X) {
    if (!detail::clip(X, R.cons)) return;
    Box b{0, X, {}};
    b.upper = detail::box_upper(var, X, b.w);
    std::array<double, 4> c{};
    for (std::size_t i = 0; i < 4; ++i) c[i] = X[i].mid();
    if (R.feasible(c)) {
      const double f = detail::eval(var, c);
      if (f > out.value) {
        out.value = f;
        out.argmax = c;
      }
    }
    ++out.boxes;
    if (b.upper > out.value + tolerance / 2) queue.push(std::move(b));
  };
  push(R.box);
  out.certified_upper = out.value;
  while (!queue.empty()) {
    const Box b = queue.top();
    if (b.upper <= out.value + tolerance / 2 || out.boxes >= max_boxes) {
      out.certified_upper = b.upper;
      break;
    }
    queue.pop();
    const std::size_t k = static_cast<std::size_t>(std::max_element(b.w.begin(), b.w.end()) - b.w.begin());
    auto lo = b.X, hi = b.X;
    const double m = b.X[k].mid();
    lo[k].hi = m;
    hi[k].lo = m;
    push(lo);
    push(hi);
  }
  if (queue.empty()) out.certified_upper = std::max(out.certified_upper, out.value);
  out.certified_upper = std::max(out.certified_upper, out.value);
  out.certified = out.certified_upper - out.value <= tolerance;
  return out;
}

// ------------------------------------------------------ discrete maxima

struct DiscreteDeltaMax {
  double delta = 0;
  double normalized = 0;  // delta / n^3
  int r = 0, s = 0, t = 0, w = 0;
};

/// Exact maximum of the pre-asymptotic exponent over integer profiles:
/// noncommutative over 1 <= r, 0 <= s <= min(r, t+1), r + t <= w <= n with
/// the cube-zero case (w = n, w = r + t) left out; commutative over
/// r + t + u = n (w = n).
inline DiscreteDeltaMax discrete_delta_max(int n, bool commutative) {
  if (n < 1) throw Error(Errc::ParameterOutOfRange, "n must be positive");
  std::optional<DiscreteDeltaMax> best;
  for (int r = 1; r <= n; ++r)
    for (int t = 0; r + t <= n; ++t)
      for (int s = 0; s <= std::min(r, t + 1); ++s) {
        const int w_lo = commutative ? n : r + t;
        for (int w = w_lo; w <= n; ++w) {
          if (!commutative && w == n && w == r + t && n > 1) continue;
          const double d = bound_report(n, r, s, t, w, commutative).delta;
          if (!best || d > best->delta) best = DiscreteDeltaMax{d, 0, r, s, t, w};
        }
      }
  best->normalized = best->delta / (static_cast<double>(n) * n * n);
  return *best;
}

}  // namespace finring
