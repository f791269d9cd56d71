#pragma once

// Jacobson radical, Galois rings and matrix rings over them, coefficient
// subrings, and the reconstruction of a ring from its coefficient ring,
// radical and bimodule data.

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "finring/error.hpp"
#include "finring/iso.hpp"
#include "finring/ring.hpp"
#include "finring/subgroup.hpp"

namespace finring {

namespace detail {

/// Largest nilpotent ideal by greedy growth: x joins J when the ideal
/// generated by J and x is still nilpotent.
inline SubgroupBasis radical_greedy(const FiniteRing& R) {
  SubgroupBasis J = SubgroupBasis::trivial(R.shape());
  for (const auto& x : R.elements()) {
    if (J.contains(x)) continue;
    auto gens = J.generators();
    gens.push_back(x);
    SubgroupBasis I = ideal_generated(R, gens);
    if (is_nilpotent_subring(R, I)) J = std::move(I);
  }
  return J;
}

}  // namespace detail

inline SubgroupBasis jacobson_radical(const FiniteRing& R) {
  SubgroupBasis J = detail::radical_greedy(R);
  const QuotientRing Q = quotient_ring(R, J);
  if (!detail::radical_greedy(Q.ring).is_trivial())
    throw Error(Errc::NotAnIdeal, "internal: quotient by the computed radical is not semisimple");
  return J;
}

inline bool is_semisimple(const FiniteRing& R) { return detail::radical_greedy(R).is_trivial(); }

// ---------------------------------------------------------------- Galois rings

namespace detail {

/// Polynomials over Z/N as coefficient vectors, constant term first.
inline Vec poly_mod_p_rem(Vec a, const Vec& b, Int p) {
  // b monic
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const Int lead = floor_mod(a.back(), p);
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) a[shift + i] = floor_mod(a[shift + i] - lead * b[i], p);
    a.pop_back();
  }
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

inline bool irreducible_mod_p(const Vec& f, Int p) {
  const int r = static_cast<int>(f.size()) - 1;
  for (int d = 1; d <= r / 2; ++d) {
    // all monic polynomials of degree d
    const Int count = ipow(p, d);
    for (Int code = 0; code < count; ++code) {
      Vec g(static_cast<std::size_t>(d) + 1, 0);
      Int c = code;
      for (int i = 0; i < d; ++i) {
        g[static_cast<std::size_t>(i)] = c % p;
        c /= p;
      }
      g[static_cast<std::size_t>(d)] = 1;
      if (poly_mod_p_rem(f, g, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Lexicographically least monic irreducible polynomial of degree r mod p,
/// comparing coefficients from X^{r-1} down to the constant term. Returned
/// constant term first, leading 1 included.
inline Vec least_irreducible(Int p, int r) {
  const Int count = ipow(p, r);
  for (Int code = 0; code < count; ++code) {
    Vec f(static_cast<std::size_t>(r) + 1, 0);
    Int c = code;
    for (int i = 0; i < r; ++i) {
      f[static_cast<std::size_t>(i)] = c % p;
      c /= p;
    }
    f[static_cast<std::size_t>(r)] = 1;
    if (detail::irreducible_mod_p(f, p)) return f;
  }
  throw Error(Errc::ParameterOutOfRange, "no irreducible polynomial found");
}

/// GR(p^k, r) = Z/p^k[X]/(f) on the basis 1, X, ..., X^{r-1}.
inline FiniteRing galois_ring(Int p, int k, int r) {
  if (!is_prime(p) || k < 1 || r < 1) throw Error(Errc::ParameterOutOfRange, "galois_ring needs p prime and k, r >= 1");
  const Int N = ipow(p, k);
  const Vec f = least_irreducible(p, r);
  const auto ur = static_cast<std::size_t>(r);
  // X^e reduced, for e < 2r - 1
  std::vector<Vec> xp(2 * ur, Vec(ur, 0));
  for (std::size_t e = 0; e < 2 * ur - 1; ++e) {
    if (e < ur) {
      xp[e][e] = 1;
      continue;
    }
    // X^e = X * X^{e-1}
    const Vec& prev = xp[e - 1];
    Vec cur(ur, 0);
    for (std::size_t i = 0; i + 1 < ur; ++i) cur[i + 1] = prev[i];
    const Int top = prev[ur - 1];
    for (std::size_t i = 0; i < ur; ++i) cur[i] = floor_mod(cur[i] - top * f[i], N);
    xp[e] = cur;
  }
  Table t(ur * ur * ur, 0);
  for (std::size_t a = 0; a < ur; ++a)
    for (std::size_t b = 0; b < ur; ++b)
      for (std::size_t l = 0; l < ur; ++l) t[(a * ur + b) * ur + l] = xp[a + b][l];
  return make_ring(AdditiveShape(p, std::vector<int>(ur, k)), t);
}

/// M_m(S) on the basis E_ab s_c, ordered by c first, then (a, b).
inline FiniteRing matrix_ring(const FiniteRing& S, int m) {
  if (m < 1) throw Error(Errc::ParameterOutOfRange, "matrix size must be >= 1");
  if (!find_identity(S)) throw Error(Errc::NoIdentity, "matrix rings are built over unital rings");
  const std::size_t q = S.rank(), mm = static_cast<std::size_t>(m) * static_cast<std::size_t>(m), n = q * mm;
  const auto um = static_cast<std::size_t>(m);
  std::vector<int> exps;
  for (std::size_t c = 0; c < q; ++c)
    for (std::size_t e = 0; e < mm; ++e) exps.push_back(S.shape().exponent(c));
  auto idx = [&](std::size_t c, std::size_t a, std::size_t b) { return c * mm + a * um + b; };
  Table t(n * n * n, 0);
  for (std::size_t c1 = 0; c1 < q; ++c1)
    for (std::size_t c2 = 0; c2 < q; ++c2)
      for (std::size_t a = 0; a < um; ++a)
        for (std::size_t b = 0; b < um; ++b)
          for (std::size_t d = 0; d < um; ++d)
            for (std::size_t l = 0; l < q; ++l) {
              // (E_ab s_c1)(E_bd s_c2) = E_ad (s_c1 s_c2)
              t[(idx(c1, a, b) * n + idx(c2, b, d)) * n + idx(l, a, d)] = S.c(c1, c2, l);
            }
  return make_ring(AdditiveShape(S.p(), exps), t);
}

struct CoefficientSummand {
  int m = 1;  // matrix size
  int k = 1;  // characteristic exponent
  int r = 1;  // residue degree
  auto operator<=>(const CoefficientSummand&) const = default;
};

struct CoefficientRingDescriptor {
  std::vector<CoefficientSummand> summands;

  int order_exponent() const {
    int s = 0;
    for (const auto& d : summands) s += d.m * d.m * d.k * d.r;
    return s;
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < summands.size(); ++i) {
      if (i) out += "+";
      out += std::to_string(summands[i].m) + "," + std::to_string(summands[i].k) + "," + std::to_string(summands[i].r);
    }
    return out;
  }

  static CoefficientRingDescriptor parse(const std::string& text) {
    CoefficientRingDescriptor d;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, '+')) {
      std::stringstream ps(part);
      std::string a, b, c, extra;
      if (!std::getline(ps, a, ',') || !std::getline(ps, b, ',') || !std::getline(ps, c, ',') || std::getline(ps, extra, ','))
        throw Error(Errc::ParseError, "descriptor summands are 'm,k,r'");
      try {
        CoefficientSummand s{std::stoi(a), std::stoi(b), std::stoi(c)};
        if (s.m < 1 || s.k < 1 || s.r < 1) throw Error(Errc::ParameterOutOfRange, "descriptor entries must be positive");
        d.summands.push_back(s);
      } catch (const std::logic_error&) {
        throw Error(Errc::ParseError, "bad descriptor entry in '" + part + "'");
      }
    }
    if (d.summands.empty()) throw Error(Errc::ParseError, "empty descriptor");
    return d;
  }

  bool operator==(const CoefficientRingDescriptor&) const = default;
};

inline FiniteRing build_coefficient_ring(Int p, const CoefficientRingDescriptor& d) {
  if (d.summands.empty()) throw Error(Errc::ParameterOutOfRange, "empty descriptor");
  std::optional<FiniteRing> acc;
  for (const auto& s : d.summands) {
    FiniteRing part = matrix_ring(galois_ring(p, s.k, s.r), s.m);
    acc = acc ? direct_sum(*acc, part) : part;
  }
  return *acc;
}

/// All descriptors (summands sorted descending) of total order exponent s.
/// With `max_k` = 1 these are the semisimple F_p-algebras.
inline std::vector<CoefficientRingDescriptor> descriptors_of_order(int s, int max_k = 1 << 20) {
  std::vector<CoefficientSummand> atoms;
  for (int m = 1; m * m <= s; ++m)
    for (int k = 1; k <= std::min(s, max_k); ++k)
      for (int r = 1; m * m * k * r <= s; ++r) atoms.push_back({m, k, r});
  std::sort(atoms.rbegin(), atoms.rend());
  std::vector<CoefficientRingDescriptor> out;
  std::vector<CoefficientSummand> cur;
  std::function<void(std::size_t, int)> rec = [&](std::size_t from, int left) {
    if (left == 0) {
      out.push_back({cur});
      return;
    }
    for (std::size_t a = from; a < atoms.size(); ++a) {
      const int w = atoms[a].m * atoms[a].m * atoms[a].k * atoms[a].r;
      if (w > left) continue;
      cur.push_back(atoms[a]);
      rec(a, left - w);
      cur.pop_back();
    }
  };
  if (s > 0) rec(0, s);
  return out;
}

struct TwoGeneration {
  RingElement g1, g2;
  bool generates = false;
};

/// Generators zeta*E_11 and the cyclic permutation matrix of M_m(GR(p^k,r)),
/// where the ring is the one built by matrix_ring(galois_ring(p,k,r), m).
inline TwoGeneration verify_two_generated(Int p, int m, int k, int r) {
  const FiniteRing G = galois_ring(p, k, r);
  const FiniteRing S = matrix_ring(G, m);
  const auto um = static_cast<std::size_t>(m), mm = um * um, q = G.rank();
  auto idx = [&](std::size_t c, std::size_t a, std::size_t b) { return c * mm + a * um + b; };
  TwoGeneration out;
  out.g2 = S.zero();
  if (m > 1)
    for (std::size_t a = 0; a < um; ++a) out.g2[idx(0, a, (a + 1) % um)] = 1;
  // zeta candidates: 1 when r = 1, otherwise X, X+1, X+2, ...
  std::vector<RingElement> zetas;
  if (r == 1) zetas.push_back(G.basis(0));
  else
    for (Int c = 0; c < p; ++c) {
      RingElement z = G.basis(1);
      z[0] = c;
      zetas.push_back(z);
    }
  for (const auto& z : zetas) {
    RingElement g1 = S.zero();
    for (std::size_t c = 0; c < q; ++c) g1[idx(c, 0, 0)] = z[c];
    std::vector<RingElement> gens{g1};
    if (m > 1) gens.push_back(out.g2);
    if (subring_generated(S, gens).is_whole()) {
      out.g1 = g1;
      out.generates = true;
      return out;
    }
  }
  throw Error(Errc::GenerationFailed, "no generator candidate produced the whole matrix ring");
}

/// Idempotent e = s mod J(R) by the iteration t <- 3t^2 - 2t^3.
inline RingElement lift_idempotent(const FiniteRing& R, const RingElement& s, const SubgroupBasis& J) {
  R.check_conforms(s);
  if (!J.contains(R.sub(R.mul(s, s), s))) throw Error(Errc::NotIdempotentModJ, "s^2 - s is not in the radical");
  RingElement t = R.reduce(s);
  for (int guard = 0; guard < 64; ++guard) {
    const RingElement t2 = R.mul(t, t);
    if (t2 == t) return t;
    const RingElement t3 = R.mul(t2, t);
    t = R.sub(R.scale(3, t2), R.scale(2, t3));
  }
  throw Error(Errc::NotIdempotentModJ, "idempotent lifting did not converge");
}

inline RingElement lift_idempotent(const FiniteRing& R, const RingElement& s) {
  return lift_idempotent(R, s, jacobson_radical(R));
}

struct CoefficientReport {
  bool sum_with_radical_is_ring = false;  // S + J(R) = R
  bool unital = false;                    // S has an identity
  bool radical_is_pS = false;             // J(S) = pS
  bool meets_radical_in_pS = false;       // S n J(R) = pS
  bool minimal = false;                   // no proper subring S' with S' + J(R) = R
  RingElement idempotent_seed;
  bool all() const { return sum_with_radical_is_ring && unital && radical_is_pS && meets_radical_in_pS && minimal; }
};

struct CoefficientSubring {
  SubgroupBasis S;
  SubgroupBasis J;
  CoefficientReport report;
};

namespace detail {

/// Maximal subgroups of H containing pH (kernels of functionals on H/pH).
inline std::vector<SubgroupBasis> maximal_subgroups(const FiniteRing& R, const SubgroupBasis& H) {
  std::vector<SubgroupBasis> out;
  const auto dec = H.decomposition();
  const std::size_t d = dec.size();
  const Int p = R.p();
  std::vector<RingElement> pH;
  for (const auto& [h, e] : dec) pH.push_back(R.scale(p, h));
  // functionals up to scalar: first nonzero coordinate equals 1
  const Int total = ipow(p, static_cast<int>(d));
  for (Int code = 1; code < total; ++code) {
    Vec lam(d);
    Int c = code;
    for (std::size_t t = d; t-- > 0;) {
      lam[t] = c % p;
      c /= p;
    }
    std::size_t t0 = 0;
    while (lam[t0] == 0) ++t0;
    if (lam[t0] != 1) continue;
    std::vector<RingElement> gens = pH;
    for (std::size_t t = 0; t < d; ++t) {
      if (t == t0) continue;
      gens.push_back(R.sub(dec[t].first, R.scale(lam[t], dec[t0].first)));
    }
    out.emplace_back(R.shape(), gens);
  }
  return out;
}

}  // namespace detail

/// A minimal subring S with S + J(R) = R, seeded by eRe for an idempotent
/// lift e of the identity of R/J(R); all properties are re-verified.
inline CoefficientSubring coefficient_subring(const FiniteRing& R) {
  if (is_nilpotent(R).nilpotent) throw Error(Errc::NilpotentInput, "the ring is nilpotent");
  CoefficientSubring out;
  out.J = jacobson_radical(R);
  const QuotientRing Q = quotient_ring(R, out.J);
  const auto one = find_identity(Q.ring);
  if (!one) throw Error(Errc::NoIdentity, "internal: R/J(R) has no identity");
  RingElement s = R.zero();
  for (std::size_t t = 0; t < Q.lifts.size(); ++t) s = R.add(s, R.scale((*one)[t], Q.lifts[t]));
  const RingElement e = lift_idempotent(R, s, out.J);
  out.report.idempotent_seed = e;
  std::vector<RingElement> eRe;
  for (std::size_t i = 0; i < R.rank(); ++i) eRe.push_back(R.mul(R.mul(e, R.basis(i)), e));
  SubgroupBasis seed = span(R, eRe);

  auto covers = [&](const SubgroupBasis& H) { return (H + out.J).is_whole(); };
  // Breadth-first descent over subgroups between the answer and the seed.
  std::set<Mat> visited{seed.key()};
  std::deque<SubgroupBasis> queue{seed};
  SubgroupBasis best = seed;
  while (!queue.empty()) {
    SubgroupBasis H = std::move(queue.front());
    queue.pop_front();
    if (is_subring(R, H) && (H.order_exponent() < best.order_exponent() ||
                             (H.order_exponent() == best.order_exponent() && H.key() < best.key())))
      best = H;
    for (auto& M : detail::maximal_subgroups(R, H)) {
      if (!covers(M) || !visited.insert(M.key()).second) continue;
      queue.push_back(std::move(M));
    }
  }
  out.S = best;

  auto& rep = out.report;
  rep.sum_with_radical_is_ring = covers(out.S);
  const SubringPresentation P = subring_as_ring(R, out.S);
  rep.unital = find_identity(P.ring).has_value();
  const SubgroupBasis JS = jacobson_radical(P.ring);
  rep.radical_is_pS = JS == scaled_by_p(P.ring, SubgroupBasis::whole(P.ring.shape()));
  const SubgroupBasis pS = scaled_by_p(R, out.S);
  const int meet = out.S.order_exponent() + out.J.order_exponent() - (out.S + out.J).order_exponent();
  rep.meets_radical_in_pS = out.J.contains(pS) && meet == pS.order_exponent();
  rep.minimal = true;
  for (const auto& M : detail::maximal_subgroups(R, out.S)) {
    // any proper subring with the covering property lies in a maximal subgroup
    // that also covers; search below each such maximal subgroup
    if (!covers(M)) continue;
    std::set<Mat> seen{M.key()};
    std::deque<SubgroupBasis> q{M};
    while (!q.empty() && rep.minimal) {
      SubgroupBasis H = std::move(q.front());
      q.pop_front();
      if (is_subring(R, H)) rep.minimal = false;
      for (auto& K : detail::maximal_subgroups(R, H))
        if (covers(K) && seen.insert(K.key()).second) q.push_back(std::move(K));
    }
    if (!rep.minimal) break;
  }
  return out;
}

// ------------------------------------------------------------------- sextuple

/// Data reconstructing a non-nilpotent ring from its coefficient ring S
/// (given by a descriptor), its radical J, the injection psi : pS -> J, and
/// the left/right actions of the basis of S on J.
struct Sextuple {
  CoefficientRingDescriptor descriptor;
  FiniteRing S;                      // build_coefficient_ring(p, descriptor)
  FiniteRing J;                      // radical as a ring
  std::vector<RingElement> psi;      // psi(p s_i) in J coordinates, one per basis element of S
  std::vector<Mat> left, right;      // left[i][u] = s_i * j_u, right[i][u] = j_u * s_i (J coordinates)
  std::vector<RingElement> theta;    // images of the S basis in the original ring (extraction only)
  std::vector<RingElement> j_basis;  // J basis in the original ring (extraction only)

  RingElement act_left(const RingElement& s, const RingElement& x) const { return act(left, s, x); }
  RingElement act_right(const RingElement& x, const RingElement& s) const { return act(right, s, x); }

  /// psi on an element y of pS (S coordinates).
  RingElement psi_of(const RingElement& y) const {
    RingElement out = J.zero();
    for (std::size_t i = 0; i < S.rank(); ++i) {
      if (y[i] == 0) continue;
      if (y[i] % S.p() != 0) throw Error(Errc::InvalidSextuple, "psi is only defined on pS");
      out = J.add(out, J.scale(y[i] / S.p(), psi[i]));
    }
    return out;
  }

  /// Splits s = s' + y with s' in the transversal (coefficients in [0,p)) and y in pS.
  std::pair<RingElement, RingElement> split(const RingElement& s) const {
    RingElement rep(S.rank()), y(S.rank());
    for (std::size_t i = 0; i < S.rank(); ++i) {
      rep[i] = s[i] % S.p();
      y[i] = s[i] - rep[i];
    }
    return {rep, y};
  }

  /// The product of formal sums (s1 + x1)(s2 + x2) with s1, s2 in the
  /// transversal: s' + psi(y') + s1 x2 + x1 s2 + x1 x2, where s1 s2 = s' + y'.
  std::pair<RingElement, RingElement> formal_product(const RingElement& s1, const RingElement& x1, const RingElement& s2,
                                                     const RingElement& x2) const {
    auto [sp, yp] = split(S.mul(s1, s2));
    RingElement x = psi_of(yp);
    x = J.add(x, act_left(s1, x2));
    x = J.add(x, act_right(x1, s2));
    x = J.add(x, J.mul(x1, x2));
    return {sp, x};
  }

  /// Formal sum s + x (s arbitrary): reduce to the transversal, moving the pS part through psi.
  std::pair<RingElement, RingElement> normalize(const RingElement& s, const RingElement& x) const {
    auto [sp, y] = split(S.reduce(s));
    return {sp, J.add(x, psi_of(y))};
  }

 private:
  RingElement act(const std::vector<Mat>& tab, const RingElement& s, const RingElement& x) const {
    RingElement out = J.zero();
    for (std::size_t i = 0; i < S.rank(); ++i) {
      if (s[i] == 0) continue;
      for (std::size_t u = 0; u < J.rank(); ++u) {
        if (x[u] == 0) continue;
        out = J.add(out, J.scale(s[i] * x[u], tab[i][u]));
      }
    }
    return out;
  }
};

/// Descriptor ring isomorphic to the subring S of R, with the images of its basis in R.
inline std::pair<CoefficientRingDescriptor, std::vector<RingElement>> identify_coefficient_ring(const FiniteRing& R,
                                                                                             const SubgroupBasis& S) {
  const SubringPresentation P = subring_as_ring(R, S);
  for (const auto& d : descriptors_of_order(S.order_exponent())) {
    const FiniteRing D = build_coefficient_ring(R.p(), d);
    if (!(D.shape() == P.ring.shape())) continue;
    if (auto w = find_isomorphism(D, P.ring)) {
      std::vector<RingElement> theta;
      for (const auto& y : *w) theta.push_back(P.embed(y));
      return {d, theta};
    }
  }
  throw Error(Errc::InvalidSextuple, "coefficient ring matches no descriptor");
}

inline Sextuple extract_sextuple(const FiniteRing& R) {
  const CoefficientSubring C = coefficient_subring(R);
  Sextuple t;
  auto [d, theta] = identify_coefficient_ring(R, C.S);
  t.descriptor = d;
  t.S = build_coefficient_ring(R.p(), d);
  t.theta = theta;
  const SubringPresentation JP = subring_as_ring(R, C.J);
  t.J = JP.ring;
  t.j_basis = JP.basis;
  const CoordinateSystem jc(R, JP.basis, JP.ring.shape().exponents());
  auto in_j = [&](const RingElement& x) {
    auto c = jc.coordinates(x);
    if (!c) throw Error(Errc::InvalidSextuple, "element expected in the radical");
    return *c;
  };
  for (std::size_t i = 0; i < t.S.rank(); ++i) {
    t.psi.push_back(t.J.rank() ? in_j(R.scale(R.p(), theta[i])) : RingElement{});
    Mat L, Rt;
    for (std::size_t u = 0; u < t.J.rank(); ++u) {
      L.push_back(in_j(R.mul(theta[i], JP.basis[u])));
      Rt.push_back(in_j(R.mul(JP.basis[u], theta[i])));
    }
    t.left.push_back(L);
    t.right.push_back(Rt);
  }
  return t;
}

/// The ring T on pairs (s, x), s in S, x in J, modulo {(y, -psi(y)) : y in pS}.
inline FiniteRing build_from_sextuple(const Sextuple& t) {
  const FiniteRing& S = t.S;
  const FiniteRing& J = t.J;
  const std::size_t a = S.rank(), b = J.rank();
  if (t.psi.size() != a || t.left.size() != a || t.right.size() != a)
    throw Error(Errc::InvalidSextuple, "sextuple tables do not match the coefficient ring");
  // module axioms on generators
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t k = 0; k < a; ++k)
      for (std::size_t u = 0; u < b; ++u) {
        const RingElement x = J.basis(u);
        const RingElement si = S.basis(i), sk = S.basis(k), sik = S.mul(si, sk);
        if (t.act_left(sik, x) != t.act_left(si, t.act_left(sk, x)) ||
            t.act_right(x, sik) != t.act_right(t.act_right(x, si), sk) ||
            t.act_right(t.act_left(si, x), sk) != t.act_left(si, t.act_right(x, sk)))
          throw Error(Errc::InvalidSextuple, "actions are not compatible with the multiplication of S");
        for (std::size_t v = 0; v < b; ++v) {
          const RingElement y = J.basis(v);
          if (t.act_left(si, J.mul(x, y)) != J.mul(t.act_left(si, x), y) ||
              J.mul(t.act_right(x, si), y) != J.mul(x, t.act_left(si, y)) ||
              t.act_right(J.mul(x, y), si) != J.mul(x, t.act_right(y, si)))
            throw Error(Errc::InvalidSextuple, "actions are not compatible with the multiplication of J");
        }
      }
  // P = S + J as a ring
  std::vector<int> exps;
  for (std::size_t i = 0; i < a; ++i) exps.push_back(S.shape().exponent(i));
  for (std::size_t u = 0; u < b; ++u) exps.push_back(J.shape().exponent(u));
  std::vector<std::size_t> order(a + b);
  for (std::size_t i = 0; i < a + b; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return exps[x] > exps[y]; });
  std::vector<std::size_t> pos(a + b);
  std::vector<int> sorted_exps;
  for (std::size_t k = 0; k < a + b; ++k) {
    pos[order[k]] = k;
    sorted_exps.push_back(exps[order[k]]);
  }
  const AdditiveShape shape(S.p(), sorted_exps);
  auto pack = [&](const RingElement& s, const RingElement& x) {
    RingElement z(a + b, 0);
    for (std::size_t i = 0; i < a; ++i) z[pos[i]] = s[i];
    for (std::size_t u = 0; u < b; ++u) z[pos[a + u]] = x[u];
    return z;
  };
  const std::size_t n = a + b;
  std::vector<RingElement> prods(n * n);
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) {
      const std::size_t og = order[g], oh = order[h];
      RingElement s1 = S.zero(), s2 = S.zero(), x1 = J.zero(), x2 = J.zero();
      if (og < a) s1[og] = 1; else x1[og - a] = 1;
      if (oh < a) s2[oh] = 1; else x2[oh - a] = 1;
      RingElement x = J.add(J.add(t.act_left(s1, x2), t.act_right(x1, s2)), J.mul(x1, x2));
      prods[g * n + h] = pack(S.mul(s1, s2), x);
    }
  const FiniteRing P = FiniteRing::from_products(shape, prods);
  std::vector<RingElement> kgens;
  for (std::size_t i = 0; i < a; ++i) {
    RingElement ps = S.scale(S.p(), S.basis(i));
    kgens.push_back(pack(ps, b ? J.neg(t.psi[i]) : J.zero()));
  }
  const SubgroupBasis K = span(P, kgens);
  if (!is_ideal(P, K)) throw Error(Errc::InvalidSextuple, "psi is not compatible with the actions");
  return quotient_ring(P, K).ring;
}

}  // namespace finring
