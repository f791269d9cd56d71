#pragma once

// Flattening a ring of order p^n to a based n-dimensional F_p product table
// through the elements y_ij = p^j x_i (0 <= j < k_i). The result need not be
// associative.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "finring/format.hpp"
#include "finring/ring.hpp"
#include "finring/subgroup.hpp"

namespace finring {

enum class Associativity { Unknown, Yes, No };

struct AssociativityWitness {
  std::array<std::size_t, 3> triple{};  // 0-based (i, j, k)
  Vec left;                             // (z_i z_j) z_k
  Vec right;                            // z_i (z_j z_k)
};

/// z_i z_j = sum_k phi[i][j][k] z_k over F_p; associativity is not assumed.
struct FpTable {
  Int p = 2;
  std::size_t dim = 0;
  Table phi;
  Associativity associative = Associativity::Unknown;
  std::optional<AssociativityWitness> witness;

  Int at(std::size_t i, std::size_t j, std::size_t k) const { return phi[(i * dim + j) * dim + k]; }

  Vec mul(const Vec& a, const Vec& b) const {
    Vec r(dim, 0);
    for (std::size_t i = 0; i < dim; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        if (b[j] == 0) continue;
        const Int ab = a[i] * b[j] % p;
        for (std::size_t k = 0; k < dim; ++k) r[k] = (r[k] + ab * at(i, j, k)) % p;
      }
    }
    return r;
  }

  Vec unit(std::size_t i) const {
    Vec e(dim, 0);
    e[i] = 1;
    return e;
  }

  /// The table viewed as a structure-constant table on shape (1,...,1);
  /// validated (and so throws NotAssociative) unless `check` is false.
  FiniteRing as_ring(bool check = true) const {
    const AdditiveShape sh = AdditiveShape::uniform(p, static_cast<int>(dim));
    return check ? make_ring(sh, phi) : FiniteRing::unchecked(sh, phi);
  }

  bool operator==(const FpTable& o) const { return p == o.p && dim == o.dim && phi == o.phi; }
};

/// Position of each y_ij in the z-list. Ordering: p-power j ascending, then i.
struct FlattenBasisMap {
  std::vector<std::pair<std::size_t, int>> ordering;  // z_a -> (i, j)
  std::vector<std::vector<std::size_t>> digit_map;    // [i][j] -> a

  static FlattenBasisMap for_shape(const AdditiveShape& sh) {
    FlattenBasisMap m;
    m.digit_map.resize(sh.rank());
    for (int j = 0; j < sh.max_exponent(); ++j)
      for (std::size_t i = 0; i < sh.rank(); ++i)
        if (j < sh.exponent(i)) {
          m.digit_map[i].push_back(m.ordering.size());
          m.ordering.emplace_back(i, j);
        }
    return m;
  }

  /// Base-p digits of the x-coordinates, placed at the z positions.
  Vec to_digits(const RingElement& a, Int p) const {
    Vec d(ordering.size(), 0);
    for (std::size_t i = 0; i < digit_map.size(); ++i) {
      Int x = a[i];
      for (std::size_t pos : digit_map[i]) {
        d[pos] = x % p;
        x /= p;
      }
    }
    return d;
  }

  RingElement from_digits(const Vec& d, Int p) const {
    RingElement a(digit_map.size(), 0);
    for (std::size_t i = 0; i < digit_map.size(); ++i) {
      Int w = 1;
      for (std::size_t pos : digit_map[i]) {
        a[i] += d[pos] * w;
        w *= p;
      }
    }
    return a;
  }

  /// The ring element y_ij for z_a.
  RingElement element(std::size_t a, const AdditiveShape& sh) const {
    RingElement x(sh.rank(), 0);
    x[ordering[a].first] = ipow(sh.p(), ordering[a].second);
    return x;
  }
};

struct Flattening {
  FpTable table;
  FlattenBasisMap basis;
};

inline Flattening flatten(const FiniteRing& R) {
  Flattening out;
  out.basis = FlattenBasisMap::for_shape(R.shape());
  const std::size_t n = out.basis.ordering.size();
  out.table.p = R.p();
  out.table.dim = n;
  out.table.phi.assign(n * n * n, 0);
  std::vector<RingElement> z;
  for (std::size_t a = 0; a < n; ++a) z.push_back(out.basis.element(a, R.shape()));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const Vec d = out.basis.to_digits(R.mul(z[a], z[b]), R.p());
      for (std::size_t k = 0; k < n; ++k) out.table.phi[(a * n + b) * n + k] = d[k];
    }
  return out;
}

/// Exhaustive basis-triple check in lexicographic (i, j, k) order. Records
/// the verdict on the table and returns the first violation, if any.
inline std::optional<AssociativityWitness> check_associativity(FpTable& A) {
  for (std::size_t i = 0; i < A.dim; ++i)
    for (std::size_t j = 0; j < A.dim; ++j) {
      const Vec zij = A.mul(A.unit(i), A.unit(j));
      for (std::size_t k = 0; k < A.dim; ++k) {
        Vec left = A.mul(zij, A.unit(k));
        Vec right = A.mul(A.unit(i), A.mul(A.unit(j), A.unit(k)));
        if (left != right) {
          A.associative = Associativity::No;
          A.witness = AssociativityWitness{{i, j, k}, std::move(left), std::move(right)};
          return A.witness;
        }
      }
    }
  A.associative = Associativity::Yes;
  A.witness.reset();
  return std::nullopt;
}

inline std::optional<AssociativityWitness> check_associativity(const FpTable& A) {
  FpTable copy = A;
  return check_associativity(copy);
}

/// Flattenings of R on its own basis and on `new_basis`.
inline std::pair<FpTable, FpTable> flatten_basis_dependence(const FiniteRing& R, const std::vector<RingElement>& new_basis) {
  const FiniteRing S = rebase(R, new_basis);
  return {flatten(R).table, flatten(S).table};
}

inline std::string format_fp_table(const FpTable& A) {
  std::string out = "p=" + std::to_string(A.p) + ";shape=";
  for (std::size_t i = 0; i < A.dim; ++i) out += i ? ",1" : "1";
  out += "\n";
  for (std::size_t i = 0; i < A.dim; ++i)
    for (std::size_t j = 0; j < A.dim; ++j) {
      std::vector<Int> row(A.phi.begin() + static_cast<std::ptrdiff_t>((i * A.dim + j) * A.dim),
                           A.phi.begin() + static_cast<std::ptrdiff_t>((i * A.dim + j + 1) * A.dim));
      out += "c[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]=" + detail::join(row) + "\n";
    }
  if (A.associative == Associativity::Yes) out += "associative=yes\n";
  if (A.associative == Associativity::No && A.witness) {
    const auto& t = A.witness->triple;
    out += "associative=no:" + std::to_string(t[0] + 1) + "," + std::to_string(t[1] + 1) + "," + std::to_string(t[2] + 1) + "\n";
  }
  return out;
}

inline FpTable parse_fp_table(const std::string& text) {
  std::istringstream in(text);
  auto recs = parse_raw_records(in);
  if (recs.size() != 1) throw Error(Errc::ParseError, "expected exactly one table record");
  const auto& r = recs.front();
  for (int k : r.shape)
    if (k != 1) throw Error(Errc::ParseError, "F_p tables have shape 1,...,1");
  if (!is_prime(r.p)) throw Error(Errc::ParseError, "p is not prime");
  FpTable A;
  A.p = r.p;
  A.dim = r.shape.size();
  A.phi = r.table;
  for (const auto& t : r.trailer) {
    if (t == "associative=yes") A.associative = Associativity::Yes;
    else if (t.rfind("associative=no:", 0) == 0) {
      auto v = detail::parse_int_list(t.substr(15), 0);
      if (v.size() != 3) throw Error(Errc::ParseError, "bad associativity witness");
      A.associative = Associativity::No;
      check_associativity(A);
    } else {
      throw Error(Errc::ParseError, "unknown trailer '" + t + "'");
    }
  }
  return A;
}

}  // namespace finring
