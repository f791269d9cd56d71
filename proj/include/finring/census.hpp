#pragma once

// Isomorphism classes of rings of order p^n.
//
// Two strategies. The naive one runs an odometer over every table the
// additive shape allows, keeps the associative ones and partitions them
// with is_isomorphic. The pruned one works shape by shape:
//   * elementary shape: F_p-algebras in a normal form A = S + J, where S is
//     a fixed semisimple table from the catalogue, J the radical with
//     strictly upper products, and S acts on J by a pair of commuting
//     representations. A class is recorded at its first normal-form table;
//     the normal-form members of its orbit are then marked as seen.
//   * other shapes: the table mod p is an associative table of rank m, so
//     every associative table of F_p^m is lifted digit by digit and the
//     lifts are deduplicated by orbit marking.

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "finring/format.hpp"
#include "finring/iso.hpp"
#include "finring/nilpotent.hpp"
#include "finring/structure.hpp"

namespace finring {

enum class CensusStrategy { Naive, Pruned };

inline std::string to_string(CensusStrategy s) { return s == CensusStrategy::Naive ? "naive" : "pruned"; }

struct CensusRecord {
  FiniteRing ring;  // canonical table
  bool nilpotent = false;
  bool commutative = false;
  bool has_identity = false;
  int j_exponent = 0;         // |J(R)| = p^j_exponent
  int quotient_exponent = 0;  // |R/J(R)|
  std::string strategy;

  static CensusRecord of(const FiniteRing& canonical, std::string strategy) {
    CensusRecord r;
    r.ring = canonical;
    r.nilpotent = is_nilpotent(canonical).nilpotent;
    r.commutative = canonical.is_commutative();
    r.has_identity = find_identity(canonical).has_value();
    r.j_exponent = jacobson_radical(canonical).order_exponent();
    r.quotient_exponent = canonical.shape().n() - r.j_exponent;
    r.strategy = std::move(strategy);
    return r;
  }
};

struct CensusFilter {
  std::optional<bool> nilpotent, commutative, unital;
  std::optional<std::vector<int>> shape;

  bool accepts(const CensusRecord& r) const {
    if (nilpotent && *nilpotent != r.nilpotent) return false;
    if (commutative && *commutative != r.commutative) return false;
    if (unital && *unital != r.has_identity) return false;
    if (shape && *shape != r.ring.shape().exponents()) return false;
    return true;
  }

  /// One token: nilpotent, commutative, unital (each optionally prefixed
  /// with '!'), or shape=k1,k2,...
  void add(const std::string& token) {
    if (token.rfind("shape=", 0) == 0) {
      std::vector<int> ks;
      for (Int k : detail::parse_int_list(token.substr(6), 0)) ks.push_back(static_cast<int>(k));
      if (ks.empty() || !std::is_sorted(ks.rbegin(), ks.rend()) || ks.back() < 1)
        throw Error(Errc::ParseError, "filter shape must be weakly decreasing positive exponents");
      shape = ks;
      return;
    }
    const bool neg = !token.empty() && token[0] == '!';
    const std::string name = neg ? token.substr(1) : token;
    if (name == "nilpotent")
      nilpotent = !neg;
    else if (name == "commutative")
      commutative = !neg;
    else if (name == "unital")
      unital = !neg;
    else
      throw Error(Errc::ParseError, "unknown census filter '" + token + "'");
  }
};

/// Largest p^n enumerate_rings accepts: FINRING_BUDGET if set, else 64.
inline Int census_budget() {
  if (const char* s = std::getenv("FINRING_BUDGET")) {
    try {
      const long long v = std::stoll(s);
      if (v > 0) return v;
    } catch (const std::logic_error&) {
    }
    throw Error(Errc::ParseError, std::string("FINRING_BUDGET='") + s + "' is not a positive integer");
  }
  return 64;
}

/// |Aut| of the abelian group with the given shape.
inline Int automorphism_group_order(const AdditiveShape& sh) {
  // exponents ascending: e_1 <= ... <= e_m
  std::vector<int> e(sh.exponents().rbegin(), sh.exponents().rend());
  const std::size_t m = e.size();
  const Int p = sh.p();
  Int out = 1;
  for (std::size_t k = 1; k <= m; ++k) {
    std::size_t dk = k, ck = k;
    while (dk < m && e[dk] == e[k - 1]) ++dk;
    while (ck > 1 && e[ck - 2] == e[k - 1]) --ck;
    out *= ipow(p, static_cast<int>(dk)) - ipow(p, static_cast<int>(k - 1));
    out *= ipow(p, e[k - 1] * static_cast<int>(m - dk));
    out *= ipow(p, (e[k - 1] - 1) * static_cast<int>(m - ck + 1));
  }
  return out;
}

/// Weakly decreasing exponent vectors summing to n, largest first.
inline std::vector<std::vector<int>> shapes_of(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int left, int cap) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (int k = std::min(left, cap); k >= 1; --k) {
      cur.push_back(k);
      rec(left - k, k);
      cur.pop_back();
    }
  };
  rec(n, n);
  return out;
}

namespace detail {

constexpr Int kMaxCensusAut = 200000;
constexpr double kMaxNaiveTables = 268435456.0;  // 2^28

using TableKey = std::u16string;

inline TableKey table_key(const Table& t) {
  TableKey k(t.size(), u'\0');
  for (std::size_t i = 0; i < t.size(); ++i) k[i] = static_cast<char16_t>(t[i]);
  return k;
}

/// Associativity of a raw table on basis triples, with entries already
/// reduced.
inline bool table_associative(const Table& c, const std::vector<Int>& mod) {
  const std::size_t m = mod.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t q = 0; q < m; ++q) {
          Int lhs = 0, rhs = 0;
          for (std::size_t l = 0; l < m; ++l) {
            lhs += c[(i * m + j) * m + l] * c[(l * m + k) * m + q];
            rhs += c[(j * m + k) * m + l] * c[(i * m + l) * m + q];
          }
          if ((lhs - rhs) % mod[q] != 0) return false;
        }
  return true;
}

/// Values allowed for c_ij^l: multiples of p^need below p^{k_l}.
inline std::vector<Int> entry_values(const AdditiveShape& sh, std::size_t i, std::size_t j, std::size_t l) {
  const int need = std::max(0, sh.exponent(l) - std::min(sh.exponent(i), sh.exponent(j)));
  std::vector<Int> v;
  for (Int x = 0; x < sh.modulus(l); x += ipow(sh.p(), need)) v.push_back(x);
  return v;
}

inline std::vector<Int> moduli(const AdditiveShape& sh) {
  std::vector<Int> m;
  for (std::size_t i = 0; i < sh.rank(); ++i) m.push_back(sh.modulus(i));
  return m;
}

/// Walks the orbit of R under Aut(R,+); calls keep(table) on each table and
/// returns the canonical (least) one.
inline Table walk_orbit(const FiniteRing& R, const std::function<void(const Table&)>& keep) {
  Table best = R.table();
  const std::size_t m = R.rank();
  for_each_basis_table(R, [&](const Table& t) {
    keep(t);
    if (compare_canonical(t, best, m) < 0) best = t;
  });
  return best;
}

// ---------------------------------------------------------------- naive

inline std::vector<FiniteRing> naive_shape(const AdditiveShape& sh) {
  const std::size_t m = sh.rank();
  std::vector<std::vector<Int>> values;
  double raw = 1;
  for (std::size_t idx = 0; idx < m * m * m; ++idx) {
    values.push_back(entry_values(sh, idx / (m * m), (idx / m) % m, idx % m));
    raw *= static_cast<double>(values.back().size());
  }
  if (raw > kMaxNaiveTables)
    throw Error(Errc::BudgetExceeded, "naive census of shape " + sh.to_string() + " needs " + std::to_string(raw) + " tables");
  const auto mod = moduli(sh);
  std::vector<FiniteRing> reps;
  std::map<std::map<ElementSignature, std::size_t>, std::vector<std::size_t>> buckets;
  Table t(m * m * m, 0);
  std::vector<std::size_t> digit(t.size(), 0);
  for (;;) {
    if (table_associative(t, mod)) {
      FiniteRing R = make_ring(sh, t);
      auto& bucket = buckets[signature_histogram(R)];
      bool found = false;
      for (std::size_t r : bucket)
        if (is_isomorphic(reps[r], R)) {
          found = true;
          break;
        }
      if (!found) {
        bucket.push_back(reps.size());
        reps.push_back(std::move(R));
      }
    }
    std::size_t z = 0;
    while (z < t.size() && ++digit[z] == values[z].size()) {
      digit[z] = 0;
      t[z] = 0;
      ++z;
    }
    if (z == t.size()) break;
    t[z] = values[z][digit[z]];
  }
  return reps;
}

// ---------------------------------------------------------------- pruned

using FlatMat = std::vector<Int>;  // e x e, row major, entries mod p

inline FlatMat mat_mul(const FlatMat& a, const FlatMat& b, std::size_t e, Int p) {
  FlatMat c(e * e, 0);
  for (std::size_t i = 0; i < e; ++i)
    for (std::size_t k = 0; k < e; ++k) {
      if (!a[i * e + k]) continue;
      for (std::size_t j = 0; j < e; ++j) c[i * e + j] = (c[i * e + j] + a[i * e + k] * b[k * e + j]) % p;
    }
  return c;
}

/// Tuples (M_0..M_{d-1}) of e x e matrices with M_a M_b = sum_k c_ab^k M_k
/// (left) or M_b M_a = sum_k c_ab^k M_k (right), S of rank d.
inline std::vector<std::vector<FlatMat>> representations(const FiniteRing& S, std::size_t e, bool right) {
  const std::size_t d = S.rank();
  const Int p = S.p();
  std::vector<std::vector<FlatMat>> out;
  std::vector<FlatMat> cur(d);
  const Int count = ipow(p, static_cast<int>(e * e));
  // checks completing at index i: pairs (a,b) whose support and indices are <= i
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> checks(d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      std::size_t top = std::max(a, b);
      for (std::size_t k = 0; k < d; ++k)
        if (S.c(a, b, k)) top = std::max(top, k);
      checks[top].emplace_back(a, b);
    }
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == d) {
      out.push_back(cur);
      return;
    }
    for (Int code = 0; code < count; ++code) {
      FlatMat M(e * e);
      Int x = code;
      for (auto& v : M) {
        v = x % p;
        x /= p;
      }
      cur[i] = std::move(M);
      bool ok = true;
      for (auto [a, b] : checks[i]) {
        FlatMat lhs = right ? mat_mul(cur[b], cur[a], e, p) : mat_mul(cur[a], cur[b], e, p);
        FlatMat rhs(e * e, 0);
        for (std::size_t k = 0; k < d; ++k)
          if (S.c(a, b, k))
            for (std::size_t z = 0; z < e * e; ++z) rhs[z] = (rhs[z] + S.c(a, b, k) * cur[k][z]) % p;
        if (lhs != rhs) {
          ok = false;
          break;
        }
      }
      if (ok) rec(i + 1);
    }
  };
  rec(0);
  return out;
}

/// Associative F_p tables of rank e with x_a x_b in span(x_l : l > max(a,b)).
inline std::vector<Table> strictly_upper_tables(Int p, std::size_t e) {
  std::vector<std::size_t> slots;
  for (std::size_t a = 0; a < e; ++a)
    for (std::size_t b = 0; b < e; ++b)
      for (std::size_t l = std::max(a, b) + 1; l < e; ++l) slots.push_back((a * e + b) * e + l);
  const std::vector<Int> mod(e, p);
  std::vector<Table> out;
  Table t(e * e * e, 0);
  for (;;) {
    if (table_associative(t, mod)) out.push_back(t);
    std::size_t z = 0;
    while (z < slots.size() && ++t[slots[z]] == p) t[slots[z++]] = 0;
    if (z == slots.size()) break;
  }
  return out;
}

/// Semisimple F_p-algebras of rank d as fixed tables (rank 0: empty).
inline std::vector<FiniteRing> semisimple_catalogue(Int p, int d) {
  std::vector<FiniteRing> out;
  for (const auto& desc : descriptors_of_order(d, 1)) out.push_back(build_coefficient_ring(p, desc));
  return out;
}

/// The normal form the elementary search emits: the first d basis vectors
/// multiply as `S`, the rest span an ideal with strictly upper products.
inline bool in_normal_form(const Table& t, std::size_t n, const FiniteRing& S) {
  const std::size_t d = S.rank();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) {
        const Int x = t[(i * n + j) * n + l];
        if (i < d && j < d) {
          if (x != (l < d ? S.c(i, j, l) : 0)) return false;
        } else if (i < d || j < d) {
          if (l < d && x) return false;
        } else if (l <= std::max(i, j) && x) {
          return false;
        }
      }
  return true;
}

struct ClassSink {
  std::vector<FiniteRing> classes;  // canonical tables
};

/// Classes of F_p-algebras of dimension n.
inline std::vector<FiniteRing> pruned_elementary(Int p, int n) {
  const auto un = static_cast<std::size_t>(n);
  const AdditiveShape sh = AdditiveShape::uniform(p, n);
  const std::vector<Int> mod(un, p);
  std::vector<FiniteRing> classes;
  std::unordered_set<TableKey> seen;
  for (int d = 0; d <= n; ++d) {
    const auto ud = static_cast<std::size_t>(d), e = un - ud;
    const auto jt = strictly_upper_tables(p, e);
    std::vector<FiniteRing> catalogue = d == 0 ? std::vector<FiniteRing>{null_ring(AdditiveShape(p, {}))} : semisimple_catalogue(p, d);
    for (const FiniteRing& S : catalogue) {
      const auto lefts = representations(S, e, false);
      const auto rights = representations(S, e, true);
      for (const auto& L : lefts)
        for (const auto& R : rights) {
          bool commute = true;
          for (std::size_t a = 0; a < ud && commute; ++a)
            for (std::size_t b = 0; b < ud && commute; ++b)
              commute = mat_mul(L[a], R[b], e, p) == mat_mul(R[b], L[a], e, p);
          if (!commute) continue;
          Table t(un * un * un, 0);
          for (std::size_t i = 0; i < ud; ++i)
            for (std::size_t j = 0; j < ud; ++j)
              for (std::size_t l = 0; l < ud; ++l) t[(i * un + j) * un + l] = S.c(i, j, l);
          // s_i x_a = sum_b L[b][a] x_b; x_a s_i = sum_b R[b][a] x_b
          for (std::size_t i = 0; i < ud; ++i)
            for (std::size_t a = 0; a < e; ++a)
              for (std::size_t b = 0; b < e; ++b) {
                t[(i * un + ud + a) * un + ud + b] = L[i][b * e + a];
                t[((ud + a) * un + i) * un + ud + b] = R[i][b * e + a];
              }
          for (const Table& J : jt) {
            for (std::size_t a = 0; a < e; ++a)
              for (std::size_t b = 0; b < e; ++b)
                for (std::size_t l = 0; l < e; ++l) t[((ud + a) * un + ud + b) * un + ud + l] = J[(a * e + b) * e + l];
            if (seen.count(table_key(t)) || !table_associative(t, mod)) continue;
            const FiniteRing A = make_ring(sh, t);
            const Table best = walk_orbit(A, [&](const Table& u) {
              if (in_normal_form(u, un, S)) seen.insert(table_key(u));
            });
            classes.push_back(make_ring(sh, best));
          }
        }
    }
  }
  return classes;
}

/// Every associative table on F_p^m.
inline std::vector<Table> all_algebra_tables(Int p, int m, const std::vector<FiniteRing>& classes) {
  std::unordered_set<TableKey> seen;
  std::vector<Table> out;
  for (const auto& C : classes)
    for_each_basis_table(C, [&](const Table& t) {
      if (seen.insert(table_key(t)).second) out.push_back(t);
    });
  (void)p;
  (void)m;
  return out;
}

/// Classes of a non-elementary shape, by lifting the tables mod p.
inline std::vector<FiniteRing> pruned_lifted(const AdditiveShape& sh, const std::vector<Table>& mod_p_tables) {
  const std::size_t m = sh.rank();
  const Int p = sh.p();
  const auto mod = moduli(sh);
  // per entry: the allowed values congruent to each residue mod p
  std::vector<std::vector<Int>> values(m * m * m);
  for (std::size_t idx = 0; idx < values.size(); ++idx) values[idx] = entry_values(sh, idx / (m * m), (idx / m) % m, idx % m);
  std::vector<FiniteRing> classes;
  std::unordered_set<TableKey> seen;
  Table t(m * m * m);
  for (const Table& base : mod_p_tables) {
    std::vector<std::vector<Int>> opts(values.size());
    bool ok = true;
    for (std::size_t idx = 0; idx < values.size() && ok; ++idx) {
      for (Int v : values[idx])
        if (v % p == base[idx]) opts[idx].push_back(v);
      ok = !opts[idx].empty();
    }
    if (!ok) continue;
    std::vector<std::size_t> digit(t.size(), 0);
    for (std::size_t idx = 0; idx < t.size(); ++idx) t[idx] = opts[idx][0];
    for (;;) {
      if (!seen.count(table_key(t)) && table_associative(t, mod)) {
        const FiniteRing R = make_ring(sh, t);
        const Table best = walk_orbit(R, [&](const Table& u) { seen.insert(table_key(u)); });
        classes.push_back(make_ring(sh, best));
      }
      std::size_t z = 0;
      while (z < t.size() && ++digit[z] == opts[z].size()) {
        digit[z] = 0;
        t[z] = opts[z][0];
        ++z;
      }
      if (z == t.size()) break;
      t[z] = opts[z][digit[z]];
    }
  }
  return classes;
}

inline bool record_less(const CensusRecord& a, const CensusRecord& b) {
  if (a.ring.shape() != b.ring.shape()) return a.ring.shape().exponents() > b.ring.shape().exponents();
  return compare_canonical(a.ring.table(), b.ring.table(), a.ring.rank()) < 0;
}

}  // namespace detail

/// One record per isomorphism class of rings of order p^n passing the
/// filter, sorted by shape (largest exponents first) then canonical table.
inline std::vector<CensusRecord> enumerate_rings(Int p, int n, const CensusFilter& filter = {},
                                                 CensusStrategy strategy = CensusStrategy::Pruned, Int budget = census_budget()) {
  if (!is_prime(p) || n < 1) throw Error(Errc::ParameterOutOfRange, "census needs p prime and n >= 1");
  if (n > 62 || ipow(p, n) > budget)
    throw Error(Errc::BudgetExceeded, std::to_string(p) + "^" + std::to_string(n) + " exceeds the census budget " + std::to_string(budget));
  std::vector<std::vector<int>> shapes;
  for (auto& s : shapes_of(n))
    if (!filter.shape || *filter.shape == s) shapes.push_back(s);

  std::vector<std::vector<FiniteRing>> per_shape(shapes.size());
  if (strategy == CensusStrategy::Naive) {
    std::vector<std::future<std::vector<FiniteRing>>> jobs;
    for (const auto& s : shapes) {
      const AdditiveShape sh(p, s);
      jobs.push_back(std::async(std::launch::async, [sh] {
        auto reps = detail::naive_shape(sh);
        for (auto& R : reps) R = canonical_form(R);
        return reps;
      }));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) per_shape[i] = jobs[i].get();
  } else {
    if (Int g = automorphism_group_order(AdditiveShape::uniform(p, n)); g > detail::kMaxCensusAut)
      throw Error(Errc::BudgetExceeded, "pruned census at " + std::to_string(p) + "^" + std::to_string(n) +
                                            " walks orbits of size up to " + std::to_string(g));
    // tables mod p for every rank needed by a non-elementary shape
    std::map<int, std::vector<Table>> mod_p_tables;
    for (const auto& s : shapes) {
      const int m = static_cast<int>(s.size());
      if (s.front() > 1 && !mod_p_tables.count(m))
        mod_p_tables[m] = detail::all_algebra_tables(p, m, detail::pruned_elementary(p, m));
    }
    std::vector<std::future<std::vector<FiniteRing>>> jobs;
    for (const auto& s : shapes) {
      const AdditiveShape sh(p, s);
      if (s.front() == 1)
        jobs.push_back(std::async(std::launch::async, [p, n] { return detail::pruned_elementary(p, n); }));
      else
        jobs.push_back(std::async(std::launch::async, [sh, &mod_p_tables] {
          return detail::pruned_lifted(sh, mod_p_tables.at(static_cast<int>(sh.rank())));
        }));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) per_shape[i] = jobs[i].get();
  }
  std::vector<CensusRecord> out;
  for (const auto& bucket : per_shape)
    for (const auto& R : bucket) {
      CensusRecord rec = CensusRecord::of(R, to_string(strategy));
      if (filter.accepts(rec)) out.push_back(std::move(rec));
    }
  std::sort(out.begin(), out.end(), detail::record_less);
  return out;
}

struct CensusStatistics {
  std::size_t total = 0, nilpotent = 0, commutative = 0, unital = 0;
  std::map<int, std::size_t> quotient_at_least;  // s -> classes with |R/J| >= p^s
  std::map<std::string, std::size_t> by_shape;
};

inline CensusStatistics census_statistics(const std::vector<CensusRecord>& records) {
  CensusStatistics st;
  int top = 0;
  for (const auto& r : records) top = std::max(top, r.ring.shape().n());
  for (int s = 0; s <= top; ++s) st.quotient_at_least[s] = 0;
  for (const auto& r : records) {
    ++st.total;
    st.nilpotent += r.nilpotent;
    st.commutative += r.commutative;
    st.unital += r.has_identity;
    ++st.by_shape[r.ring.shape().to_string()];
    for (int s = 0; s <= r.quotient_exponent; ++s) ++st.quotient_at_least[s];
  }
  return st;
}

// ---------------------------------------------------------------- files

namespace detail {

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(Errc::ChecksumMismatch, "SHA-256 digest failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

inline std::string census_record_line(const CensusRecord& r) {
  return "shape=" + r.ring.shape().to_string() + "|c=" + join(r.ring.table()) + "|flags=nil:" + (r.nilpotent ? "1" : "0") +
         ",comm:" + (r.commutative ? "1" : "0") + ",id:" + (r.has_identity ? "1" : "0") + ",jexp:" + std::to_string(r.j_exponent);
}

}  // namespace detail

/// Census text: header, one line per record, then the SHA-256 of the
/// header and record lines.
inline std::string format_census(Int p, int n, std::vector<CensusRecord> records) {
  std::sort(records.begin(), records.end(), detail::record_less);
  std::string body = "finring-census v1; p=" + std::to_string(p) + "; n=" + std::to_string(n) +
                     "; count=" + std::to_string(records.size()) + "\n";
  for (const auto& r : records) body += detail::census_record_line(r) + "\n";
  return body + "sha: " + detail::sha256_hex(body) + "\n";
}

struct CensusFile {
  Int p = 2;
  int n = 0;
  std::vector<CensusRecord> records;
};

inline CensusFile parse_census(const std::string& text) {
  auto fail = [](std::size_t line, const std::string& what) {
    return Error(Errc::ParseError, "line " + std::to_string(line) + ": " + what);
  };
  std::istringstream in(text);
  std::string line, body;
  std::size_t ln = 0;
  CensusFile f;
  std::size_t count = 0;
  std::optional<std::string> sha;
  while (std::getline(in, line)) {
    ++ln;
    if (sha) throw fail(ln, "content after the checksum line");
    if (ln == 1) {
      long long p = 0, c = 0;
      int n = 0;
      char tail = 0;
      if (std::sscanf(line.c_str(), "finring-census v1; p=%lld; n=%d; count=%lld%c", &p, &n, &c, &tail) != 3 || c < 0)
        throw fail(ln, "expected 'finring-census v1; p=<p>; n=<n>; count=<c>'");
      if (!is_prime(p) || n < 1) throw fail(ln, "bad p or n in header");
      f.p = p;
      f.n = n;
      count = static_cast<std::size_t>(c);
      body += line + "\n";
      continue;
    }
    if (line.rfind("sha: ", 0) == 0) {
      sha = line.substr(5);
      continue;
    }
    body += line + "\n";
    const auto bar1 = line.find('|'), bar2 = line.find('|', bar1 == std::string::npos ? 0 : bar1 + 1);
    if (line.rfind("shape=", 0) != 0 || bar1 == std::string::npos || bar2 == std::string::npos ||
        line.compare(bar1 + 1, 2, "c=") != 0 || line.compare(bar2 + 1, 6, "flags=") != 0)
      throw fail(ln, "expected 'shape=...|c=...|flags=...'");
    try {
      std::vector<int> ks;
      for (Int k : detail::parse_int_list(line.substr(6, bar1 - 6), ln)) ks.push_back(static_cast<int>(k));
      const AdditiveShape sh(f.p, ks);
      if (sh.n() != f.n) throw fail(ln, "shape does not have order p^n");
      const Table t = detail::parse_int_list(line.substr(bar1 + 3, bar2 - bar1 - 3), ln);
      CensusRecord r = CensusRecord::of(make_ring(sh, t), "file");
      if (r.ring.table() != t) throw fail(ln, "entries not reduced");
      const std::string expect = detail::census_record_line(r);
      if (line.substr(bar2) != expect.substr(expect.find("|flags="))) throw fail(ln, "flags disagree with the table");
      f.records.push_back(std::move(r));
    } catch (const Error& e) {
      if (e.code() == Errc::ParseError) throw;
      throw fail(ln, e.what());
    }
  }
  if (ln == 0) throw fail(1, "empty census file");
  if (!sha) throw fail(ln + 1, "missing checksum line");
  if (f.records.size() != count) throw fail(ln, "header count " + std::to_string(count) + " but " + std::to_string(f.records.size()) + " records");
  if (*sha != detail::sha256_hex(body)) throw Error(Errc::ChecksumMismatch, "census body does not match its SHA-256");
  return f;
}

inline void write_census(const std::string& path, Int p, int n, const std::vector<CensusRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::ParseError, "cannot write " + path);
  out << format_census(p, n, records);
}

inline CensusFile read_census(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_census(ss.str());
}

// ------------------------------------------------------ cube-zero classes

struct CubeZeroClass {
  FiniteRing algebra;
  FiltrationProfile profile;
};

/// F_p-algebras A of dimension n with A^3 = 0 (commutative ones if asked),
/// one per isomorphism class. Such an A of rank r modulo A^2 is F/I for the
/// free (commutative) cube-zero algebra F on x_1..x_r and a subspace I of F^2;
/// I is recorded by t = n - r functionals spanning its annihilator, and the
/// classes are the GL(r, p)-orbits of those annihilators.
inline std::vector<CubeZeroClass> cube_zero_classes(Int p, int n, bool commutative) {
  if (!is_prime(p) || n < 1) throw Error(Errc::ParameterOutOfRange, "cube_zero_classes needs p prime and n >= 1");
  std::vector<CubeZeroClass> out;
  const PrimePower Fp(p, 1);
  for (int r = 1; r <= n; ++r) {
    const auto ur = static_cast<std::size_t>(r);
    // monomials x_a x_b (a <= b when commutative)
    std::vector<std::pair<std::size_t, std::size_t>> mono;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> pos;
    for (std::size_t a = 0; a < ur; ++a)
      for (std::size_t b = commutative ? a : 0; b < ur; ++b) {
        pos[{a, b}] = mono.size();
        mono.emplace_back(a, b);
      }
    auto at = [&](std::size_t a, std::size_t b) { return pos.at(commutative && a > b ? std::make_pair(b, a) : std::make_pair(a, b)); };
    const std::size_t D = mono.size();
    const auto t = static_cast<std::size_t>(n - r);
    if (t > D) continue;
    // g[c][a]: coefficient of x_c in g(x_a). A functional f on F^2 moves to
    // f o g^{-1}; acting with the inverse generators gives f o g instead,
    // which has the same orbits.
    auto pullback = [&](const Mat& g) {
      Mat M(D, Vec(D, 0));  // (f o g)(mono j) = sum_i f(mono i) M[i][j]
      for (std::size_t j = 0; j < D; ++j) {
        const auto [a, b] = mono[j];
        for (std::size_t c = 0; c < ur; ++c)
          for (std::size_t e = 0; e < ur; ++e) {
            const Int w = g[c][a] * g[e][b] % p;
            if (w) M[at(c, e)][j] = (M[at(c, e)][j] + w) % p;
          }
      }
      return M;
    };
    std::vector<Mat> gens;
    for (std::size_t i = 0; i < ur; ++i)
      for (std::size_t j = 0; j < ur; ++j)
        if (i != j) {
          Mat g = identity_matrix(ur);
          g[j][i] = 1;  // x_i -> x_i + x_j
          gens.push_back(pullback(g));
        }
    if (p > 2) {
      Int gen = 2;
      for (;; ++gen) {
        bool primitive = true;
        for (int k = 1; k < p - 1 && primitive; ++k) primitive = ipow(gen, k) % p != 1;
        if (primitive) break;
      }
      Mat g = identity_matrix(ur);
      g[0][0] = gen;
      gens.push_back(pullback(g));
    }
    std::vector<Mat> spaces;
    std::unordered_map<std::string, std::size_t> index;
    auto key_of = [](const Mat& rows) {
      std::string s;
      for (const auto& row : rows)
        for (Int x : row) s += static_cast<char>(x);
      return s;
    };
    for_each_subspace(p, D, t, [&](const Mat& rows) {
      Mat h = howell_form(rows, Fp);
      index.emplace(key_of(h), spaces.size());
      spaces.push_back(std::move(h));
      return true;
    });
    if (t == 0) spaces.assign(1, Mat{});
    std::vector<bool> visited(spaces.size(), false);
    for (std::size_t start = 0; start < spaces.size(); ++start) {
      if (visited[start]) continue;
      visited[start] = true;
      std::vector<std::size_t> queue{start};
      for (std::size_t qi = 0; qi < queue.size() && t > 0; ++qi) {
        const Mat& rows = spaces[queue[qi]];
        for (const Mat& M : gens) {
          Mat img(rows.size(), Vec(D, 0));
          for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t i = 0; i < D; ++i)
              if (rows[a][i])
                for (std::size_t j = 0; j < D; ++j) img[a][j] = (img[a][j] + rows[a][i] * M[i][j]) % p;
          const std::size_t id = index.at(key_of(howell_form(img, Fp)));
          if (!visited[id]) {
            visited[id] = true;
            queue.push_back(id);
          }
        }
      }
      // A = F/I on x_1..x_r, y_1..y_t with x_a x_b = sum_q f_q(x_a x_b) y_q
      const std::size_t nn = ur + t;
      Table tab(nn * nn * nn, 0);
      for (std::size_t a = 0; a < ur; ++a)
        for (std::size_t b = 0; b < ur; ++b)
          for (std::size_t q = 0; q < t; ++q) tab[(a * nn + b) * nn + ur + q] = spaces[start][q][at(a, b)];
      FiniteRing A = make_ring(AdditiveShape::uniform(p, static_cast<int>(nn)), tab);
      FiltrationProfile prof = filtration_profile(A);
      out.push_back({std::move(A), std::move(prof)});
    }
  }
  return out;
}

}  // namespace finring
