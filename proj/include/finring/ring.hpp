#pragma once

// Finite rings of order p^n given by structure constants over the additive
// group C(p^{k_1}) + ... + C(p^{k_m}), k_1 >= ... >= k_m >= 1.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "finring/error.hpp"
#include "finring/zmod.hpp"

namespace finring {

/// Coordinates (a_1, ..., a_m) of sum a_i x_i with 0 <= a_i < p^{k_i}.
using RingElement = Vec;

class AdditiveShape {
 public:
  AdditiveShape() = default;

  AdditiveShape(Int p, std::vector<int> exponents) : p_(p), exps_(std::move(exponents)) {
    if (!is_prime(p_)) throw Error(Errc::ParameterOutOfRange, "p=" + std::to_string(p_) + " is not prime");
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      if (exps_[i] < 1) throw Error(Errc::ShapeMismatch, "exponents must be >= 1");
      if (i > 0 && exps_[i] > exps_[i - 1]) throw Error(Errc::ShapeMismatch, "exponents must be weakly decreasing");
    }
    mods_.clear();
    for (int k : exps_) mods_.push_back(ipow(p_, k));
  }

  /// Shape with m copies of exponent k.
  static AdditiveShape uniform(Int p, int m, int k = 1) { return {p, std::vector<int>(static_cast<std::size_t>(m), k)}; }

  Int p() const { return p_; }
  const std::vector<int>& exponents() const { return exps_; }
  int exponent(std::size_t i) const { return exps_[i]; }
  Int modulus(std::size_t i) const { return mods_[i]; }
  std::size_t rank() const { return exps_.size(); }
  int n() const {
    int s = 0;
    for (int k : exps_) s += k;
    return s;
  }
  /// 0 for the zero group (rank 0), which arises only as a quotient R/R.
  int max_exponent() const { return exps_.empty() ? 0 : exps_.front(); }
  Int order() const { return ipow(p_, n()); }
  PrimePower chain() const { return {p_, max_exponent()}; }
  bool elementary() const { return exps_.empty() || exps_.front() == 1; }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < exps_.size(); ++i) s += (i ? "," : "") + std::to_string(exps_[i]);
    return s;
  }

  bool operator==(const AdditiveShape& o) const { return p_ == o.p_ && exps_ == o.exps_; }
  auto operator<=>(const AdditiveShape& o) const {
    if (auto c = p_ <=> o.p_; c != 0) return c;
    return exps_ <=> o.exps_;
  }

 private:
  Int p_ = 2;
  std::vector<int> exps_{1};
  std::vector<Int> mods_{2};
};

/// Structure-constant table c[i][j][l] stored flat, i-major.
using Table = std::vector<Int>;

class FiniteRing {
 public:
  FiniteRing() = default;

  /// Validating constructor (make_ring). Reduces entries, then checks the
  /// characteristic congruence and associativity on all basis triples.
  static FiniteRing make(const AdditiveShape& shape, const Table& raw) {
    const std::size_t m = shape.rank();
    if (raw.size() != m * m * m)
      throw Error(Errc::ShapeMismatch, "table has " + std::to_string(raw.size()) + " entries, expected " +
                                           std::to_string(m * m * m));
    FiniteRing R;
    R.shape_ = shape;
    R.c_.resize(raw.size());
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t l = 0; l < m; ++l) {
          Int x = raw[(i * m + j) * m + l];
          if (x < 0) throw Error(Errc::ShapeMismatch, "negative structure constant");
          R.c_[(i * m + j) * m + l] = x % shape.modulus(l);
        }
    if (auto w = R.char_witness())
      throw Error(Errc::CharIncompatible, "c[" + std::to_string((*w)[0] + 1) + "][" + std::to_string((*w)[1] + 1) +
                                              "][" + std::to_string((*w)[2] + 1) + "] violates the characteristic congruence");
    if (auto w = R.associativity_witness())
      throw Error(Errc::NotAssociative, "(x" + std::to_string((*w)[0] + 1) + " x" + std::to_string((*w)[1] + 1) +
                                            ") x" + std::to_string((*w)[2] + 1) + " != x" + std::to_string((*w)[0] + 1) +
                                            " (x" + std::to_string((*w)[1] + 1) + " x" + std::to_string((*w)[2] + 1) + ")");
    R.validated_ = true;
    return R;
  }

  /// Table without the associativity check (entries are still reduced and
  /// the characteristic congruence still enforced). Used for product tables
  /// that are not known to be associative.
  static FiniteRing unchecked(const AdditiveShape& shape, const Table& raw) {
    const std::size_t m = shape.rank();
    if (raw.size() != m * m * m) throw Error(Errc::ShapeMismatch, "table has wrong size");
    FiniteRing R;
    R.shape_ = shape;
    R.c_.resize(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) R.c_[k] = floor_mod(raw[k], shape.modulus(k % m));
    if (R.char_witness()) throw Error(Errc::CharIncompatible, "table violates the characteristic congruence");
    return R;
  }

  /// Builds from x_i x_j given as elements (products[i*m+j]).
  static FiniteRing from_products(const AdditiveShape& shape, const std::vector<RingElement>& products) {
    const std::size_t m = shape.rank();
    Table t(m * m * m, 0);
    for (std::size_t ij = 0; ij < m * m; ++ij)
      for (std::size_t l = 0; l < m; ++l) t[ij * m + l] = floor_mod(products.at(ij).at(l), shape.modulus(l));
    return make(shape, t);
  }

  const AdditiveShape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.rank(); }
  Int p() const { return shape_.p(); }
  const Table& table() const { return c_; }
  bool validated() const { return validated_; }
  Int c(std::size_t i, std::size_t j, std::size_t l) const { return c_[(i * rank() + j) * rank() + l]; }
  Int order() const { return shape_.order(); }

  RingElement zero() const { return RingElement(rank(), 0); }
  RingElement basis(std::size_t i) const {
    RingElement e = zero();
    e[i] = 1;
    return e;
  }

  void check_conforms(const RingElement& a) const {
    if (a.size() != rank())
      throw Error(Errc::ShapeMismatch, "element has " + std::to_string(a.size()) + " coordinates, ring has rank " +
                                           std::to_string(rank()));
  }

  RingElement reduce(RingElement a) const {
    check_conforms(a);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = floor_mod(a[i], shape_.modulus(i));
    return a;
  }

  RingElement add(const RingElement& a, const RingElement& b) const {
    check_conforms(a);
    check_conforms(b);
    RingElement r(rank());
    for (std::size_t i = 0; i < rank(); ++i) r[i] = floor_mod(a[i] + b[i], shape_.modulus(i));
    return r;
  }

  RingElement sub(const RingElement& a, const RingElement& b) const { return add(a, neg(b)); }

  RingElement neg(const RingElement& a) const {
    check_conforms(a);
    RingElement r(rank());
    for (std::size_t i = 0; i < rank(); ++i) r[i] = floor_mod(-a[i], shape_.modulus(i));
    return r;
  }

  RingElement scale(Int k, const RingElement& a) const {
    check_conforms(a);
    RingElement r(rank());
    for (std::size_t i = 0; i < rank(); ++i) r[i] = floor_mod(floor_mod(k, shape_.modulus(i)) * a[i], shape_.modulus(i));
    return r;
  }

  RingElement mul(const RingElement& a, const RingElement& b) const {
    check_conforms(a);
    check_conforms(b);
    const std::size_t m = rank();
    RingElement r(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (b[j] == 0) continue;
        const Int* row = &c_[(i * m + j) * m];
        for (std::size_t l = 0; l < m; ++l) {
          if (row[l] == 0) continue;
          const Int M = shape_.modulus(l);
          r[l] = (r[l] + (a[i] % M) * (b[j] % M) % M * row[l]) % M;
        }
      }
    }
    return r;
  }

  bool is_zero(const RingElement& a) const {
    return std::all_of(a.begin(), a.end(), [](Int x) { return x == 0; });
  }

  /// Additive order of a, as an exponent of p.
  int order_exponent(const RingElement& a) const {
    int e = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
      if (a[i] == 0) continue;
      Int x = a[i];
      int v = 0;
      while (x % p() == 0) {
        x /= p();
        ++v;
      }
      e = std::max(e, shape_.exponent(i) - v);
    }
    return e;
  }

  bool is_commutative() const {
    const std::size_t m = rank();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        for (std::size_t l = 0; l < m; ++l)
          if (c(i, j, l) != c(j, i, l)) return false;
    return true;
  }

  bool is_null() const {
    return std::all_of(c_.begin(), c_.end(), [](Int x) { return x == 0; });
  }

  /// Mixed-radix index of an element (coordinate 0 most significant).
  std::size_t index_of(const RingElement& a) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < rank(); ++i) idx = idx * static_cast<std::size_t>(shape_.modulus(i)) + static_cast<std::size_t>(a[i]);
    return idx;
  }

  RingElement element(std::size_t idx) const {
    RingElement a(rank());
    for (std::size_t i = rank(); i-- > 0;) {
      const auto M = static_cast<std::size_t>(shape_.modulus(i));
      a[i] = static_cast<Int>(idx % M);
      idx /= M;
    }
    return a;
  }

  std::vector<RingElement> elements() const {
    std::vector<RingElement> out;
    const auto N = static_cast<std::size_t>(order());
    out.reserve(N);
    for (std::size_t k = 0; k < N; ++k) out.push_back(element(k));
    return out;
  }

  bool operator==(const FiniteRing& o) const { return shape_ == o.shape_ && c_ == o.c_; }

 private:
  std::optional<std::array<std::size_t, 3>> char_witness() const {
    const std::size_t m = rank();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t l = 0; l < m; ++l) {
          int need = shape_.exponent(l) - std::min(shape_.exponent(i), shape_.exponent(j));
          if (need > 0 && c(i, j, l) % ipow(p(), need) != 0) return std::array{i, j, l};
        }
    return std::nullopt;
  }

  std::optional<std::array<std::size_t, 3>> associativity_witness() const {
    const std::size_t m = rank();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        RingElement xij = mul(basis(i), basis(j));
        for (std::size_t k = 0; k < m; ++k) {
          if (mul(xij, basis(k)) != mul(basis(i), mul(basis(j), basis(k)))) return std::array{i, j, k};
        }
      }
    return std::nullopt;
  }

  AdditiveShape shape_;
  Table c_;
  bool validated_ = false;
};

/// make_ring: validated ring from a shape and a raw m*m*m table.
inline FiniteRing make_ring(const AdditiveShape& shape, const Table& raw) { return FiniteRing::make(shape, raw); }

/// Null ring (all products zero).
inline FiniteRing null_ring(const AdditiveShape& shape) {
  return FiniteRing::make(shape, Table(shape.rank() * shape.rank() * shape.rank(), 0));
}

}  // namespace finring
