#pragma once

// Plain-text ring records:
//   p=<p>;shape=<k1>,<k2>,...
//   c[i][j]=<a1>,...,<am>      (m*m lines, row-major, 1-based)
// Blank lines and lines starting with '#' are ignored.

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "finring/error.hpp"
#include "finring/ring.hpp"

namespace finring {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<Int> parse_int_list(const std::string& s, std::size_t line) {
  std::vector<Int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
      throw Error(Errc::ParseError, "line " + std::to_string(line) + ": expected a non-negative integer, got '" + tok + "'");
    out.push_back(std::stoll(tok));
  }
  return out;
}

inline std::string join(const std::vector<Int>& v, char sep = ',') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace detail

inline std::string format_ring(const FiniteRing& R) {
  std::string out = "p=" + std::to_string(R.p()) + ";shape=" + R.shape().to_string() + "\n";
  const std::size_t m = R.rank();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<Int> row(R.table().begin() + static_cast<std::ptrdiff_t>((i * m + j) * m),
                           R.table().begin() + static_cast<std::ptrdiff_t>((i * m + j + 1) * m));
      out += "c[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]=" + detail::join(row) + "\n";
    }
  return out;
}

/// Header and table of one record before validation.
struct RawRingRecord {
  Int p = 0;
  std::vector<int> shape;
  Table table;
  std::vector<std::string> trailer;  // unrecognised key=value lines after the table
};

/// Reads every record in the stream. `first_line` offsets reported line numbers.
inline std::vector<RawRingRecord> parse_raw_records(std::istream& in, std::size_t first_line = 1) {
  std::vector<RawRingRecord> recs;
  std::string line;
  std::size_t ln = first_line - 1;
  std::size_t expect = 0;  // index of the next c[i][j] line in the current record
  while (std::getline(in, line)) {
    ++ln;
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("p=", 0) == 0) {
      if (!recs.empty() && expect < recs.back().shape.size() * recs.back().shape.size())
        throw Error(Errc::ParseError, "line " + std::to_string(ln) + ": previous record is incomplete");
      const auto semi = line.find(';');
      if (semi == std::string::npos || line.compare(semi + 1, 6, "shape=") != 0)
        throw Error(Errc::ParseError, "line " + std::to_string(ln) + ": expected 'p=<p>;shape=<k1>,...'");
      RawRingRecord r;
      auto pv = detail::parse_int_list(line.substr(2, semi - 2), ln);
      if (pv.size() != 1) throw Error(Errc::ParseError, "line " + std::to_string(ln) + ": bad prime");
      r.p = pv[0];
      for (Int k : detail::parse_int_list(line.substr(semi + 7), ln)) r.shape.push_back(static_cast<int>(k));
      if (r.shape.empty()) throw Error(Errc::ParseError, "line " + std::to_string(ln) + ": empty shape");
      r.table.assign(r.shape.size() * r.shape.size() * r.shape.size(), 0);
      recs.push_back(std::move(r));
      expect = 0;
      continue;
    }
    if (recs.empty()) throw Error(Errc::ParseError, "line " + std::to_string(ln) + ": record must start with 'p='");
    auto& r = recs.back();
    const std::size_t m = r.shape.size();
    if (line.rfind("c[", 0) == 0) {
      const auto eq = line.find('=');
      const auto b1 = line.find("][");
      if (eq == std::string::npos || b1 == std::string::npos || b1 > eq)
        throw Error(Errc::ParseError, "line " + std::to_string(ln) + ": expected 'c[i][j]=...'");
      const auto iv = detail::parse_int_list(line.substr(2, b1 - 2), ln);
      const auto jv = detail::parse_int_list(line.substr(b1 + 2, eq - 1 - (b1 + 2)), ln);
      if (iv.size() != 1 || jv.size() != 1 || line[eq - 1] != ']')
        throw Error(Errc::ParseError, "line " + std::to_string(ln) + ": bad index");
      const std::size_t i = static_cast<std::size_t>(iv[0]), j = static_cast<std::size_t>(jv[0]);
      if (expect >= m * m || i != expect / m + 1 || j != expect % m + 1)
        throw Error(Errc::ParseError, "line " + std::to_string(ln) + ": entries must appear in row-major order");
      const auto vals = detail::parse_int_list(line.substr(eq + 1), ln);
      if (vals.size() != m)
        throw Error(Errc::ParseError, "line " + std::to_string(ln) + ": expected " + std::to_string(m) + " entries");
      for (std::size_t l = 0; l < m; ++l) {
        const Int mod = ipow(r.p, r.shape[l]);
        if (vals[l] >= mod)
          throw Error(Errc::ParseError, "line " + std::to_string(ln) + ": entry " + std::to_string(vals[l]) +
                                            " out of range for modulus " + std::to_string(mod));
        r.table[((i - 1) * m + (j - 1)) * m + l] = vals[l];
      }
      ++expect;
      continue;
    }
    if (expect == m * m && line.find('=') != std::string::npos) {
      r.trailer.push_back(line);
      continue;
    }
    throw Error(Errc::ParseError, "line " + std::to_string(ln) + ": unexpected '" + line + "'");
  }
  if (!recs.empty() && expect < recs.back().shape.size() * recs.back().shape.size())
    throw Error(Errc::ParseError, "line " + std::to_string(ln) + ": record is incomplete");
  return recs;
}

inline FiniteRing ring_from_raw(const RawRingRecord& r) {
  return make_ring(AdditiveShape(r.p, r.shape), r.table);
}

inline std::vector<FiniteRing> parse_rings(std::istream& in) {
  std::vector<FiniteRing> out;
  for (const auto& r : parse_raw_records(in)) out.push_back(ring_from_raw(r));
  return out;
}

inline FiniteRing parse_ring(const std::string& text) {
  std::istringstream in(text);
  auto rs = parse_rings(in);
  if (rs.size() != 1) throw Error(Errc::ParseError, "expected exactly one ring record, found " + std::to_string(rs.size()));
  return rs.front();
}

inline std::string format_element(const RingElement& a) { return "(" + detail::join(a) + ")"; }

/// Parses "a1,a2,...,am" (parentheses optional).
inline RingElement parse_element(std::string s) {
  s = detail::trim(s);
  if (!s.empty() && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
  std::vector<Int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = detail::trim(tok);
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(Errc::ParseError, "bad element coordinate '" + tok + "'");
    }
  }
  return out;
}

}  // namespace finring
