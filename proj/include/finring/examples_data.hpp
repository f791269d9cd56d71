#pragma once

// The flattening counterexamples, stored as ring records.

#include <string>
#include <utility>
#include <vector>

#include "finring/format.hpp"

namespace finring::examples {

// Z/8Z.
inline const char* const kZ8 =
    "p=2;shape=3\n"
    "c[1][1]=1\n";

// F_2[X]/(X^3) on the basis 1, X, X^2.
inline const char* const kF2TruncatedCubic =
    "p=2;shape=1,1,1\n"
    "c[1][1]=1,0,0\nc[1][2]=0,1,0\nc[1][3]=0,0,1\n"
    "c[2][1]=0,1,0\nc[2][2]=0,0,1\nc[2][3]=0,0,0\n"
    "c[3][1]=0,0,1\nc[3][2]=0,0,0\nc[3][3]=0,0,0\n";

// p = 3, C(9)+C(9): x1^2 = 5x2, x1x2 = x2x1 = x1+x2, x2^2 = 2x1+3x2.
inline const char* const kNonAssocFlattening =
    "p=3;shape=2,2\n"
    "c[1][1]=0,5\nc[1][2]=1,1\n"
    "c[2][1]=1,1\nc[2][2]=2,3\n";

// The same ring on the basis e = 7x1+x2 (identity), x = 4e+x1: x^2 = 3e.
inline const char* const kUnitalXSquared3e =
    "p=3;shape=2,2\n"
    "c[1][1]=1,0\nc[1][2]=0,1\n"
    "c[2][1]=0,1\nc[2][2]=3,0\n";

// e identity, x^2 = 6e. Not isomorphic to the previous ring.
inline const char* const kUnitalXSquared6e =
    "p=3;shape=2,2\n"
    "c[1][1]=1,0\nc[1][2]=0,1\n"
    "c[2][1]=0,1\nc[2][2]=6,0\n";

// F_3[X]/(X^4) on the basis 1, X, X^2, X^3.
inline const char* const kF3TruncatedQuartic =
    "p=3;shape=1,1,1,1\n"
    "c[1][1]=1,0,0,0\nc[1][2]=0,1,0,0\nc[1][3]=0,0,1,0\nc[1][4]=0,0,0,1\n"
    "c[2][1]=0,1,0,0\nc[2][2]=0,0,1,0\nc[2][3]=0,0,0,1\nc[2][4]=0,0,0,0\n"
    "c[3][1]=0,0,1,0\nc[3][2]=0,0,0,1\nc[3][3]=0,0,0,0\nc[3][4]=0,0,0,0\n"
    "c[4][1]=0,0,0,1\nc[4][2]=0,0,0,0\nc[4][3]=0,0,0,0\nc[4][4]=0,0,0,0\n";

// Four F_2-algebras on (e, x) with e^2 = e, x^2 = 0 and radical <x>.
inline const char* const kIdemBoth =  // ex = xe = x
    "p=2;shape=1,1\nc[1][1]=1,0\nc[1][2]=0,1\nc[2][1]=0,1\nc[2][2]=0,0\n";
inline const char* const kIdemNeither =  // ex = xe = 0
    "p=2;shape=1,1\nc[1][1]=1,0\nc[1][2]=0,0\nc[2][1]=0,0\nc[2][2]=0,0\n";
inline const char* const kIdemLeft =  // ex = x, xe = 0
    "p=2;shape=1,1\nc[1][1]=1,0\nc[1][2]=0,1\nc[2][1]=0,0\nc[2][2]=0,0\n";
inline const char* const kIdemRight =  // ex = 0, xe = x
    "p=2;shape=1,1\nc[1][1]=1,0\nc[1][2]=0,0\nc[2][1]=0,1\nc[2][2]=0,0\n";

inline std::vector<std::pair<std::string, const char*>> named_records() {
  return {{"z8", kZ8},
          {"f2-cubic", kF2TruncatedCubic},
          {"nonassoc-flattening", kNonAssocFlattening},
          {"x2-3e", kUnitalXSquared3e},
          {"x2-6e", kUnitalXSquared6e},
          {"f3-quartic", kF3TruncatedQuartic},
          {"idem-both", kIdemBoth},
          {"idem-neither", kIdemNeither},
          {"idem-left", kIdemLeft},
          {"idem-right", kIdemRight}};
}

inline FiniteRing ring(const char* record) { return parse_ring(record); }

}  // namespace finring::examples
