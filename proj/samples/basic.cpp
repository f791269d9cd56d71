// Parse Z/8, inspect it, flatten it, and count rings of order 8.

#include <iostream>

#include "finring/census.hpp"
#include "finring/regression.hpp"

int main() {
  using namespace finring;
  const FiniteRing R = parse_ring(examples::kZ8);
  std::cout << "identity: " << format_element(*find_identity(R)) << "\n";
  std::cout << "unit group: " << detail::join(unit_group(R).abelian_invariants, 'x') << "\n";

  auto F = flatten(R);
  std::cout << "flattening associative: " << (check_associativity(F.table) ? "no" : "yes") << "\n";
  std::cout << "flattening = F2[X]/(X^3): " << (is_isomorphic(F.table.as_ring(), parse_ring(examples::kF2TruncatedCubic)) ? "yes" : "no")
            << "\n";

  std::cout << "rings of order 8: " << enumerate_rings(2, 3).size() << "\n";
}
