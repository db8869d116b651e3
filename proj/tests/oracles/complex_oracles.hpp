#pragma once

#include <array>
#include <vector>

#include <gmpxx.h>

#include "knotcert/triangulation.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<mpz_class>>;

/// Nonzero invariant factors of an integer matrix (Smith normal form diagonal).
std::vector<mpz_class> invariant_factors(Matrix m);

/// Cellular chain data recomputed from the raw gluing table.
struct Chains {
  int vertices = 0;
  int edges = 0;
  int faces = 0;
  Matrix d1;  // vertices x edges
  Matrix d2;  // edges x faces
  /// Oriented edge class of the directed tetrahedron edge a->b: (class, sign).
  std::vector<std::array<int, 2>> directed;  // indexed 16*tet + 4*a + b
  std::vector<int> vertex;                   // indexed 4*tet + v
};

Chains chains(const knotcert::Triangulation& t);

/// H1 as (free rank, torsion coefficients > 1).
struct Homology {
  int free_rank = 0;
  std::vector<mpz_class> torsion;
};
Homology first_homology(const knotcert::Triangulation& t);

/// Integer 1-chain of a closed walk given by (tetrahedron, edge) tokens in order.
/// Returns an empty vector if the tokens do not form a closed walk.
std::vector<mpz_class> loop_chain(const knotcert::Triangulation& t, const std::vector<std::array<int, 2>>& loop);

/// True when the given closed loops form a basis of H1 (which must be free).
bool loops_form_h1_basis(const knotcert::Triangulation& t, const std::vector<std::vector<std::array<int, 2>>>& loops);

/// Euler characteristic V - E + F - T of the cell complex.
int euler_characteristic(const knotcert::Triangulation& t);

}  // namespace oracle
