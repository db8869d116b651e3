#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "knotcert/budget.hpp"
#include "knotcert/triangulation.hpp"

namespace knotcert {

/// Normal coordinates: per tetrahedron, triangles at vertices 0..3 then quadrilaterals
/// {01|23}, {02|13}, {03|12}.
using NormalVector = std::vector<mpz_class>;

constexpr int kTriangle0 = 0;
constexpr int kQuad0 = 4;

/// Quadrilateral type (0..2) separating edge {a,b} from the opposite edge.
constexpr int quad_of_pair(int a, int b) {
  int partner = (a == 0) ? b : (b == 0) ? a : 6 - a - b;
  return partner - 1;
}

/// One matching equation as a sparse row with coefficients summed per coordinate.
struct MatchingRow {
  std::vector<std::pair<int, int>> terms;  // (coordinate, coefficient), coordinates ascending
  int face_tet = 0, face = 0, vertex = 0;  // interior face (tetrahedron, face) and corner
};

/// The cone of nonnegative solutions of the matching equations.
/// Any cone {x >= 0 : rows . x = 0} may be represented; for a triangulation the first 7t
/// coordinates are normal coordinates and `num_coordinates` is 7t.
struct HakenCone {
  int tetrahedra = 0;
  int num_coordinates = 0;
  std::vector<MatchingRow> rows;

  int coordinates() const { return num_coordinates; }
  /// Value of row i on v.
  mpz_class evaluate(int i, const NormalVector& v) const;
};

HakenCone matching_equations(const Triangulation& t);

/// True when v >= 0, satisfies every matching equation and uses at most one quadrilateral
/// type per tetrahedron. Throws std::invalid_argument on a length mismatch.
bool is_admissible(const HakenCone& c, const NormalVector& v);

/// Matching equations and nonnegativity only (no quadrilateral condition).
bool in_cone(const HakenCone& c, const NormalVector& v);

/// True when no tetrahedron carries two quadrilateral types with positive coordinates.
bool quads_compatible(const HakenCone& c, const NormalVector& v);

struct EnumerationOptions {
  /// Discard intermediate rays that break the quadrilateral condition; the output is then the
  /// admissible extreme rays only.
  bool admissible_only = true;
  int workers = 1;
  Budget budget;
};

/// Minimal integer points of the extreme rays of the cone (gcd 1, lexicographically sorted),
/// by double description over the nonnegative orthant.
std::vector<NormalVector> vertex_solutions(const HakenCone& c, const EnumerationOptions& options = {});

/// Rank of the cone's linear span, from its extreme rays.
int dimension(const HakenCone& c);

/// Per-coordinate upper bounds for Hilbert basis elements: the smaller of t * 2^(7t+2) and the
/// coordinatewise sum of all extreme rays.
std::vector<mpz_class> hilbert_box(const HakenCone& c);

/// Irreducible integer points of the cone, sorted. Throws BudgetExceeded when the search of the
/// bounding box visits more than `node_limit` partial assignments.
std::vector<NormalVector> hilbert_basis(const HakenCone& c, std::int64_t node_limit = 2'000'000);

/// True when v is a nonzero cone point that is not the sum of two nonzero integer cone points.
/// Exhaustive search over 0 <= w <= v; throws BudgetExceeded past `node_limit` nodes.
bool is_fundamental(const HakenCone& c, const NormalVector& v, std::int64_t node_limit = 2'000'000);

/// Calls `visit` on every nonzero admissible vector with all coordinates <= bound, in
/// lexicographic order. Throws BudgetExceeded past `node_limit` search nodes.
void for_each_admissible_in_box(const HakenCone& c, int bound, std::int64_t node_limit,
                                const std::function<void(const NormalVector&)>& visit);

/// Dense matrix rows, one per line, then a blank line and one vector per line.
std::string dump_cone(const HakenCone& c, const std::vector<NormalVector>& vertices);

/// Matching rows as dense integer rows of length 7t.
std::vector<std::vector<mpz_class>> dense_rows(const HakenCone& c);

std::string to_string(const NormalVector& v);

}  // namespace knotcert
