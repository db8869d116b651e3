#pragma once

#include <array>
#include <optional>
#include <vector>

#include "knotcert/triangulation.hpp"

namespace knotcert {

/// A triangulation carrying closed edge loops (tetrahedron, edge index) through moves.
struct TrackedTriangulation {
  Triangulation tri;
  std::vector<std::vector<std::array<int, 2>>> loops;
};

/// Contracts edge class `e` by flattening every tetrahedron around it. Returns the new
/// triangulation (with loops carried along) or nothing when the move is not permitted or
/// would break validity, the boundary pattern, or the simplicity of a loop.
std::optional<TrackedTriangulation> collapse_edge(const TrackedTriangulation& t, int e);

/// Replaces the three tetrahedra around an interior valence-3 edge by two.
std::optional<TrackedTriangulation> three_two_move(const TrackedTriangulation& t, int e);

/// Greedy simplification by the two moves above until neither applies.
void simplify(TrackedTriangulation& t);

/// True when each loop is a closed walk of distinct edges through distinct vertices.
bool loops_are_simple(const Triangulation& tri, const std::vector<std::vector<std::array<int, 2>>>& loops);

}  // namespace knotcert
