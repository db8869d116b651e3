#pragma once

#include <array>
#include <map>
#include <vector>

#include "knotcert/triangulation.hpp"

namespace knotcert {

using Tet = std::array<int, 4>;  // vertex labels, ascending

/// Pure 3-dimensional simplicial complex given by its tetrahedra, with a 1-dimensional
/// subcomplex (the link) stored as closed vertex cycles.
struct SimplicialComplex {
  int num_vertices = 0;
  std::vector<Tet> tets;
  std::vector<std::vector<int>> link_cycles;

  int add_vertex() { return num_vertices++; }
  void add_tet(int a, int b, int c, int d);
  std::vector<char> link_vertex_mask() const;
};

/// First barycentric subdivision; link cycles pass through the new edge midpoints.
SimplicialComplex barycentric_subdivision(const SimplicialComplex& k);

/// Stellar subdivisions until no simplex outside the link has all its vertices on the link.
void make_link_full(SimplicialComplex& k);

/// Result of removing an open derived neighbourhood of the link.
struct Drilled {
  SimplicialComplex complex;        // link_cycles left empty
  std::vector<std::vector<int>> meridians;  // one closed boundary vertex cycle per link component
};

/// Cuts every tetrahedron at the points near the link vertices (link must be full); corners
/// become prisms, triangulated consistently by the smallest-label rule.
Drilled truncate_link(const SimplicialComplex& k);

/// Removes every tetrahedron that has a vertex on the link; meridians are the links of one
/// link edge per component.
Drilled remove_link_star(const SimplicialComplex& k);

/// Shrinks the complex by edge contractions that satisfy the link condition (boundary
/// handled by a virtual cone vertex). The tracked cycles stay simple closed boundary loops.
void contract_edges(Drilled& d);

/// Gluing representation of a simplicial complex: vertices relabelled compactly in their
/// original order, tetrahedra sorted, local vertex order ascending.
struct Converted {
  Triangulation tri;
  std::vector<Tet> tets;     // relabelled, in triangulation order
  std::vector<int> relabel;  // original vertex -> new label, -1 when unused

  /// First (tetrahedron, edge index) containing the edge between two original vertices.
  std::array<int, 2> locate_edge(int a, int b) const;
};

Converted to_triangulation(const SimplicialComplex& k);

}  // namespace knotcert
