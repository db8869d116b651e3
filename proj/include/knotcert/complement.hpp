#pragma once

#include <array>
#include <string>
#include <vector>

#include "knotcert/diagram.hpp"
#include "knotcert/planar.hpp"
#include "knotcert/triangulation.hpp"

namespace knotcert {

enum class BuildMode { compact, paper };

/// An edge of the triangulation named by one of its embeddings.
using EdgeRef = std::array<int, 2>;  // (tetrahedron, edge index 0..5)

struct BoundaryComponent {
  std::vector<int> vertices;  // vertex classes
  int euler = 0;
};

/// Triangulated link complement with its markings.
struct MarkedComplement {
  Triangulation triangulation;
  std::vector<BoundaryComponent> boundary_components;
  /// One closed edge loop per link component, as consecutive edges.
  std::vector<std::vector<EdgeRef>> meridians;
  /// Boundary component of each meridian.
  std::vector<int> meridian_component;
  /// Paths of interior edges joining boundary component 0 to each other component.
  std::vector<std::vector<EdgeRef>> arcs;
  std::vector<std::array<int, 2>> arc_components;
  /// Provenance: number of link edges in the subdivided complex before the link was removed.
  int link_edges = 0;
  /// Size of the closed simplicial 3-sphere the link was drilled from.
  int sphere_tetrahedra = 0;
};

/// Builds S^3 minus an open regular neighbourhood of the link drawn by `d`.
/// Compact mode drills a single prism layer and shrinks the result by edge contractions.
/// The layered mode (`BuildMode::paper`) stacks three layers, subdivides twice and removes the star of the link.
MarkedComplement build_complement(const LinkDiagram& d, BuildMode mode = BuildMode::compact);

/// Recomputes boundary components and connecting arcs from the triangulation and meridians.
MarkedComplement mark_meridian_and_arcs(MarkedComplement c);

/// Connected components of the boundary surface with their Euler characteristics.
std::vector<BoundaryComponent> boundary_components(const Triangulation& t);

/// Markings file: one line per loop, `meridian i: tet:edge tet:edge ...`, `arc i: ...`.
std::string serialize_markings(const MarkedComplement& c);

/// Edge class of an edge reference.
int edge_class_of(const Triangulation& t, const EdgeRef& e);

}  // namespace knotcert
