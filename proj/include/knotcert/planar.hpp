#pragma once

#include <array>
#include <vector>

#include "knotcert/diagram.hpp"

namespace knotcert {

/// A point where a link component passes through a vertex of the augmented graph.
struct StrandPoint {
  int vertex;
  bool over;  // passes above the crossing (only meaningful at crossing vertices)
};

/// The diagram as a simple planar graph: crossings, then special vertices that split
/// arcs and loops. `rotation[v]` lists neighbours counterclockwise.
struct AugmentedGraph {
  int num_crossings = 0;
  std::vector<std::vector<int>> rotation;
  /// One closed walk per link component, in traversal order.
  std::vector<std::vector<StrandPoint>> strands;

  int num_vertices() const { return static_cast<int>(rotation.size()); }
  bool adjacent(int u, int v) const;
};

/// Builds the augmented graph, joins disconnected pieces with bridge edges and fixes
/// the mirror orientation canonically.
AugmentedGraph augment(const LinkDiagram& d);

/// Faces of a rotation system, each a cyclic vertex list; the dart u->v is followed by
/// v->w where w precedes u in the rotation at v.
std::vector<std::vector<int>> trace_faces(const std::vector<std::vector<int>>& rotation);

/// Adds chords until every face is a triangle (the graph becomes maximal planar).
void triangulate_faces(std::vector<std::vector<int>>& rotation);

struct GridPoint {
  long x = 0, y = 0;
};

struct GridEmbedding {
  std::vector<std::vector<int>> rotation;  // maximal planar graph
  std::vector<GridPoint> points;
  std::array<int, 3> outer{};  // outer triangle
  std::vector<std::array<int, 3>> bounded_faces;
  long max_coordinate() const;
};

/// Shift-method straight-line grid drawing of a maximal planar graph; coordinates lie in
/// [0, 2m-4] x [0, m-2].
GridEmbedding shift_embed(const std::vector<std::vector<int>>& maximal_planar_rotation);

/// Augment, triangulate and draw the diagram graph.
GridEmbedding grid_embed(const LinkDiagram& d);

/// True when no two edges of the drawing meet except at common endpoints.
bool is_plane_drawing(const GridEmbedding& e);

}  // namespace knotcert
