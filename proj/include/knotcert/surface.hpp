#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "knotcert/normal_cone.hpp"
#include "knotcert/triangulation.hpp"

namespace knotcert {

/// An elementary disk: type 0..3 is the triangle at that vertex, 4..6 a quadrilateral.
/// Triangle sheets are numbered outward from their vertex; quadrilateral sheets from the
/// side holding vertex 0.
struct Disk {
  int tet = 0;
  int type = 0;
  std::int64_t sheet = 0;
};

/// A normal arc: the `index`-th arc counted from `corner` in face `face` of `tet`.
struct ArcSlot {
  int tet, face, corner;
  std::int64_t index;
};

/// Normal surface rebuilt from its coordinates, as a cell complex of elementary disks.
struct NormalSurface {
  NormalVector source;
  std::vector<Disk> disks;
  /// For each disk, its arcs (3 or 4) and the disk across each arc, -1 on the boundary.
  std::vector<std::vector<ArcSlot>> arcs;
  std::vector<std::vector<int>> neighbour;
  /// Whether crossing each arc keeps the side facing vertex 0 / triangle vertex (true) or swaps it.
  std::vector<std::vector<char>> same_side;
  std::int64_t cell_vertices = 0, cell_edges = 0, cell_faces = 0;
  /// Number of surface points on each edge class.
  std::vector<std::int64_t> edge_points;
  /// Edge class of every point of the surface boundary.
  std::vector<int> boundary_point_edges;
  /// Closed curves formed by the arcs in boundary faces.
  int boundary_curve_count = 0;

  std::int64_t euler_characteristic() const { return cell_vertices - cell_edges + cell_faces; }
};

class SurfaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rebuilds the surface of an admissible nonzero vector. Throws SurfaceError on an inadmissible
/// or zero vector, or when the surface has more than `disk_limit` disks.
NormalSurface reconstruct(const Triangulation& t, const NormalVector& v, std::int64_t disk_limit = 4'000'000);

/// 1 when an elementary disk of `type` crosses the tetrahedron edge {a,b}, else 0.
int meets_edge(int type, int a, int b);

/// Intersections of the surface with the 1-skeleton, summed per edge class as
/// sum_i sum_j eps_ji v_i / t_j; throws SurfaceError if the sum is not an integer.
mpz_class weight(const Triangulation& t, const NormalVector& v);

/// Surface points on one edge class (the inner sum of the weight for that edge).
mpz_class edge_weight(const Triangulation& t, const NormalVector& v, int edge_class);

/// Euler characteristic from the coordinates: S3/2 - sigma + wt - b/2, where b counts the
/// surface points on boundary edges. Throws SurfaceError for an inadmissible vector.
mpz_class euler_characteristic(const Triangulation& t, const NormalVector& v);

int connected_components(const NormalSurface& s);
/// Two-sidedness of a connected surface; throws SurfaceError if it is disconnected.
bool is_orientable(const NormalSurface& s);
int boundary_curves(const NormalSurface& s);

struct SurfaceReport {
  std::int64_t chi = 0;
  std::int64_t weight = 0;
  int components = 0;
  bool orientable = false;
  int boundary_curves = 0;
  bool is_disk = false;
  bool is_sphere = false;
  /// (2 - chi - b) / 2 for orientable surfaces; -1 when not defined.
  std::int64_t genus = -1;
};

/// Full classification of a connected surface; throws SurfaceError if disconnected.
SurfaceReport classify(const Triangulation& t, const NormalVector& v);
SurfaceReport classify(const Triangulation& t, const NormalSurface& s);

std::string to_json(const SurfaceReport& r);

/// One triangle at every corner of the given vertex class.
NormalVector vertex_link(const Triangulation& t, int vertex_class);

}  // namespace knotcert
