#include "knotcert/surface.hpp"

#include <algorithm>

#include <json.hpp>

#include "knotcert/union_find.hpp"

namespace knotcert {

namespace {

bool on_zero_side(int quad_type, int x) { return x == 0 || x == quad_type + 1; }

/// Counts and offsets of the disks and of the points on each tetrahedron edge.
class Layout {
 public:
  Layout(const Triangulation& t, const NormalVector& v, std::int64_t disk_limit) {
    const int n = t.size();
    count_.assign(7 * n, 0);
    std::int64_t total = 0;
    for (int i = 0; i < 7 * n; ++i) {
      if (!v[i].fits_slong_p()) throw SurfaceError("coordinate too large to reconstruct");
      count_[i] = v[i].get_si();
      total += count_[i];
      if (total > disk_limit) throw SurfaceError("surface has too many disks to reconstruct");
    }
    disk_offset_.assign(7 * n + 1, 0);
    for (int i = 0; i < 7 * n; ++i) disk_offset_[i + 1] = disk_offset_[i] + count_[i];
    point_offset_.assign(6 * n + 1, 0);
    for (int a = 0; a < n; ++a)
      for (int e = 0; e < 6; ++e) point_offset_[6 * a + e + 1] = point_offset_[6 * a + e] + points_on(a, e);
  }

  std::int64_t count(int a, int type) const { return count_[7 * a + type]; }
  std::int64_t disks() const { return disk_offset_.back(); }
  std::int64_t disk_id(int a, int type, std::int64_t sheet) const { return disk_offset_[7 * a + type] + sheet; }
  std::int64_t points() const { return point_offset_.back(); }

  std::int64_t points_on(int a, int e) const {
    int x = kEdgeVertices[e][0], y = kEdgeVertices[e][1];
    std::int64_t p = count(a, x) + count(a, y);
    for (int q = 0; q < 3; ++q)
      if (q != quad_of_pair(x, y)) p += count(a, kQuad0 + q);
    return p;
  }

  /// Quadrilateral type whose arcs in face f cut off corner x.
  static int corner_quad(int x, int f) { return quad_of_pair(x, f); }

  std::int64_t arcs_at_corner(int a, int f, int x) const {
    return count(a, x) + count(a, kQuad0 + corner_quad(x, f));
  }

  /// Disk owning arc `j` from corner x in face f, and whether its side 0 faces that corner.
  std::pair<std::int64_t, bool> arc_owner(int a, int f, int x, std::int64_t j) const {
    std::int64_t tri = count(a, x);
    if (j < tri) return {disk_id(a, x, j), true};
    int q = corner_quad(x, f);
    std::int64_t k = j - tri, total = count(a, kQuad0 + q);
    bool zero = on_zero_side(q, x);
    return {disk_id(a, kQuad0 + q, zero ? k : total - 1 - k), zero};
  }

  /// Point on tetrahedron edge {x,y} at distance j from x.
  std::int64_t point(int a, int x, int y, std::int64_t j) const {
    int e = edge_number(x, y);
    std::int64_t n = points_on(a, e);
    return point_offset_[6 * a + e] + (x < y ? j : n - 1 - j);
  }

 private:
  std::vector<std::int64_t> count_;
  std::vector<std::int64_t> disk_offset_;
  std::vector<std::int64_t> point_offset_;
};

void require_admissible(const Triangulation& t, const NormalVector& v) {
  auto cone = matching_equations(t);
  if (static_cast<int>(v.size()) != cone.coordinates())
    throw SurfaceError("normal vector has length " + std::to_string(v.size()) + ", expected " +
                       std::to_string(cone.coordinates()));
  if (!is_admissible(cone, v)) throw SurfaceError("vector is not admissible");
}

}  // namespace

int meets_edge(int type, int a, int b) {
  if (type < kQuad0) return (type == a || type == b) ? 1 : 0;
  return quad_of_pair(a, b) == type - kQuad0 ? 0 : 1;
}

NormalSurface reconstruct(const Triangulation& t, const NormalVector& v, std::int64_t disk_limit) {
  require_admissible(t, v);
  if (std::all_of(v.begin(), v.end(), [](const mpz_class& x) { return x == 0; }))
    throw SurfaceError("the zero vector has no surface");
  Layout lay(t, v, disk_limit);
  const int n = t.size();

  NormalSurface s;
  s.source = v;
  s.disks.reserve(lay.disks());
  for (int a = 0; a < n; ++a)
    for (int type = 0; type < 7; ++type)
      for (std::int64_t k = 0; k < lay.count(a, type); ++k) s.disks.push_back({a, type, k});
  const auto nd = s.disks.size();
  s.arcs.resize(nd);
  s.neighbour.resize(nd);
  s.same_side.resize(nd);

  UnionFind points(static_cast<std::size_t>(lay.points()));
  std::int64_t free_arcs = 0, arc_ends = 0;
  std::vector<std::array<std::int64_t, 2>> free_ends;
  std::vector<std::array<int, 2>> free_end_edges;
  for (int a = 0; a < n; ++a) {
    for (int f = 0; f < 4; ++f) {
      const auto& g = t.gluing(a, f);
      for (int x = 0; x < 4; ++x) {
        if (x == f) continue;
        int y = -1, z = -1;
        for (int u = 0; u < 4; ++u)
          if (u != f && u != x) (y < 0 ? y : z) = u;
        const std::int64_t m = lay.arcs_at_corner(a, f, x);
        for (std::int64_t j = 0; j < m; ++j) {
          auto [disk, zero_faces_corner] = lay.arc_owner(a, f, x, j);
          s.arcs[disk].push_back({a, f, x, j});
          std::array<std::int64_t, 2> ends{lay.point(a, x, y, j), lay.point(a, x, z, j)};
          arc_ends += 2;
          if (g.boundary()) {
            s.neighbour[disk].push_back(-1);
            s.same_side[disk].push_back(1);
            ++free_arcs;
            free_ends.push_back(ends);
            free_end_edges.push_back({t.edge_class(a, edge_number(x, y)), t.edge_class(a, edge_number(x, z))});
            continue;
          }
          const int b = g.tet;
          auto [other, other_zero] = lay.arc_owner(b, g.perm[f], g.perm[x], j);
          s.neighbour[disk].push_back(static_cast<int>(other));
          s.same_side[disk].push_back(zero_faces_corner == other_zero);
          points.unite(ends[0], lay.point(b, g.perm[x], g.perm[y], j));
          points.unite(ends[1], lay.point(b, g.perm[x], g.perm[z], j));
        }
      }
    }
  }
  // every arc on an interior face was recorded from both sides
  const std::int64_t total_arcs = static_cast<std::int64_t>(arc_ends / 2);
  s.cell_faces = static_cast<std::int64_t>(nd);
  s.cell_edges = (total_arcs + free_arcs) / 2;
  int classes = 0;
  auto label = points.labels(&classes);
  s.cell_vertices = classes;

  s.edge_points.assign(t.num_edges(), 0);
  for (int e = 0; e < t.num_edges(); ++e) {
    const auto& emb = t.edge_embeddings(e);
    s.edge_points[e] = lay.points_on(emb.front().tet, emb.front().edge);
    for (const auto& x : emb)
      if (lay.points_on(x.tet, x.edge) != s.edge_points[e])
        throw SurfaceError("inconsistent point counts around an edge");
  }

  // boundary curves: free arcs chained through shared points, each point used exactly twice
  std::vector<int> degree(classes, 0), edge_of(classes, -1);
  UnionFind curves(classes);
  for (std::size_t i = 0; i < free_ends.size(); ++i) {
    const auto& e = free_ends[i];
    int p = label[e[0]], q = label[e[1]];
    edge_of[p] = free_end_edges[i][0];
    edge_of[q] = free_end_edges[i][1];
    ++degree[p];
    ++degree[q];
    curves.unite(p, q);
  }
  std::vector<char> root_seen(classes, 0);
  for (int p = 0; p < classes; ++p) {
    if (degree[p] == 0) continue;
    if (degree[p] != 2) throw SurfaceError("boundary arcs do not close up");
    s.boundary_point_edges.push_back(edge_of[p]);
    auto r = curves.find(p);
    if (!root_seen[r]) {
      root_seen[r] = 1;
      ++s.boundary_curve_count;
    }
  }
  return s;
}

mpz_class edge_weight(const Triangulation& t, const NormalVector& v, int edge_class) {
  mpq_class sum = 0;
  const auto& emb = t.edge_embeddings(edge_class);
  const int valence = static_cast<int>(emb.size());
  for (const auto& x : emb) {
    int p = kEdgeVertices[x.edge][0], q = kEdgeVertices[x.edge][1];
    for (int type = 0; type < 7; ++type)
      if (meets_edge(type, p, q)) sum += mpq_class(v[7 * x.tet + type], valence);
  }
  sum.canonicalize();
  if (sum.get_den() != 1) throw SurfaceError("edge weight is not an integer");
  return sum.get_num();
}

mpz_class weight(const Triangulation& t, const NormalVector& v) {
  mpq_class total = 0;
  for (int j = 0; j < t.num_edges(); ++j) {
    const auto& emb = t.edge_embeddings(j);
    const int tj = static_cast<int>(emb.size());
    for (const auto& x : emb) {
      int p = kEdgeVertices[x.edge][0], q = kEdgeVertices[x.edge][1];
      for (int type = 0; type < 7; ++type)
        if (meets_edge(type, p, q)) total += mpq_class(v[7 * x.tet + type], tj);
    }
  }
  total.canonicalize();
  if (total.get_den() != 1) throw SurfaceError("weight is not an integer");
  return total.get_num();
}

mpz_class euler_characteristic(const Triangulation& t, const NormalVector& v) {
  require_admissible(t, v);
  mpz_class triangles = 0, sigma = 0, boundary_points = 0;
  for (int a = 0; a < t.size(); ++a)
    for (int type = 0; type < 7; ++type) {
      sigma += v[7 * a + type];
      if (type < kQuad0) triangles += v[7 * a + type];
    }
  for (int j = 0; j < t.num_edges(); ++j)
    if (t.edge_on_boundary(j)) boundary_points += edge_weight(t, v, j);
  mpq_class chi = mpq_class(triangles, 2) - sigma + weight(t, v) - mpq_class(boundary_points, 2);
  chi.canonicalize();
  if (chi.get_den() != 1) throw SurfaceError("Euler characteristic is not an integer");
  return chi.get_num();
}

int connected_components(const NormalSurface& s) {
  UnionFind uf(s.disks.size());
  for (std::size_t d = 0; d < s.disks.size(); ++d)
    for (int o : s.neighbour[d])
      if (o >= 0) uf.unite(d, static_cast<std::size_t>(o));
  int count = 0;
  uf.labels(&count);
  return count;
}

bool is_orientable(const NormalSurface& s) {
  if (connected_components(s) != 1) throw SurfaceError("orientability needs a connected surface");
  const std::size_t n = s.disks.size();
  UnionFind sides(2 * n);
  for (std::size_t d = 0; d < n; ++d)
    for (std::size_t k = 0; k < s.neighbour[d].size(); ++k) {
      int o = s.neighbour[d][k];
      if (o < 0) continue;
      std::size_t e = static_cast<std::size_t>(o);
      if (s.same_side[d][k]) {
        sides.unite(2 * d, 2 * e);
        sides.unite(2 * d + 1, 2 * e + 1);
      } else {
        sides.unite(2 * d, 2 * e + 1);
        sides.unite(2 * d + 1, 2 * e);
      }
    }
  return sides.find(0) != sides.find(1);
}

int boundary_curves(const NormalSurface& s) { return s.boundary_curve_count; }

SurfaceReport classify(const Triangulation& t, const NormalSurface& s) {
  SurfaceReport r;
  r.components = connected_components(s);
  if (r.components != 1) throw SurfaceError("classification needs a connected surface");
  r.chi = s.euler_characteristic();
  auto formula = euler_characteristic(t, s.source);
  if (formula != r.chi) throw SurfaceError("Euler characteristic formula disagrees with the cell count");
  r.weight = weight(t, s.source).get_si();
  r.orientable = is_orientable(s);
  r.boundary_curves = boundary_curves(s);
  r.is_disk = r.chi == 1 && r.boundary_curves > 0;
  r.is_sphere = r.chi == 2 && r.boundary_curves == 0;
  if (r.orientable) r.genus = (2 - r.chi - r.boundary_curves) / 2;
  return r;
}

SurfaceReport classify(const Triangulation& t, const NormalVector& v) { return classify(t, reconstruct(t, v)); }

std::string to_json(const SurfaceReport& r) {
  nlohmann::ordered_json j;
  j["chi"] = r.chi;
  j["weight"] = r.weight;
  j["components"] = r.components;
  j["orientable"] = r.orientable;
  j["boundary_curves"] = r.boundary_curves;
  j["is_disk"] = r.is_disk;
  j["is_sphere"] = r.is_sphere;
  if (r.genus >= 0)
    j["genus"] = r.genus;
  else
    j["genus"] = nullptr;
  return j.dump();
}

NormalVector vertex_link(const Triangulation& t, int vertex_class) {
  NormalVector v(7 * t.size(), 0);
  for (int a = 0; a < t.size(); ++a)
    for (int x = 0; x < 4; ++x)
      if (t.vertex_class(a, x) == vertex_class) v[7 * a + x] += 1;
  return v;
}

}  // namespace knotcert
