#include "knotcert/complement.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

#include "knotcert/simplicial.hpp"
#include "knotcert/simplify.hpp"
#include "knotcert/union_find.hpp"

namespace knotcert {

namespace {

/// Prism layers over the bounded faces of the drawn graph, coned off to a point at infinity.
/// Layer l of graph vertex v is vertex l*m+v; the link runs on layers `base` and `base+1`.
SimplicialComplex prism_sphere(const AugmentedGraph& g, const GridEmbedding& e, int slabs, int base) {
  const int m = g.num_vertices();
  SimplicialComplex k;
  k.num_vertices = (slabs + 1) * m;
  auto at = [m](int level, int v) { return level * m + v; };
  std::map<std::array<int, 3>, int> rect;
  auto rect_centre = [&](int slab, int u, int v) {
    std::array<int, 3> key{slab, std::min(u, v), std::max(u, v)};
    auto it = rect.find(key);
    if (it != rect.end()) return it->second;
    int id = k.add_vertex();
    rect.emplace(key, id);
    return id;
  };
  // side squares: four triangles around the centre
  auto side = [&](int slab, int x, int y, auto&& emit) {
    int r = rect_centre(slab, x, y);
    emit(at(slab, x), at(slab, y), r);
    emit(at(slab, y), at(slab + 1, y), r);
    emit(at(slab + 1, y), at(slab + 1, x), r);
    emit(at(slab + 1, x), at(slab, x), r);
  };
  for (int slab = 0; slab < slabs; ++slab) {
    for (const auto& f : e.bounded_faces) {
      int c = k.add_vertex();
      auto cone = [&](int a, int b, int d) { k.add_tet(a, b, d, c); };
      cone(at(slab, f[0]), at(slab, f[1]), at(slab, f[2]));
      cone(at(slab + 1, f[0]), at(slab + 1, f[1]), at(slab + 1, f[2]));
      for (int i = 0; i < 3; ++i) side(slab, f[i], f[(i + 1) % 3], cone);
    }
  }
  int infinity = k.add_vertex();
  auto to_infinity = [&](int a, int b, int d) { k.add_tet(a, b, d, infinity); };
  for (const auto& f : e.bounded_faces) {
    to_infinity(at(0, f[0]), at(0, f[1]), at(0, f[2]));
    to_infinity(at(slabs, f[0]), at(slabs, f[1]), at(slabs, f[2]));
  }
  for (int slab = 0; slab < slabs; ++slab)
    for (int i = 0; i < 3; ++i) side(slab, e.outer[i], e.outer[(i + 1) % 3], to_infinity);

  for (const auto& walk : g.strands) {
    std::vector<int> cyc;
    const int n = static_cast<int>(walk.size());
    for (int i = 0; i < n; ++i) {
      const auto& p = walk[i];
      const auto& q = walk[(i + 1) % n];
      cyc.push_back(at(base + (p.over ? 1 : 0), p.vertex));
      if (p.over != q.over) cyc.push_back(rect_centre(base, p.vertex, q.vertex));
    }
    k.link_cycles.push_back(std::move(cyc));
  }
  return k;
}

}  // namespace

int edge_class_of(const Triangulation& t, const EdgeRef& e) { return t.edge_class(e[0], e[1]); }

std::vector<BoundaryComponent> boundary_components(const Triangulation& t) {
  UnionFind uf(t.num_vertices());
  std::vector<char> on(t.num_vertices(), 0);
  for (int a = 0; a < t.size(); ++a) {
    for (int f = 0; f < 4; ++f) {
      if (!t.is_boundary_face(a, f)) continue;
      auto fv = face_vertices(f);
      for (int v : fv) on[t.vertex_class(a, v)] = 1;
      uf.unite(t.vertex_class(a, fv[0]), t.vertex_class(a, fv[1]));
      uf.unite(t.vertex_class(a, fv[0]), t.vertex_class(a, fv[2]));
    }
  }
  std::map<std::size_t, int> index;
  std::vector<BoundaryComponent> out;
  for (int v = 0; v < t.num_vertices(); ++v) {
    if (!on[v]) continue;
    auto r = uf.find(v);
    if (!index.count(r)) {
      index[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    auto& comp = out[index[r]];
    comp.vertices.push_back(v);
    comp.euler += 1;
  }
  for (int e = 0; e < t.num_edges(); ++e)
    if (t.edge_on_boundary(e)) out[index[uf.find(t.edge_endpoints(e)[0])]].euler -= 1;
  for (int a = 0; a < t.size(); ++a)
    for (int f = 0; f < 4; ++f)
      if (t.is_boundary_face(a, f)) out[index[uf.find(t.vertex_class(a, face_vertices(f)[0]))]].euler += 1;
  return out;
}

MarkedComplement mark_meridian_and_arcs(MarkedComplement c) {
  const auto& t = c.triangulation;
  c.boundary_components = boundary_components(t);
  std::vector<int> comp_of(t.num_vertices(), -1);
  for (int i = 0; i < static_cast<int>(c.boundary_components.size()); ++i) {
    if (c.boundary_components[i].euler != 0)
      throw TriangulationError("boundary component " + std::to_string(i) + " is not a torus");
    for (int v : c.boundary_components[i].vertices) comp_of[v] = i;
  }
  c.meridian_component.clear();
  for (const auto& loop : c.meridians) {
    int comp = -1;
    for (const auto& e : loop) {
      int cls = edge_class_of(t, e);
      if (!t.edge_on_boundary(cls)) throw TriangulationError("meridian edge is not on the boundary");
      for (int v : t.edge_endpoints(cls)) {
        if (comp >= 0 && comp_of[v] != comp) throw TriangulationError("meridian leaves its boundary torus");
        comp = comp_of[v];
      }
    }
    c.meridian_component.push_back(comp);
  }

  // breadth-first search through interior edges from component 0
  c.arcs.clear();
  c.arc_components.clear();
  const int ncomp = static_cast<int>(c.boundary_components.size());
  if (ncomp <= 1) return c;
  std::vector<std::vector<std::pair<int, int>>> adj(t.num_vertices());
  for (int e = 0; e < t.num_edges(); ++e) {
    if (t.edge_on_boundary(e)) continue;
    auto ends = t.edge_endpoints(e);
    if (ends[0] == ends[1]) continue;
    adj[ends[0]].push_back({ends[1], e});
    adj[ends[1]].push_back({ends[0], e});
  }
  std::vector<int> via(t.num_vertices(), -2), from(t.num_vertices(), -1);
  std::deque<int> queue;
  for (int v : c.boundary_components[0].vertices) {
    via[v] = -1;
    queue.push_back(v);
  }
  std::vector<int> reached(ncomp, -1);
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    if (comp_of[u] > 0) continue;  // boundary vertices of other components end a path
    for (auto [w, e] : adj[u]) {
      if (via[w] != -2) continue;
      via[w] = e;
      from[w] = u;
      if (comp_of[w] > 0 && reached[comp_of[w]] < 0) reached[comp_of[w]] = w;
      queue.push_back(w);
    }
  }
  for (int j = 1; j < ncomp; ++j) {
    if (reached[j] < 0) throw TriangulationError("boundary components cannot be joined by interior edges");
    std::vector<EdgeRef> path;
    for (int v = reached[j]; via[v] >= 0; v = from[v]) {
      const auto& emb = t.edge_embeddings(via[v]).front();
      path.push_back({emb.tet, emb.edge});
    }
    std::reverse(path.begin(), path.end());
    c.arcs.push_back(std::move(path));
    c.arc_components.push_back({0, j});
  }
  return c;
}

MarkedComplement build_complement(const LinkDiagram& d, BuildMode mode) {
  auto g = augment(d);
  auto rotation = g.rotation;
  triangulate_faces(rotation);
  auto e = shift_embed(rotation);

  Drilled drilled;
  MarkedComplement c;
  if (mode == BuildMode::compact) {
    auto k = prism_sphere(g, e, 1, 0);
    c.sphere_tetrahedra = static_cast<int>(k.tets.size());
    make_link_full(k);
    for (const auto& cyc : k.link_cycles) c.link_edges += static_cast<int>(cyc.size());
    drilled = truncate_link(k);
    contract_edges(drilled);
  } else {
    auto k = prism_sphere(g, e, 3, 1);
    c.sphere_tetrahedra = static_cast<int>(k.tets.size());
    k = barycentric_subdivision(barycentric_subdivision(k));
    for (const auto& cyc : k.link_cycles) c.link_edges += static_cast<int>(cyc.size());
    drilled = remove_link_star(k);
  }
  auto conv = to_triangulation(drilled.complex);
  c.triangulation = std::move(conv.tri);
  for (const auto& loop : drilled.meridians) {
    std::vector<EdgeRef> edges;
    for (std::size_t i = 0; i < loop.size(); ++i) edges.push_back(conv.locate_edge(loop[i], loop[(i + 1) % loop.size()]));
    c.meridians.push_back(std::move(edges));
  }
  if (mode == BuildMode::compact) {
    TrackedTriangulation tracked{std::move(c.triangulation), std::move(c.meridians)};
    simplify(tracked);
    c.triangulation = std::move(tracked.tri);
    c.meridians = std::move(tracked.loops);
  }
  return mark_meridian_and_arcs(std::move(c));
}

std::string serialize_markings(const MarkedComplement& c) {
  std::ostringstream out;
  auto write = [&](const char* name, const std::vector<std::vector<EdgeRef>>& loops) {
    for (std::size_t i = 0; i < loops.size(); ++i) {
      out << name << ' ' << i << ':';
      for (const auto& e : loops[i]) out << ' ' << e[0] << ':' << e[1];
      out << '\n';
    }
  };
  write("meridian", c.meridians);
  write("arc", c.arcs);
  return out.str();
}

}  // namespace knotcert
