#include "knotcert/planar.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "knotcert/union_find.hpp"

namespace knotcert {

namespace {

int index_in(const std::vector<int>& v, int x) {
  auto it = std::find(v.begin(), v.end(), x);
  if (it == v.end()) throw std::logic_error("rotation system is inconsistent");
  return static_cast<int>(it - v.begin());
}

std::vector<std::vector<int>> normalized_faces(const std::vector<std::vector<int>>& rotation) {
  auto faces = trace_faces(rotation);
  for (auto& f : faces) std::rotate(f.begin(), std::min_element(f.begin(), f.end()), f.end());
  std::sort(faces.begin(), faces.end());
  return faces;
}

}  // namespace

bool AugmentedGraph::adjacent(int u, int v) const {
  return std::find(rotation[u].begin(), rotation[u].end(), v) != rotation[u].end();
}

std::vector<std::vector<int>> trace_faces(const std::vector<std::vector<int>>& rotation) {
  std::map<std::pair<int, int>, bool> used;
  std::vector<std::vector<int>> faces;
  for (int u = 0; u < static_cast<int>(rotation.size()); ++u) {
    for (int v : rotation[u]) {
      if (used[{u, v}]) continue;
      std::vector<int> face;
      int a = u, b = v;
      while (!used[{a, b}]) {
        used[{a, b}] = true;
        face.push_back(a);
        const auto& rb = rotation[b];
        int deg = static_cast<int>(rb.size());
        int c = rb[(index_in(rb, a) + deg - 1) % deg];
        a = b;
        b = c;
      }
      faces.push_back(std::move(face));
    }
  }
  return faces;
}

AugmentedGraph augment(const LinkDiagram& d) {
  AugmentedGraph g;
  const int n = d.num_crossings();
  g.num_crossings = n;
  g.rotation.assign(n, std::vector<int>(4, -1));
  auto add_vertex = [&] {
    g.rotation.emplace_back();
    return g.num_vertices() - 1;
  };
  auto link = [&](int a, int b) {
    g.rotation[a].push_back(b);
    g.rotation[b].push_back(a);
  };

  // specials along each arc, listed from its first end
  std::vector<std::vector<int>> arc_specials(d.arcs().size());
  for (std::size_t i = 0; i < d.arcs().size(); ++i) {
    const auto& ends = d.arc_ends(static_cast<int>(i));
    if (ends[0].crossing != ends[1].crossing) {
      int s = add_vertex();
      arc_specials[i] = {s};
      g.rotation[ends[0].crossing][ends[0].position] = s;
      g.rotation[ends[1].crossing][ends[1].position] = s;
      g.rotation[s] = {ends[0].crossing, ends[1].crossing};
    } else {
      int s1 = add_vertex(), s2 = add_vertex();
      arc_specials[i] = {s1, s2};
      g.rotation[ends[0].crossing][ends[0].position] = s1;
      g.rotation[ends[1].crossing][ends[1].position] = s2;
      g.rotation[s1] = {ends[0].crossing, s2};
      g.rotation[s2] = {s1, ends[1].crossing};
    }
  }

  const int traced = d.num_components() - d.num_loops();
  std::vector<char> seen(4 * n, 0);
  for (int comp = 0; comp < traced; ++comp) {
    int c = -1, p = -1;
    for (int k = 0; k < n && c < 0; ++k)
      for (int q = 0; q < 4 && c < 0; ++q)
        if (d.component_of(k, q) == comp) c = k, p = q;
    std::vector<StrandPoint> walk;
    while (!seen[4 * c + p]) {
      seen[4 * c + p] = 1;
      walk.push_back({c, (p & 1) != 0});
      int out = (p + 2) % 4;
      int arc = d.arc_at(c, out);
      auto specials = arc_specials[arc];
      if (!(d.arc_ends(arc)[0] == EndRef{c, out})) std::reverse(specials.begin(), specials.end());
      for (int s : specials) walk.push_back({s, false});
      auto next = d.partner(c, out);
      c = next.crossing;
      p = next.position;
    }
    g.strands.push_back(std::move(walk));
  }
  for (int i = 0; i < d.num_loops(); ++i) {
    int a = add_vertex(), b = add_vertex(), c = add_vertex();
    link(a, b);
    link(b, c);
    link(c, a);
    g.strands.push_back({{a, false}, {b, false}, {c, false}});
  }

  // Bridge separate pieces to the piece containing vertex 0.
  UnionFind uf(g.num_vertices());
  for (int u = 0; u < g.num_vertices(); ++u)
    for (int v : g.rotation[u]) uf.unite(u, v);
  std::vector<char> bridged(g.num_vertices(), 0);
  for (int u = 1; u < g.num_vertices(); ++u) {
    if (uf.find(u) == uf.find(0)) continue;
    uf.unite(u, 0);
    g.rotation[0].insert(g.rotation[0].begin(), u);
    g.rotation[u].insert(g.rotation[u].begin(), 0);
  }

  auto mirrored = g.rotation;
  for (auto& r : mirrored) std::reverse(r.begin(), r.end());
  if (normalized_faces(mirrored) < normalized_faces(g.rotation)) g.rotation = std::move(mirrored);
  return g;
}

void triangulate_faces(std::vector<std::vector<int>>& rotation) {
  auto adjacent = [&](int u, int v) {
    return std::find(rotation[u].begin(), rotation[u].end(), v) != rotation[u].end();
  };
  for (;;) {
    auto faces = trace_faces(rotation);
    bool added = false;
    for (const auto& f : faces) {
      const int k = static_cast<int>(f.size());
      if (k <= 3) continue;
      for (int i = 0; i < k && !added; ++i) {
        int u = f[i], v = f[(i + 1) % k], w = f[(i + 2) % k];
        if (u == w || adjacent(u, w)) continue;
        auto& ru = rotation[u];
        ru.insert(ru.begin() + index_in(ru, v) + 1, w);
        auto& rw = rotation[w];
        rw.insert(rw.begin() + index_in(rw, v), u);
        added = true;
      }
      if (added) break;
      throw std::logic_error("face cannot be triangulated by chords");
    }
    if (!added) return;
  }
}

long GridEmbedding::max_coordinate() const {
  long m = 0;
  for (const auto& p : points) m = std::max({m, p.x, p.y});
  return m;
}

GridEmbedding shift_embed(const std::vector<std::vector<int>>& rotation) {
  const int m = static_cast<int>(rotation.size());
  GridEmbedding out;
  out.rotation = rotation;
  auto faces = trace_faces(rotation);
  if (m < 3 || static_cast<int>(faces.size()) != 2 * m - 4) throw std::logic_error("graph is not maximal planar");
  for (const auto& f : faces)
    if (f.size() != 3) throw std::logic_error("graph is not maximal planar");

  // Outer face: the one traced from the first dart of vertex 0.
  int v1 = -1, v2 = -1, vn = -1;
  for (const auto& f : faces) {
    for (int i = 0; i < 3; ++i) {
      if (f[i] == 0 && f[(i + 1) % 3] == rotation[0][0]) {
        v1 = f[i];
        v2 = f[(i + 1) % 3];
        vn = f[(i + 2) % 3];
      }
    }
  }
  out.outer = {v1, v2, vn};
  for (const auto& f : faces) {
    bool is_outer = false;
    for (int i = 0; i < 3; ++i)
      if (f[i] == v1 && f[(i + 1) % 3] == v2) is_outer = true;
    if (!is_outer) out.bounded_faces.push_back({f[0], f[1], f[2]});
  }

  // Canonical order by peeling outer vertices without chords, from vn backwards.
  std::vector<char> present(m, 1);
  auto outer_cycle = [&]() {
    // face of the induced subgraph through the dart v1 -> v2
    std::vector<int> cyc;
    int a = v1, b = v2;
    do {
      cyc.push_back(a);
      std::vector<int> rb;
      for (int x : rotation[b])
        if (present[x]) rb.push_back(x);
      int deg = static_cast<int>(rb.size());
      int c = rb[(index_in(rb, a) + deg - 1) % deg];
      a = b;
      b = c;
    } while (!(a == v1 && b == v2));
    return cyc;
  };
  std::vector<int> order(m, -1);
  order[m - 1] = vn;
  present[vn] = 0;
  for (int k = m - 2; k >= 2; --k) {
    auto cyc = outer_cycle();
    const int r = static_cast<int>(cyc.size());
    std::vector<int> pos(m, -1);
    for (int i = 0; i < r; ++i) pos[cyc[i]] = i;
    int chosen = -1;
    for (int i = 0; i < r && chosen < 0; ++i) {
      int v = cyc[i];
      if (v == v1 || v == v2) continue;
      int prev = cyc[(i + r - 1) % r], next = cyc[(i + 1) % r];
      bool chord = false;
      for (int x : rotation[v])
        if (present[x] && pos[x] >= 0 && x != prev && x != next) chord = true;
      if (!chord) chosen = v;
    }
    if (chosen < 0) throw std::logic_error("canonical ordering failed");
    order[k] = chosen;
    present[chosen] = 0;
  }
  order[0] = v1;
  order[1] = v2;

  std::vector<GridPoint> pt(m);
  std::vector<std::vector<int>> under(m);
  for (int v = 0; v < m; ++v) under[v] = {v};
  pt[v1] = {0, 0};
  pt[v2] = {2, 0};
  pt[order[2]] = {1, 1};
  std::vector<int> contour{v1, order[2], v2};
  std::vector<char> placed(m, 0);
  placed[v1] = placed[v2] = placed[order[2]] = 1;
  for (int k = 3; k < m; ++k) {
    int v = order[k];
    int p = -1, q = -1;
    for (int i = 0; i < static_cast<int>(contour.size()); ++i) {
      if (std::find(rotation[v].begin(), rotation[v].end(), contour[i]) == rotation[v].end()) continue;
      if (p < 0) p = i;
      q = i;
    }
    if (p < 0 || p == q) throw std::logic_error("canonical ordering violated");
    for (int i = p + 1; i < q; ++i)
      for (int x : under[contour[i]]) pt[x].x += 1;
    for (int i = q; i < static_cast<int>(contour.size()); ++i)
      for (int x : under[contour[i]]) pt[x].x += 2;
    const auto& a = pt[contour[p]];
    const auto& b = pt[contour[q]];
    pt[v] = {(a.x + b.x + b.y - a.y) / 2, (b.x - a.x + b.y + a.y) / 2};
    for (int i = p + 1; i < q; ++i) under[v].insert(under[v].end(), under[contour[i]].begin(), under[contour[i]].end());
    contour.erase(contour.begin() + p + 1, contour.begin() + q);
    contour.insert(contour.begin() + p + 1, v);
    placed[v] = 1;
  }
  out.points = std::move(pt);
  return out;
}

GridEmbedding grid_embed(const LinkDiagram& d) {
  auto g = augment(d);
  auto rotation = g.rotation;
  triangulate_faces(rotation);
  return shift_embed(rotation);
}

namespace {

long cross(const GridPoint& o, const GridPoint& a, const GridPoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(const GridPoint& p, const GridPoint& a, const GridPoint& b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_meet(const GridPoint& a, const GridPoint& b, const GridPoint& c, const GridPoint& d) {
  long d1 = cross(c, d, a), d2 = cross(c, d, b), d3 = cross(a, b, c), d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  if (d1 == 0 && on_segment(a, c, d)) return true;
  if (d2 == 0 && on_segment(b, c, d)) return true;
  if (d3 == 0 && on_segment(c, a, b)) return true;
  if (d4 == 0 && on_segment(d, a, b)) return true;
  return false;
}

}  // namespace

bool is_plane_drawing(const GridEmbedding& e) {
  const int m = static_cast<int>(e.points.size());
  std::vector<std::array<int, 2>> edges;
  for (int u = 0; u < m; ++u)
    for (int v : e.rotation[u])
      if (u < v) edges.push_back({u, v});
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (e.points[i].x == e.points[j].x && e.points[i].y == e.points[j].y) return false;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      auto [a, b] = edges[i];
      auto [c, d] = edges[j];
      const auto &pa = e.points[a], &pb = e.points[b], &pc = e.points[c], &pd = e.points[d];
      if (a == c || a == d || b == c || b == d) {
        // shared endpoint: only overlap along a common line is a defect
        int shared = (a == c || a == d) ? a : b;
        int x = shared == a ? b : a;
        int y = (c == shared) ? d : c;
        const auto &ps = e.points[shared], &px = e.points[x], &py = e.points[y];
        if (cross(ps, px, py) == 0 && ((px.x - ps.x) * (py.x - ps.x) + (px.y - ps.y) * (py.y - ps.y)) > 0) return false;
        continue;
      }
      if (segments_meet(pa, pb, pc, pd)) return false;
    }
  }
  return true;
}

}  // namespace knotcert
