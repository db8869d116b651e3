#include "knotcert/simplify.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "knotcert/complement.hpp"
#include "knotcert/union_find.hpp"

namespace knotcert {

namespace {

using Token = std::array<int, 2>;

struct BoundarySignature {
  std::vector<int> eulers;
  bool operator==(const BoundarySignature&) const = default;
};

BoundarySignature signature(const Triangulation& t) {
  BoundarySignature s;
  for (const auto& c : boundary_components(t)) s.eulers.push_back(c.euler);
  std::sort(s.eulers.begin(), s.eulers.end());
  return s;
}

/// Rebuilds a triangulation from the surviving tetrahedra of `work`.
Triangulation compact(const Triangulation& work, const std::vector<char>& removed, std::vector<int>& renum) {
  renum.assign(work.size(), -1);
  int n = 0;
  for (int i = 0; i < work.size(); ++i)
    if (!removed[i]) renum[i] = n++;
  Triangulation out(n);
  for (int i = 0; i < work.size(); ++i) {
    if (removed[i]) continue;
    for (int f = 0; f < 4; ++f) {
      const auto& g = work.gluing(i, f);
      if (g.boundary() || removed[g.tet]) continue;
      int a = renum[i], b = renum[g.tet];
      if (a < b || (a == b && f < g.perm[f])) out.join(a, f, b, g.perm);
    }
  }
  return out;
}

bool acceptable(const TrackedTriangulation& before, const TrackedTriangulation& after) {
  if (after.tri.size() == 0) return false;
  if (after.tri.validity_error()) return false;
  if (!(signature(after.tri) == signature(before.tri))) return false;
  return loops_are_simple(after.tri, after.loops);
}

/// A tetrahedron taking part in a local retriangulation, with labels for its four corners.
struct LabelledTet {
  int tet;
  std::array<int, 4> labels;
};

/// Replaces the ball formed by `old_tets` with `new_tets` (given by corner labels). Faces on the
/// surface of the ball keep their outside gluings; loop edges are carried by their labels.
std::optional<TrackedTriangulation> replace_ball(const TrackedTriangulation& t, const std::vector<LabelledTet>& old_tets,
                                                 const std::vector<std::array<int, 4>>& new_tets) {
  const auto& tri = t.tri;
  std::map<int, std::array<int, 4>> label_of;
  for (const auto& lt : old_tets) {
    if (label_of.count(lt.tet)) return std::nullopt;
    label_of[lt.tet] = lt.labels;
  }
  auto key = [](std::array<int, 3> a) {
    std::sort(a.begin(), a.end());
    return a;
  };
  // outside gluing of every surface triangle, as (outside tet, map label -> outside vertex)
  struct Outside {
    bool boundary = true;
    int tet = -1;
    std::map<int, int> vertex;
  };
  std::map<std::array<int, 3>, Outside> surface;
  std::map<std::array<int, 3>, int> inner_count;
  for (const auto& lt : old_tets) {
    for (int f = 0; f < 4; ++f) {
      std::array<int, 3> tri_labels{};
      int k = 0;
      for (int v = 0; v < 4; ++v)
        if (v != f) tri_labels[k++] = lt.labels[v];
      const auto& g = tri.gluing(lt.tet, f);
      if (!g.boundary() && label_of.count(g.tet)) {
        // internal to the ball: labels must agree across the gluing
        const auto& other = label_of[g.tet];
        for (int v = 0; v < 4; ++v)
          if (v != f && other[g.perm[v]] != lt.labels[v]) return std::nullopt;
        ++inner_count[key(tri_labels)];
        continue;
      }
      Outside o;
      if (!g.boundary()) {
        o.boundary = false;
        o.tet = g.tet;
        for (int v = 0; v < 4; ++v)
          if (v != f) o.vertex[lt.labels[v]] = g.perm[v];
      }
      if (!surface.emplace(key(tri_labels), o).second) return std::nullopt;
    }
  }

  const int old_n = tri.size();
  std::vector<char> removed(old_n, 0);
  for (const auto& lt : old_tets) removed[lt.tet] = 1;
  std::vector<int> renum;
  int survivors = 0;
  for (int i = 0; i < old_n; ++i)
    if (!removed[i]) ++survivors;
  TrackedTriangulation out;
  Triangulation base = compact(tri, removed, renum);
  out.tri = Triangulation(survivors + static_cast<int>(new_tets.size()));
  for (int i = 0; i < survivors; ++i)
    for (int f = 0; f < 4; ++f) {
      const auto& g = base.gluing(i, f);
      if (!g.boundary() && (i < g.tet || (i == g.tet && f < g.perm[f]))) out.tri.join(i, f, g.tet, g.perm);
    }

  std::map<std::array<int, 3>, std::pair<int, int>> open;  // inner faces of the new tets
  std::set<std::array<int, 3>> used_surface;
  for (int j = 0; j < static_cast<int>(new_tets.size()); ++j) {
    const auto& lab = new_tets[j];
    int me = survivors + j;
    for (int f = 0; f < 4; ++f) {
      std::array<int, 3> tl{};
      int k = 0;
      for (int v = 0; v < 4; ++v)
        if (v != f) tl[k++] = lab[v];
      auto kk = key(tl);
      auto s = surface.find(kk);
      if (s != surface.end()) {
        if (!used_surface.insert(kk).second) return std::nullopt;
        const auto& o = s->second;
        if (o.boundary) continue;
        std::array<int, 4> img{};
        int other_face = 0 + 6;
        for (int v = 0; v < 4; ++v)
          if (v != f) img[v] = o.vertex.at(lab[v]);
        other_face -= img[(f + 1) % 4] + img[(f + 2) % 4] + img[(f + 3) % 4];
        img[f] = other_face;
        int target = renum[o.tet];
        if (target < 0) {
          // the outside tetrahedron is itself replaced: glue to the new tetrahedron holding these labels
          return std::nullopt;
        }
        if (!out.tri.is_boundary_face(target, other_face)) return std::nullopt;
        out.tri.join(me, f, target, Perm4(img[0], img[1], img[2], img[3]));
        continue;
      }
      auto it = open.find(kk);
      if (it == open.end()) {
        open[kk] = {me, f};
        continue;
      }
      auto [other, of] = it->second;
      const auto& olab = new_tets[other - survivors];
      std::array<int, 4> img{};
      for (int v = 0; v < 4; ++v)
        img[v] = v == f ? of : static_cast<int>(std::find(olab.begin(), olab.end(), lab[v]) - olab.begin());
      out.tri.join(me, f, other, Perm4(img[0], img[1], img[2], img[3]));
      open.erase(it);
    }
  }
  if (!open.empty() || used_surface.size() != surface.size()) return std::nullopt;

  for (const auto& loop : t.loops) {
    std::vector<Token> next;
    for (const auto& tok : loop) {
      if (!removed[tok[0]]) {
        next.push_back({renum[tok[0]], tok[1]});
        continue;
      }
      const auto& lab = label_of[tok[0]];
      int x = lab[kEdgeVertices[tok[1]][0]], y = lab[kEdgeVertices[tok[1]][1]];
      bool found = false;
      for (int j = 0; j < static_cast<int>(new_tets.size()) && !found; ++j) {
        const auto& nl = new_tets[j];
        auto px = std::find(nl.begin(), nl.end(), x), py = std::find(nl.begin(), nl.end(), y);
        if (px != nl.end() && py != nl.end()) {
          next.push_back({survivors + j, edge_number(static_cast<int>(px - nl.begin()), static_cast<int>(py - nl.begin()))});
          found = true;
        }
      }
      if (!found) return std::nullopt;
    }
    out.loops.push_back(std::move(next));
  }
  if (!acceptable(t, out)) return std::nullopt;
  return out;
}

}  // namespace

bool loops_are_simple(const Triangulation& tri, const std::vector<std::vector<Token>>& loops) {
  for (const auto& loop : loops) {
    const int n = static_cast<int>(loop.size());
    if (n == 0) return false;
    std::vector<int> cls;
    std::vector<std::array<int, 2>> ends;
    for (const auto& tok : loop) {
      int e = tri.edge_class(tok[0], tok[1]);
      if (!tri.edge_on_boundary(e)) return false;
      cls.push_back(e);
      ends.push_back({tri.vertex_class(tok[0], kEdgeVertices[tok[1]][0]), tri.vertex_class(tok[0], kEdgeVertices[tok[1]][1])});
    }
    auto sorted = cls;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    if (n == 1) {
      if (ends[0][0] != ends[0][1]) return false;
      continue;
    }
    // walk the loop, choosing the direction of the first edge that connects to the second
    std::vector<int> verts;
    int cur = -1;
    for (int start = 0; start < 2 && verts.empty(); ++start) {
      cur = ends[0][start];
      std::vector<int> walk{cur};
      bool ok = true;
      for (int i = 0; i < n; ++i) {
        const auto& en = ends[i];
        int next;
        if (en[0] == cur)
          next = en[1];
        else if (en[1] == cur)
          next = en[0];
        else {
          ok = false;
          break;
        }
        if (en[0] == en[1]) {
          ok = false;
          break;
        }
        cur = next;
        walk.push_back(cur);
      }
      if (ok && walk.back() == walk.front()) {
        walk.pop_back();
        verts = walk;
      }
    }
    if (verts.empty()) return false;
    std::sort(verts.begin(), verts.end());
    if (std::adjacent_find(verts.begin(), verts.end()) != verts.end()) return false;
  }
  return true;
}

std::optional<TrackedTriangulation> collapse_edge(const TrackedTriangulation& t, int e) {
  const auto& tri = t.tri;
  auto ends = tri.edge_endpoints(e);
  if (ends[0] == ends[1]) return std::nullopt;
  if (tri.vertex_on_boundary(ends[0]) && tri.vertex_on_boundary(ends[1]) && !tri.edge_on_boundary(e)) return std::nullopt;
  const auto& emb = tri.edge_embeddings(e);
  std::vector<char> removed(tri.size(), 0);
  for (const auto& x : emb) {
    if (removed[x.tet]) return std::nullopt;
    removed[x.tet] = 1;
  }

  // edges identified in pairs by the triangles around e; must form a forest
  UnionFind edge_uf(tri.num_edges());
  std::set<int> seen_triangles;
  for (const auto& x : emb) {
    int p = kEdgeVertices[x.edge][0], q = kEdgeVertices[x.edge][1];
    for (int r = 0; r < 4; ++r) {
      if (r == p || r == q) continue;
      int face = tri.face_class(x.tet, r);
      if (!seen_triangles.insert(face).second) continue;
      int y = 6 - p - q - r;  // the third vertex of this triangle
      int ep = tri.edge_class(x.tet, edge_number(p, y)), eq = tri.edge_class(x.tet, edge_number(q, y));
      if (ep == e || eq == e) return std::nullopt;
      if (!edge_uf.unite(ep, eq)) return std::nullopt;
    }
  }
  // triangles identified in pairs by the flattened tetrahedra; boundary acts as one node
  const int boundary_node = tri.num_faces();
  UnionFind face_uf(tri.num_faces() + 1);
  for (int a = 0; a < tri.size(); ++a)
    for (int f = 0; f < 4; ++f)
      if (tri.is_boundary_face(a, f)) face_uf.unite(tri.face_class(a, f), boundary_node);
  for (const auto& x : emb) {
    int p = kEdgeVertices[x.edge][0], q = kEdgeVertices[x.edge][1];
    if (!face_uf.unite(tri.face_class(x.tet, p), tri.face_class(x.tet, q))) return std::nullopt;
  }

  Triangulation work = tri;
  for (const auto& x : emb) {
    int p = kEdgeVertices[x.edge][0], q = kEdgeVertices[x.edge][1];
    Gluing gp = work.gluing(x.tet, p), gq = work.gluing(x.tet, q);
    for (int f = 0; f < 4; ++f) work.unjoin(x.tet, f);
    if (gp.boundary() || gq.boundary()) continue;
    if (gp.tet == x.tet || gq.tet == x.tet) return std::nullopt;
    Perm4 perm = gq.perm * Perm4::swap(p, q) * gp.perm.inverse();
    int af = gp.perm[p];
    if (!work.is_boundary_face(gp.tet, af) || !work.is_boundary_face(gq.tet, perm[af])) return std::nullopt;
    if (gp.tet == gq.tet && af == perm[af]) return std::nullopt;
    work.join(gp.tet, af, gq.tet, perm);
  }
  TrackedTriangulation out;
  std::vector<int> renum;
  out.tri = compact(work, removed, renum);

  // carry the loops: a loop edge becomes the class of any surviving edge it is identified with
  std::vector<std::vector<int>> members(tri.num_edges());
  for (int c = 0; c < tri.num_edges(); ++c) members[edge_uf.find(c)].push_back(c);
  for (const auto& loop : t.loops) {
    std::vector<Token> next;
    for (const auto& tok : loop) {
      int c = tri.edge_class(tok[0], tok[1]);
      if (c == e) continue;
      std::optional<Token> rep;
      if (!removed[tok[0]]) rep = Token{renum[tok[0]], tok[1]};
      for (int other : members[edge_uf.find(c)]) {
        if (rep) break;
        for (const auto& y : tri.edge_embeddings(other))
          if (!removed[y.tet]) {
            rep = Token{renum[y.tet], y.edge};
            break;
          }
      }
      if (!rep) return std::nullopt;
      next.push_back(*rep);
    }
    if (next.empty()) return std::nullopt;
    out.loops.push_back(std::move(next));
  }
  if (!acceptable(t, out)) return std::nullopt;
  return out;
}

std::optional<TrackedTriangulation> three_two_move(const TrackedTriangulation& t, int e) {
  const auto& tri = t.tri;
  if (tri.edge_on_boundary(e) || tri.edge_valence(e) != 3) return std::nullopt;
  enum { P = 0, Q = 1, A = 2, B = 3, C = 4 };
  const auto& start = tri.edge_embeddings(e).front();
  std::vector<LabelledTet> ball;
  int tet = start.tet;
  int p = kEdgeVertices[start.edge][0], q = kEdgeVertices[start.edge][1];
  int r = -1, s = -1;
  for (int v = 0; v < 4; ++v)
    if (v != p && v != q) (r < 0 ? r : s) = v;
  std::array<int, 4> lab{};
  lab[p] = P;
  lab[q] = Q;
  lab[r] = A;
  lab[s] = B;
  ball.push_back({tet, lab});
  const int ring[3] = {A, B, C};
  for (int step = 0; step < 2; ++step) {
    // cross the face opposite the corner labelled ring[step]
    const auto& cur = ball.back();
    int opp = static_cast<int>(std::find(cur.labels.begin(), cur.labels.end(), ring[step]) - cur.labels.begin());
    const auto& g = tri.gluing(cur.tet, opp);
    if (g.boundary()) return std::nullopt;
    std::array<int, 4> nl{};
    for (int v = 0; v < 4; ++v)
      if (v != opp) nl[g.perm[v]] = cur.labels[v];
    nl[g.perm[opp]] = ring[(step + 2) % 3];
    ball.push_back({g.tet, nl});
  }
  std::vector<std::array<int, 4>> fresh{{A, B, C, P}, {A, B, C, Q}};
  return replace_ball(t, ball, fresh);
}

void simplify(TrackedTriangulation& t) {
  for (;;) {
    bool changed = false;
    for (int e = 0; e < t.tri.num_edges() && !changed; ++e) {
      if (auto r = three_two_move(t, e)) {
        t = std::move(*r);
        changed = true;
      }
    }
    for (int e = 0; e < t.tri.num_edges() && !changed; ++e) {
      if (auto r = collapse_edge(t, e)) {
        t = std::move(*r);
        changed = true;
      }
    }
    if (!changed) return;
  }
}

}  // namespace knotcert
