#include "knotcert/simplicial.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace knotcert {

namespace {

using Tri = std::array<int, 3>;

struct ArrayHash {
  template <std::size_t N>
  std::size_t operator()(const std::array<int, N>& a) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : a) h = (h ^ static_cast<std::size_t>(x + 1)) * 1099511628211ull;
    return h;
  }
};

Tet sorted_tet(int a, int b, int c, int d) {
  Tet t{a, b, c, d};
  std::sort(t.begin(), t.end());
  return t;
}

bool contains(const Tet& t, int v) { return std::find(t.begin(), t.end(), v) != t.end(); }

std::set<std::pair<int, int>> link_edge_set(const SimplicialComplex& k) {
  std::set<std::pair<int, int>> edges;
  for (const auto& cyc : k.link_cycles)
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  return edges;
}

/// Other two vertices of every tetrahedron around edge ab, arranged as a cycle.
std::vector<int> edge_link_cycle(const std::vector<Tet>& tets, int a, int b) {
  std::map<int, std::vector<int>> adj;
  for (const auto& t : tets) {
    if (!contains(t, a) || !contains(t, b)) continue;
    std::array<int, 2> xy{};
    int k = 0;
    for (int v : t)
      if (v != a && v != b) xy[k++] = v;
    adj[xy[0]].push_back(xy[1]);
    adj[xy[1]].push_back(xy[0]);
  }
  if (adj.empty()) throw std::logic_error("link edge lies in no tetrahedron");
  for (auto& [v, nb] : adj) {
    if (nb.size() != 2) throw std::logic_error("link edge is not interior to a 3-manifold");
    std::sort(nb.begin(), nb.end());
  }
  std::vector<int> cyc{adj.begin()->first};
  int prev = -1, cur = cyc[0];
  for (;;) {
    const auto& nb = adj[cur];
    int next = nb[0] != prev ? nb[0] : nb[1];
    if (prev == -1) next = nb[0];
    if (next == cyc[0]) break;
    cyc.push_back(next);
    prev = cur;
    cur = next;
  }
  if (cyc.size() != adj.size()) throw std::logic_error("edge link is not a single cycle");
  return cyc;
}

void stellar_edge(SimplicialComplex& k, int a, int b) {
  int m = k.add_vertex();
  std::vector<Tet> out;
  out.reserve(k.tets.size() + 8);
  for (const auto& t : k.tets) {
    if (contains(t, a) && contains(t, b)) {
      Tet x = t, y = t;
      for (auto& v : x)
        if (v == a) v = m;
      for (auto& v : y)
        if (v == b) v = m;
      std::sort(x.begin(), x.end());
      std::sort(y.begin(), y.end());
      out.push_back(x);
      out.push_back(y);
    } else {
      out.push_back(t);
    }
  }
  k.tets = std::move(out);
  for (auto& cyc : k.link_cycles) {
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      int p = cyc[i], q = cyc[(i + 1) % cyc.size()];
      if ((p == a && q == b) || (p == b && q == a)) {
        cyc.insert(cyc.begin() + static_cast<long>(i) + 1, m);
        return;
      }
    }
  }
}

/// Three tetrahedra filling the prism with triangles A, B and vertical edges A[i]B[i]; every
/// square side is cut by the diagonal through its smallest vertex.
void fill_prism(std::array<int, 3> A, std::array<int, 3> B, std::vector<Tet>& out) {
  int lo = std::min({A[0], A[1], A[2], B[0], B[1], B[2]});
  if (std::find(B.begin(), B.end(), lo) != B.end()) std::swap(A, B);
  while (A[0] != lo) {
    std::rotate(A.begin(), A.begin() + 1, A.end());
    std::rotate(B.begin(), B.begin() + 1, B.end());
  }
  out.push_back(sorted_tet(A[0], B[0], B[1], B[2]));
  int quad_min = std::min({A[1], A[2], B[1], B[2]});
  if (quad_min == A[1] || quad_min == B[2]) {
    out.push_back(sorted_tet(A[0], A[1], B[1], B[2]));
    out.push_back(sorted_tet(A[0], A[1], A[2], B[2]));
  } else {
    out.push_back(sorted_tet(A[0], A[2], B[1], B[2]));
    out.push_back(sorted_tet(A[0], A[1], A[2], B[1]));
  }
}

}  // namespace

void SimplicialComplex::add_tet(int a, int b, int c, int d) {
  Tet t = sorted_tet(a, b, c, d);
  if (t[0] == t[1] || t[1] == t[2] || t[2] == t[3]) throw std::logic_error("degenerate tetrahedron");
  tets.push_back(t);
}

std::vector<char> SimplicialComplex::link_vertex_mask() const {
  std::vector<char> mask(num_vertices, 0);
  for (const auto& cyc : link_cycles)
    for (int v : cyc) mask[v] = 1;
  return mask;
}

SimplicialComplex barycentric_subdivision(const SimplicialComplex& k) {
  SimplicialComplex out;
  out.num_vertices = k.num_vertices;
  std::unordered_map<Tet, int, ArrayHash> centre;
  auto bary = [&](std::vector<int> verts) {
    std::sort(verts.begin(), verts.end());
    Tet key{-1, -1, -1, -1};
    std::copy(verts.begin(), verts.end(), key.begin());
    auto it = centre.find(key);
    if (it != centre.end()) return it->second;
    int id = out.add_vertex();
    centre.emplace(key, id);
    return id;
  };
  out.tets.reserve(24 * k.tets.size());
  for (const auto& t : k.tets) {
    std::array<int, 4> s = t;
    do {
      out.add_tet(s[0], bary({s[0], s[1]}), bary({s[0], s[1], s[2]}), bary({s[0], s[1], s[2], s[3]}));
    } while (std::next_permutation(s.begin(), s.end()));
  }
  for (const auto& cyc : k.link_cycles) {
    std::vector<int> next;
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      next.push_back(cyc[i]);
      next.push_back(bary({cyc[i], cyc[(i + 1) % cyc.size()]}));
    }
    out.link_cycles.push_back(std::move(next));
  }
  return out;
}

void make_link_full(SimplicialComplex& k) {
  for (;;) {
    auto mask = k.link_vertex_mask();
    auto ledges = link_edge_set(k);
    std::set<std::pair<int, int>> chords;
    std::vector<Tri> flat;
    for (const auto& t : k.tets) {
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
          if (mask[t[i]] && mask[t[j]] && !ledges.count({t[i], t[j]})) chords.insert({t[i], t[j]});
      for (int f = 0; f < 4; ++f) {
        Tri tri{};
        int c = 0;
        for (int i = 0; i < 4; ++i)
          if (i != f) tri[c++] = t[i];
        if (mask[tri[0]] && mask[tri[1]] && mask[tri[2]]) flat.push_back(tri);
      }
    }
    if (!chords.empty()) {
      stellar_edge(k, chords.begin()->first, chords.begin()->second);
      continue;
    }
    if (!flat.empty()) {
      std::sort(flat.begin(), flat.end());
      stellar_edge(k, flat[0][0], flat[0][1]);
      continue;
    }
    for (const auto& t : k.tets)
      if (mask[t[0]] + mask[t[1]] + mask[t[2]] + mask[t[3]] > 2) throw std::logic_error("link is not full");
    return;
  }
}

Drilled truncate_link(const SimplicialComplex& k) {
  auto mask = k.link_vertex_mask();
  Drilled d;
  d.complex.num_vertices = k.num_vertices;
  std::map<std::pair<int, int>, int> near;
  auto p = [&](int a, int x) {
    auto it = near.find({a, x});
    if (it != near.end()) return it->second;
    int id = d.complex.add_vertex();
    near.emplace(std::make_pair(a, x), id);
    return id;
  };
  // allocate truncation points in a deterministic order
  for (const auto& t : k.tets)
    for (int a : t)
      if (mask[a])
        for (int x : t)
          if (!mask[x]) p(a, x);
  for (const auto& t : k.tets) {
    std::vector<int> in, out;
    for (int v : t) (mask[v] ? in : out).push_back(v);
    if (in.empty()) {
      d.complex.tets.push_back(t);
    } else if (in.size() == 1) {
      int a = in[0];
      fill_prism({p(a, out[0]), p(a, out[1]), p(a, out[2])}, {out[0], out[1], out[2]}, d.complex.tets);
    } else if (in.size() == 2) {
      int a = in[0], b = in[1], c = out[0], e = out[1];
      fill_prism({c, p(a, c), p(b, c)}, {e, p(a, e), p(b, e)}, d.complex.tets);
    } else {
      throw std::logic_error("truncation needs a full link");
    }
  }
  for (const auto& cyc : k.link_cycles) {
    std::vector<int> ring;
    for (int x : edge_link_cycle(k.tets, cyc[0], cyc[1])) ring.push_back(p(cyc[0], x));
    d.meridians.push_back(std::move(ring));
  }
  return d;
}

Drilled remove_link_star(const SimplicialComplex& k) {
  auto mask = k.link_vertex_mask();
  Drilled d;
  d.complex.num_vertices = k.num_vertices;
  for (const auto& t : k.tets)
    if (!mask[t[0]] && !mask[t[1]] && !mask[t[2]] && !mask[t[3]]) d.complex.tets.push_back(t);
  for (const auto& cyc : k.link_cycles) d.meridians.push_back(edge_link_cycle(k.tets, cyc[0], cyc[1]));
  return d;
}

namespace {

class Contractor {
 public:
  explicit Contractor(Drilled& d) : d_(d) {
    auto& k = d_.complex;
    omega_ = k.num_vertices;
    std::map<Tri, int> face_count;
    for (const auto& t : k.tets)
      for (int f = 0; f < 4; ++f) ++face_count[face_of(t, f)];
    tets_ = k.tets;
    for (const auto& [tri, c] : face_count)
      if (c == 1) tets_.push_back(sorted_tet(tri[0], tri[1], tri[2], omega_));
    alive_.assign(tets_.size(), 1);
    star_.assign(omega_ + 1, {});
    for (int i = 0; i < static_cast<int>(tets_.size()); ++i)
      for (int v : tets_[i]) star_[v].push_back(i);
    boundary_.assign(omega_ + 1, 0);
    for (int i : star_[omega_])
      for (int v : tets_[i]) boundary_[v] = 1;
    loop_of_.assign(omega_ + 1, -1);
    for (int l = 0; l < static_cast<int>(d_.meridians.size()); ++l)
      for (int v : d_.meridians[l]) loop_of_[v] = l;
  }

  void run() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int u = 0; u < omega_; ++u) {
        for (int v : neighbours(u)) {
          if (v == omega_) continue;
          if (try_contract(u, v)) {
            changed = true;
            break;
          }
        }
      }
    }
    SimplicialComplex out;
    out.num_vertices = omega_;
    for (std::size_t i = 0; i < tets_.size(); ++i)
      if (alive_[i] && !contains(tets_[i], omega_)) out.tets.push_back(tets_[i]);
    std::sort(out.tets.begin(), out.tets.end());
    d_.complex = std::move(out);
  }

 private:
  static Tri face_of(const Tet& t, int f) {
    Tri tri{};
    int c = 0;
    for (int i = 0; i < 4; ++i)
      if (i != f) tri[c++] = t[i];
    return tri;
  }

  std::vector<int> live_star(int v) {
    auto& s = star_[v];
    std::vector<int> out;
    for (int i : s)
      if (alive_[i] && contains(tets_[i], v)) out.push_back(i);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    s = out;
    return out;
  }

  std::vector<int> neighbours(int u) {
    std::vector<int> nb;
    for (int i : live_star(u))
      for (int v : tets_[i])
        if (v != u) nb.push_back(v);
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    return nb;
  }

  static long long key2(int a, int b) { return (static_cast<long long>(std::min(a, b)) << 32) | std::max(a, b); }

  bool link_condition(int u, int v, const std::vector<int>& su, const std::vector<int>& sv) {
    std::vector<int> lk_uv_vertices;
    std::vector<long long> lk_uv_edges;
    std::vector<int> nu, nv;
    std::vector<long long> eu, ev;
    std::vector<Tri> tu, tv;
    auto collect = [&](int self, int other, const std::vector<int>& star, std::vector<int>& nverts,
                       std::vector<long long>& nedges, std::vector<Tri>& ntris, bool record_shared) {
      for (int i : star) {
        const auto& t = tets_[i];
        std::array<int, 3> rest{};
        int c = 0;
        for (int x : t)
          if (x != self) rest[c++] = x;
        bool shared = contains(t, other);
        if (shared) {
          if (record_shared) {
            std::array<int, 2> wx{};
            int k = 0;
            for (int x : rest)
              if (x != other) wx[k++] = x;
            lk_uv_vertices.push_back(wx[0]);
            lk_uv_vertices.push_back(wx[1]);
            lk_uv_edges.push_back(key2(wx[0], wx[1]));
          }
          for (int x : rest)
            if (x != other) nverts.push_back(x);
          for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b)
              if (rest[a] != other && rest[b] != other) nedges.push_back(key2(rest[a], rest[b]));
          continue;
        }
        for (int x : rest) nverts.push_back(x);
        for (int a = 0; a < 3; ++a)
          for (int b = a + 1; b < 3; ++b) nedges.push_back(key2(rest[a], rest[b]));
        ntris.push_back(rest);
      }
      auto uniq = [](auto& vec) {
        std::sort(vec.begin(), vec.end());
        vec.erase(std::unique(vec.begin(), vec.end()), vec.end());
      };
      uniq(nverts);
      uniq(nedges);
      uniq(ntris);
    };
    collect(u, v, su, nu, eu, tu, true);
    collect(v, u, sv, nv, ev, tv, false);
    std::sort(lk_uv_vertices.begin(), lk_uv_vertices.end());
    lk_uv_vertices.erase(std::unique(lk_uv_vertices.begin(), lk_uv_vertices.end()), lk_uv_vertices.end());
    std::sort(lk_uv_edges.begin(), lk_uv_edges.end());

    std::vector<int> common_v;
    std::set_intersection(nu.begin(), nu.end(), nv.begin(), nv.end(), std::back_inserter(common_v));
    if (common_v != lk_uv_vertices) return false;
    std::vector<long long> common_e;
    std::set_intersection(eu.begin(), eu.end(), ev.begin(), ev.end(), std::back_inserter(common_e));
    if (common_e != lk_uv_edges) return false;
    std::vector<Tri> common_t;
    std::set_intersection(tu.begin(), tu.end(), tv.begin(), tv.end(), std::back_inserter(common_t));
    return common_t.empty();
  }

  bool try_contract(int u, int v) {
    int keep = u, gone = v;
    if (boundary_[v] && !boundary_[u]) std::swap(keep, gone);
    int lk = loop_of_[keep], lg = loop_of_[gone];
    if (lk >= 0 && lg >= 0) {
      if (lk != lg) return false;
      auto& loop = d_.meridians[lk];
      const int n = static_cast<int>(loop.size());
      int ik = static_cast<int>(std::find(loop.begin(), loop.end(), keep) - loop.begin());
      int ig = static_cast<int>(std::find(loop.begin(), loop.end(), gone) - loop.begin());
      if (n <= 3 || !((ik + 1) % n == ig || (ig + 1) % n == ik)) return false;
    }
    auto su = live_star(u), sv = live_star(v);
    if (!link_condition(u, v, su, sv)) return false;

    for (int i : live_star(gone)) {
      if (contains(tets_[i], keep)) {
        alive_[i] = 0;
        continue;
      }
      for (auto& x : tets_[i])
        if (x == gone) x = keep;
      std::sort(tets_[i].begin(), tets_[i].end());
      star_[keep].push_back(i);
    }
    star_[gone].clear();
    boundary_[keep] = boundary_[keep] || boundary_[gone];
    if (lg >= 0) {
      auto& loop = d_.meridians[lg];
      if (lk >= 0) {
        loop.erase(std::find(loop.begin(), loop.end(), gone));
      } else {
        *std::find(loop.begin(), loop.end(), gone) = keep;
        loop_of_[keep] = lg;
      }
      loop_of_[gone] = -1;
    }
    return true;
  }

  Drilled& d_;
  int omega_ = 0;
  std::vector<Tet> tets_;
  std::vector<char> alive_;
  std::vector<std::vector<int>> star_;
  std::vector<char> boundary_;
  std::vector<int> loop_of_;
};

}  // namespace

void contract_edges(Drilled& d) { Contractor(d).run(); }

Converted to_triangulation(const SimplicialComplex& k) {
  Converted c;
  c.relabel.assign(k.num_vertices, -1);
  std::vector<char> used(k.num_vertices, 0);
  for (const auto& t : k.tets)
    for (int v : t) used[v] = 1;
  int next = 0;
  for (int v = 0; v < k.num_vertices; ++v)
    if (used[v]) c.relabel[v] = next++;
  for (const auto& t : k.tets) c.tets.push_back(sorted_tet(c.relabel[t[0]], c.relabel[t[1]], c.relabel[t[2]], c.relabel[t[3]]));
  std::sort(c.tets.begin(), c.tets.end());
  const int n = static_cast<int>(c.tets.size());
  c.tri = Triangulation(n);
  std::unordered_map<Tri, std::pair<int, int>, ArrayHash> open;
  open.reserve(4 * c.tets.size());
  for (int i = 0; i < n; ++i) {
    for (int f = 0; f < 4; ++f) {
      Tri tri{};
      int q = 0;
      for (int j = 0; j < 4; ++j)
        if (j != f) tri[q++] = c.tets[i][j];
      auto it = open.find(tri);
      if (it == open.end()) {
        open.emplace(tri, std::make_pair(i, f));
        continue;
      }
      auto [j, g] = it->second;
      if (j < 0) throw std::logic_error("triangle shared by more than two tetrahedra");
      std::array<int, 4> img{};
      for (int x = 0; x < 4; ++x) {
        if (x == f) {
          img[x] = g;
          continue;
        }
        img[x] = static_cast<int>(std::find(c.tets[j].begin(), c.tets[j].end(), c.tets[i][x]) - c.tets[j].begin());
      }
      c.tri.join(i, f, j, Perm4(img[0], img[1], img[2], img[3]));
      it->second = {-1, -1};
    }
  }
  return c;
}

std::array<int, 2> Converted::locate_edge(int a, int b) const {
  int x = relabel.at(a), y = relabel.at(b);
  for (int i = 0; i < static_cast<int>(tets.size()); ++i) {
    const auto& t = tets[i];
    auto px = std::find(t.begin(), t.end(), x), py = std::find(t.begin(), t.end(), y);
    if (px != t.end() && py != t.end())
      return {i, edge_number(static_cast<int>(px - t.begin()), static_cast<int>(py - t.begin()))};
  }
  throw std::logic_error("marked edge is not an edge of the triangulation");
}

}  // namespace knotcert
