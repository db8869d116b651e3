#include "knotcert/triangulation.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "knotcert/union_find.hpp"

namespace knotcert {

namespace {

/// Union-find that tracks relative orientation (parity) between members.
class ParityUnionFind {
 public:
  explicit ParityUnionFind(std::size_t n) : parent_(n), parity_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::pair<std::size_t, int> find(std::size_t x) {
    int par = 0;
    std::size_t root = x;
    while (parent_[root] != root) {
      par ^= parity_[root];
      root = parent_[root];
    }
    // path compression with parity fix-up
    int acc = par;
    while (parent_[x] != x) {
      std::size_t next = parent_[x];
      int own = parity_[x];
      parent_[x] = root;
      parity_[x] = acc;
      acc ^= own;
      x = next;
    }
    return {root, par};
  }

  /// Returns false when a and b are already joined with the opposite relative parity.
  bool unite(std::size_t a, std::size_t b, int parity) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) return (pa ^ pb) == parity;
    parent_[rb] = ra;
    parity_[rb] = pa ^ pb ^ parity;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> parity_;
};

constexpr std::array<std::array<int, 3>, 6> kS3{{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

}  // namespace

int face_perm_code(int face, Perm4 perm) {
  auto src = face_vertices(face);
  auto dst = face_vertices(perm[face]);
  std::array<int, 3> sigma{};
  for (int k = 0; k < 3; ++k)
    sigma[k] = static_cast<int>(std::find(dst.begin(), dst.end(), perm[src[k]]) - dst.begin());
  return static_cast<int>(std::find(kS3.begin(), kS3.end(), sigma) - kS3.begin());
}

Perm4 face_perm_from_code(int face, int target_face, int code) {
  auto src = face_vertices(face);
  auto dst = face_vertices(target_face);
  std::array<int, 4> img{};
  img[face] = target_face;
  for (int k = 0; k < 3; ++k) img[src[k]] = dst[kS3[code][k]];
  return Perm4(img[0], img[1], img[2], img[3]);
}

Triangulation::Triangulation(int tetrahedra) : gluings_(tetrahedra) {}

int Triangulation::add_tetrahedron() {
  gluings_.emplace_back();
  skeleton_.reset();
  return size() - 1;
}

void Triangulation::join(int tet, int face, int other, Perm4 perm) {
  if (tet < 0 || tet >= size() || other < 0 || other >= size()) throw TriangulationError("join: tetrahedron out of range");
  int other_face = perm[face];
  if (!gluings_[tet][face].boundary() || !gluings_[other][other_face].boundary())
    throw TriangulationError("join: face already glued");
  if (tet == other && face == other_face) throw TriangulationError("join: face glued to itself");
  gluings_[tet][face] = {other, perm};
  gluings_[other][other_face] = {tet, perm.inverse()};
  skeleton_.reset();
}

void Triangulation::unjoin(int tet, int face) {
  auto g = gluings_[tet][face];
  if (g.boundary()) return;
  gluings_[g.tet][g.perm[face]] = Gluing{};
  gluings_[tet][face] = Gluing{};
  skeleton_.reset();
}

const Triangulation::Skeleton& Triangulation::skeleton() const {
  if (skeleton_) return *skeleton_;
  Skeleton s;
  const int t = size();
  UnionFind vuf(4 * t), fuf(4 * t);
  ParityUnionFind euf(6 * t);
  std::vector<char> edge_conflict(6 * t, 0);
  for (int a = 0; a < t; ++a) {
    for (int f = 0; f < 4; ++f) {
      const auto& g = gluings_[a][f];
      if (g.boundary()) continue;
      fuf.unite(4 * a + f, 4 * g.tet + g.perm[f]);
      for (int v : face_vertices(f)) vuf.unite(4 * a + v, 4 * g.tet + g.perm[v]);
      auto fv = face_vertices(f);
      for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
          int u = fv[i], v = fv[j];
          int eb = edge_number(g.perm[u], g.perm[v]);
          int parity = g.perm[u] > g.perm[v] ? 1 : 0;
          if (!euf.unite(6 * a + edge_number(u, v), 6 * g.tet + eb, parity)) edge_conflict[6 * a + edge_number(u, v)] = 1;
        }
      }
    }
  }
  s.vertex_of.resize(t);
  s.edge_of.resize(t);
  s.face_of.resize(t);
  auto vlabels = vuf.labels(&s.num_vertices);
  auto flabels = fuf.labels(&s.num_faces);
  std::vector<int> eroot_label(6 * t, -1);
  int ne = 0;
  for (int a = 0; a < t; ++a) {
    for (int v = 0; v < 4; ++v) s.vertex_of[a][v] = vlabels[4 * a + v];
    for (int f = 0; f < 4; ++f) s.face_of[a][f] = flabels[4 * a + f];
    for (int e = 0; e < 6; ++e) {
      auto root = euf.find(6 * a + e).first;
      if (eroot_label[root] < 0) eroot_label[root] = ne++;
      s.edge_of[a][e] = eroot_label[root];
    }
  }
  s.edge_embeddings.assign(ne, {});
  s.edge_boundary.assign(ne, 0);
  s.edge_reversed.assign(ne, 0);
  s.vertex_boundary.assign(s.num_vertices, 0);
  for (int a = 0; a < t; ++a) {
    for (int e = 0; e < 6; ++e) {
      int cls = s.edge_of[a][e];
      s.edge_embeddings[cls].push_back({a, e});
      if (edge_conflict[6 * a + e]) s.edge_reversed[cls] = 1;
    }
    for (int f = 0; f < 4; ++f) {
      if (!gluings_[a][f].boundary()) continue;
      auto fv = face_vertices(f);
      for (int v : fv) s.vertex_boundary[s.vertex_of[a][v]] = 1;
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) s.edge_boundary[s.edge_of[a][edge_number(fv[i], fv[j])]] = 1;
    }
  }
  skeleton_ = std::move(s);
  return *skeleton_;
}

int Triangulation::num_vertices() const { return skeleton().num_vertices; }
int Triangulation::num_edges() const { return static_cast<int>(skeleton().edge_embeddings.size()); }
int Triangulation::num_faces() const { return skeleton().num_faces; }
int Triangulation::vertex_class(int tet, int vertex) const { return skeleton().vertex_of[tet][vertex]; }
int Triangulation::edge_class(int tet, int edge) const { return skeleton().edge_of[tet][edge]; }
int Triangulation::face_class(int tet, int face) const { return skeleton().face_of[tet][face]; }
int Triangulation::edge_valence(int e) const { return static_cast<int>(skeleton().edge_embeddings[e].size()); }
const std::vector<EdgeEmbedding>& Triangulation::edge_embeddings(int e) const { return skeleton().edge_embeddings[e]; }
bool Triangulation::edge_on_boundary(int e) const { return skeleton().edge_boundary[e] != 0; }
bool Triangulation::vertex_on_boundary(int v) const { return skeleton().vertex_boundary[v] != 0; }

std::array<int, 2> Triangulation::edge_endpoints(int e) const {
  const auto& emb = skeleton().edge_embeddings[e].front();
  return {vertex_class(emb.tet, kEdgeVertices[emb.edge][0]), vertex_class(emb.tet, kEdgeVertices[emb.edge][1])};
}

int Triangulation::num_boundary_faces() const {
  int n = 0;
  for (const auto& g : gluings_)
    for (const auto& x : g) n += x.boundary() ? 1 : 0;
  return n;
}

std::vector<int> Triangulation::vertex_link_eulers() const {
  const auto& s = skeleton();
  std::vector<long> chi(num_vertices(), 0), halves(num_vertices(), 0);
  for (int a = 0; a < size(); ++a) {
    for (int v = 0; v < 4; ++v) {
      int vc = s.vertex_of[a][v];
      chi[vc] += 1;
      for (int f = 0; f < 4; ++f)
        if (f != v) halves[vc] += gluings_[a][f].boundary() ? 2 : 1;
    }
  }
  for (int e = 0; e < num_edges(); ++e) {
    auto ends = edge_endpoints(e);
    chi[ends[0]] += 1;
    chi[ends[1]] += 1;
  }
  std::vector<int> out(num_vertices());
  for (int v = 0; v < num_vertices(); ++v) out[v] = static_cast<int>(chi[v] - halves[v] / 2);
  return out;
}

int Triangulation::vertex_link_euler(int vc) const { return vertex_link_eulers().at(vc); }

bool Triangulation::is_orientable() const {
  const int t = size();
  std::vector<int> orient(t, -1);
  for (int start = 0; start < t; ++start) {
    if (orient[start] >= 0) continue;
    orient[start] = 0;
    std::vector<int> stack{start};
    while (!stack.empty()) {
      int a = stack.back();
      stack.pop_back();
      for (int f = 0; f < 4; ++f) {
        const auto& g = gluings_[a][f];
        if (g.boundary()) continue;
        int want = g.perm.sign() < 0 ? orient[a] : 1 - orient[a];
        if (orient[g.tet] < 0) {
          orient[g.tet] = want;
          stack.push_back(g.tet);
        } else if (orient[g.tet] != want) {
          return false;
        }
      }
    }
  }
  return true;
}

std::optional<std::string> Triangulation::validity_error() const {
  const int t = size();
  if (t == 0) return "empty triangulation";
  for (int a = 0; a < t; ++a) {
    for (int f = 0; f < 4; ++f) {
      const auto& g = gluings_[a][f];
      if (g.boundary()) continue;
      if (g.tet >= t) return "gluing target out of range";
      const auto& back = gluings_[g.tet][g.perm[f]];
      if (back.tet != a || !(back.perm == g.perm.inverse()))
        return "gluing of tetrahedron " + std::to_string(a) + " face " + std::to_string(f) + " is not an involution";
    }
  }
  const auto& s = skeleton();
  for (int e = 0; e < num_edges(); ++e)
    if (s.edge_reversed[e]) return "edge " + std::to_string(e) + " is identified with itself in reverse";
  auto eulers = vertex_link_eulers();
  for (int v = 0; v < num_vertices(); ++v) {
    int chi = eulers[v];
    int want = vertex_on_boundary(v) ? 1 : 2;
    if (chi != want)
      return "link of vertex " + std::to_string(v) + " has Euler characteristic " + std::to_string(chi) +
             ", expected " + std::to_string(want);
  }
  if (!is_orientable()) return "triangulation is not orientable";
  return std::nullopt;
}

std::string Triangulation::serialize() const {
  std::string out = std::to_string(size()) + "\n";
  for (const auto& row : gluings_) {
    for (int f = 0; f < 4; ++f) {
      if (f) out += ' ';
      const auto& g = row[f];
      if (g.boundary()) {
        out += '-';
      } else {
        out += std::to_string(g.tet) + ':' + std::to_string(g.perm[f]) + ':' + std::to_string(face_perm_code(f, g.perm));
      }
    }
    out += '\n';
  }
  return out;
}

Triangulation Triangulation::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  long t = -1;
  if (!(in >> t) || t < 0) throw TriangulationError("triangulation: missing tetrahedron count");
  Triangulation tri(static_cast<int>(t));
  for (int a = 0; a < t; ++a) {
    for (int f = 0; f < 4; ++f) {
      std::string tok;
      if (!(in >> tok)) throw TriangulationError("triangulation: truncated gluing table");
      if (tok == "-") continue;
      int g = 0, tf = 0, code = 0;
      char c1 = 0, c2 = 0;
      std::istringstream ts(tok);
      if (!(ts >> g >> c1 >> tf >> c2 >> code) || c1 != ':' || c2 != ':' || g < 0 || g >= t || tf < 0 || tf > 3 ||
          code < 0 || code > 5)
        throw TriangulationError("triangulation: bad gluing entry '" + tok + "'");
      tri.gluings_[a][f] = {g, face_perm_from_code(f, tf, code)};
    }
  }
  std::string rest;
  if (in >> rest) throw TriangulationError("triangulation: trailing data");
  for (int a = 0; a < t; ++a) {
    for (int f = 0; f < 4; ++f) {
      const auto& g = tri.gluings_[a][f];
      if (g.boundary()) continue;
      const auto& back = tri.gluings_[g.tet][g.perm[f]];
      if (back.tet != a || !(back.perm == g.perm.inverse()) || (g.tet == a && g.perm[f] == f))
        throw TriangulationError("triangulation: gluings are not involutive");
    }
  }
  return tri;
}

std::string Triangulation::hash() const {
  std::string data = serialize();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  EVP_DigestUpdate(ctx, data.data(), data.size());
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

// Tetrahedron 24*tau + rank(sigma) has vertices: sigma(0), midpoint of edge sigma(0)sigma(1),
// centre of face sigma(0)sigma(1)sigma(2), centre of tau.
Triangulation Triangulation::barycentric_subdivision() const {
  const int t = size();
  Triangulation out(24 * t);
  for (int tau = 0; tau < t; ++tau) {
    for (int r = 0; r < 24; ++r) {
      Perm4 sigma = Perm4::from_index(r);
      int me = 24 * tau + r;
      for (int k = 0; k < 3; ++k) {
        Perm4 other = sigma * Perm4::swap(k, k + 1);
        int them = 24 * tau + other.index();
        if (them > me) out.join(me, k, them, Perm4());
      }
      const auto& g = gluings_[tau][sigma[3]];
      if (g.boundary()) continue;
      Perm4 image = g.perm * sigma;
      int them = 24 * g.tet + image.index();
      if (them > me) out.join(me, 3, them, Perm4());
    }
  }
  return out;
}

Triangulation barycentric_subdivide(const Triangulation& t) { return t.barycentric_subdivision(); }

}  // namespace knotcert
