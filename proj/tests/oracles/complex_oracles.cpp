#include "oracles/complex_oracles.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "knotcert/perm.hpp"

namespace oracle {

namespace {

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

std::vector<mpz_class> invariant_factors(Matrix m) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  std::vector<mpz_class> diag;
  int t = 0;
  while (t < rows && t < cols) {
    int pr = -1, pc = -1;
    for (int i = t; i < rows; ++i)
      for (int j = t; j < cols; ++j)
        if (m[i][j] != 0 && (pr < 0 || abs(m[i][j]) < abs(m[pr][pc]))) {
          pr = i;
          pc = j;
        }
    if (pr < 0) break;
    std::swap(m[t], m[pr]);
    for (auto& row : m) std::swap(row[t], row[pc]);
    bool clean = true;
    for (int i = t + 1; i < rows; ++i) {
      if (m[i][t] == 0) continue;
      mpz_class q = m[i][t] / m[t][t];
      for (int j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
      if (m[i][t] != 0) clean = false;
    }
    for (int j = t + 1; j < cols; ++j) {
      if (m[t][j] == 0) continue;
      mpz_class q = m[t][j] / m[t][t];
      for (int i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
      if (m[t][j] != 0) clean = false;
    }
    if (!clean) continue;  // a smaller remainder appeared; pick a new pivot
    diag.push_back(abs(m[t][t]));
    ++t;
  }
  // normalise the diagonal into a divisibility chain
  for (std::size_t i = 0; i < diag.size(); ++i)
    for (std::size_t j = i + 1; j < diag.size(); ++j) {
      mpz_class g = gcd(diag[i], diag[j]);
      mpz_class l = diag[i] / g * diag[j];
      diag[i] = g;
      diag[j] = l;
    }
  return diag;
}

Chains chains(const knotcert::Triangulation& t) {
  const int n = t.size();
  Dsu vert(4 * n), dir(16 * n), face(4 * n);
  for (int a = 0; a < n; ++a)
    for (int f = 0; f < 4; ++f) {
      const auto& g = t.gluing(a, f);
      if (g.boundary()) continue;
      face.unite(4 * a + f, 4 * g.tet + g.perm[f]);
      for (int u = 0; u < 4; ++u) {
        if (u == f) continue;
        vert.unite(4 * a + u, 4 * g.tet + g.perm[u]);
        for (int w = 0; w < 4; ++w)
          if (w != f && w != u) dir.unite(16 * a + 4 * u + w, 16 * g.tet + 4 * g.perm[u] + g.perm[w]);
      }
    }
  Chains c;
  std::map<int, int> vid;
  c.vertex.resize(4 * n);
  for (int i = 0; i < 4 * n; ++i) {
    auto [it, fresh] = vid.emplace(vert.find(i), static_cast<int>(vid.size()));
    c.vertex[i] = it->second;
  }
  c.vertices = static_cast<int>(vid.size());

  std::map<int, std::array<int, 2>> eid;
  std::vector<std::array<int, 2>> ends;  // tail, head vertex of each edge class
  c.directed.assign(16 * n, {-1, 0});
  for (int a = 0; a < n; ++a)
    for (int u = 0; u < 4; ++u)
      for (int w = u + 1; w < 4; ++w) {
        int r1 = dir.find(16 * a + 4 * u + w), r2 = dir.find(16 * a + 4 * w + u);
        if (!eid.count(r1)) {
          int id = static_cast<int>(ends.size());
          eid[r1] = {id, 1};
          if (r2 != r1) eid[r2] = {id, -1};
          ends.push_back({c.vertex[4 * a + u], c.vertex[4 * a + w]});
        }
      }
  for (int a = 0; a < n; ++a)
    for (int u = 0; u < 4; ++u)
      for (int w = 0; w < 4; ++w)
        if (u != w) c.directed[16 * a + 4 * u + w] = eid.at(dir.find(16 * a + 4 * u + w));
  c.edges = static_cast<int>(ends.size());
  c.d1.assign(c.vertices, std::vector<mpz_class>(c.edges, 0));
  for (int e = 0; e < c.edges; ++e) {
    c.d1[ends[e][1]][e] += 1;
    c.d1[ends[e][0]][e] -= 1;
  }

  std::map<int, int> fid;
  std::vector<std::array<int, 2>> reps;
  for (int i = 0; i < 4 * n; ++i)
    if (fid.emplace(face.find(i), static_cast<int>(reps.size())).second) reps.push_back({i / 4, i % 4});
  c.faces = static_cast<int>(reps.size());
  c.d2.assign(c.edges, std::vector<mpz_class>(c.faces, 0));
  for (int f = 0; f < c.faces; ++f) {
    auto [a, opp] = reps[f];
    std::array<int, 3> v{};
    int k = 0;
    for (int u = 0; u < 4; ++u)
      if (u != opp) v[k++] = u;
    auto add = [&](int x, int y, int coef) {
      auto [e, s] = c.directed[16 * a + 4 * x + y];
      c.d2[e][f] += coef * s;
    };
    add(v[1], v[2], 1);
    add(v[0], v[2], -1);
    add(v[0], v[1], 1);
  }
  return c;
}

Homology first_homology(const knotcert::Triangulation& t) {
  auto c = chains(t);
  auto f1 = invariant_factors(c.d1);
  auto f2 = invariant_factors(c.d2);
  Homology h;
  h.free_rank = c.edges - static_cast<int>(f1.size()) - static_cast<int>(f2.size());
  for (const auto& x : f2)
    if (x > 1) h.torsion.push_back(x);
  return h;
}

std::vector<mpz_class> loop_chain(const knotcert::Triangulation& t, const std::vector<std::array<int, 2>>& loop) {
  auto c = chains(t);
  if (loop.empty()) return {};
  struct Step {
    int edge, sign, tail, head;
  };
  std::vector<Step> steps;
  for (const auto& [a, e] : loop) {
    int u = knotcert::kEdgeVertices[e][0], w = knotcert::kEdgeVertices[e][1];
    auto [id, s] = c.directed[16 * a + 4 * u + w];
    steps.push_back({id, s, c.vertex[4 * a + u], c.vertex[4 * a + w]});
  }
  for (int flip = 0; flip < 2; ++flip) {
    std::vector<mpz_class> chain(c.edges, 0);
    int start = flip ? steps[0].head : steps[0].tail;
    int cur = start;
    bool ok = true;
    for (std::size_t i = 0; i < steps.size() && ok; ++i) {
      const auto& s = steps[i];
      bool forward = i == 0 ? !flip : s.tail == cur;
      if (forward && s.tail == cur) {
        chain[s.edge] += s.sign;
        cur = s.head;
      } else if (s.head == cur) {
        chain[s.edge] -= s.sign;
        cur = s.tail;
      } else {
        ok = false;
      }
    }
    if (ok && cur == start) return chain;
  }
  return {};
}

bool loops_form_h1_basis(const knotcert::Triangulation& t, const std::vector<std::vector<std::array<int, 2>>>& loops) {
  auto h = first_homology(t);
  if (!h.torsion.empty() || h.free_rank != static_cast<int>(loops.size())) return false;
  auto c = chains(t);
  Matrix m = c.d2;
  int base = static_cast<int>(invariant_factors(c.d2).size());
  for (const auto& loop : loops) {
    auto ch = loop_chain(t, loop);
    if (ch.empty()) return false;
    // the loop must be a cycle
    for (int v = 0; v < c.vertices; ++v) {
      mpz_class s = 0;
      for (int e = 0; e < c.edges; ++e) s += c.d1[v][e] * ch[e];
      if (s != 0) return false;
    }
    for (int e = 0; e < c.edges; ++e) m[e].push_back(ch[e]);
  }
  auto f = invariant_factors(m);
  if (static_cast<int>(f.size()) != base + static_cast<int>(loops.size())) return false;
  return std::all_of(f.begin(), f.end(), [](const mpz_class& x) { return x == 1; });
}

int euler_characteristic(const knotcert::Triangulation& t) {
  auto c = chains(t);
  return c.vertices - c.edges + c.faces - t.size();
}

}  // namespace oracle
