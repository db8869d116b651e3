#include "knotcert/homology.hpp"

#include <algorithm>
#include <set>

#include "knotcert/surface.hpp"

namespace knotcert {

namespace {

std::set<int> edge_set(const Triangulation& t, const std::vector<EdgeRef>& loop) {
  std::set<int> out;
  for (const auto& e : loop) out.insert(edge_class_of(t, e));
  return out;
}

bool is_zero(const NormalVector& v) {
  return std::all_of(v.begin(), v.end(), [](const mpz_class& x) { return x == 0; });
}

int mod2(const mpz_class& x) { return mpz_odd_p(x.get_mpz_t()) ? 1 : 0; }

}  // namespace

ParityBreakdown meridian_parity_breakdown(const Triangulation& t, const NormalVector& v,
                                          const std::vector<EdgeRef>& meridian) {
  ParityBreakdown p;
  if (static_cast<int>(v.size()) != 7 * t.size()) throw HomologyError("vector length does not match triangulation");
  if (is_zero(v)) return p;
  const auto gamma = edge_set(t, meridian);
  for (int e : gamma)
    if (!t.edge_on_boundary(e)) throw HomologyError("meridian edge is not on the boundary");

  // each boundary point is a corner of exactly two free arcs
  mpz_class corners = 0;
  for (int a = 0; a < t.size(); ++a) {
    for (int f = 0; f < 4; ++f) {
      if (!t.is_boundary_face(a, f)) continue;
      for (int type = 0; type < 7; ++type) {
        int corner = type < kQuad0 ? type : -1;
        if (type >= kQuad0) {
          for (int c = 0; c < 4; ++c)
            if (c != f && quad_of_pair(c, f) == type - kQuad0) corner = c;
        }
        if (corner == f || corner < 0) continue;
        int hits = 0;
        for (int u = 0; u < 4; ++u)
          if (u != f && u != corner && gamma.count(t.edge_class(a, edge_number(corner, u)))) ++hits;
        corners += hits * v[7 * a + type];
      }
    }
  }
  if (mpz_odd_p(corners.get_mpz_t())) throw HomologyError("free-arc corner count is odd");
  p.disk_formula = mod2(corners / 2);

  mpz_class sum = 0;
  for (int e : gamma) sum += edge_weight(t, v, e);
  p.edge_sum = mod2(sum);

  auto s = reconstruct(t, v);
  long direct = std::count_if(s.boundary_point_edges.begin(), s.boundary_point_edges.end(),
                              [&](int e) { return gamma.count(e) > 0; });
  p.direct = static_cast<int>(direct & 1);
  return p;
}

int meridian_parity(const Triangulation& t, const NormalVector& v, const std::vector<EdgeRef>& meridian) {
  auto p = meridian_parity_breakdown(t, v, meridian);
  if (p.disk_formula != p.direct || p.direct != p.edge_sum)
    throw HomologyError("meridian parity methods disagree");
  return p.direct;
}

bool is_essential_disk(const Triangulation& t, const NormalVector& v, const std::vector<EdgeRef>& meridian) {
  if (is_zero(v)) return false;
  auto s = reconstruct(t, v);
  if (connected_components(s) != 1) return false;
  auto r = classify(t, s);
  if (!r.is_disk) return false;
  return meridian_parity(t, v, meridian) == 1;
}

int arc_parity(const Triangulation& t, const NormalVector& v, const std::vector<EdgeRef>& arc) {
  mpz_class sum = 0;
  for (const auto& e : arc) {
    int c = edge_class_of(t, e);
    if (t.edge_on_boundary(c)) throw HomologyError("arc edge lies on the boundary");
    sum += edge_weight(t, v, c);
  }
  return mod2(sum);
}

}  // namespace knotcert
