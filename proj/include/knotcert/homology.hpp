#pragma once

#include <stdexcept>
#include <vector>

#include "knotcert/complement.hpp"
#include "knotcert/normal_cone.hpp"
#include "knotcert/triangulation.hpp"

namespace knotcert {

class HomologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The three ways of counting boundary crossings with a meridian, each mod 2.
struct ParityBreakdown {
  /// Half the disk-type count of free-arc corners on meridian edges.
  int disk_formula = 0;
  /// Boundary points of the rebuilt surface lying on meridian edges.
  int direct = 0;
  /// Sum of edge weights over the meridian edges.
  int edge_sum = 0;
};

ParityBreakdown meridian_parity_breakdown(const Triangulation& t, const NormalVector& v,
                                          const std::vector<EdgeRef>& meridian);

/// Intersection number mod 2 of the surface boundary with the meridian. Throws HomologyError
/// if the counting methods disagree.
int meridian_parity(const Triangulation& t, const NormalVector& v, const std::vector<EdgeRef>& meridian);

/// Connected disk whose boundary meets the meridian an odd number of times.
bool is_essential_disk(const Triangulation& t, const NormalVector& v, const std::vector<EdgeRef>& meridian);

/// Crossings of the surface with an interior edge path, mod 2. Throws HomologyError if an arc
/// edge lies on the boundary.
int arc_parity(const Triangulation& t, const NormalVector& v, const std::vector<EdgeRef>& arc);

}  // namespace knotcert
