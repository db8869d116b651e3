#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace knotcert {

class DiagramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One crossing: the four incident arc labels listed counterclockwise,
/// starting at the incoming under-strand. Positions 0 and 2 are under,
/// positions 1 and 3 are over.
struct Crossing {
  std::array<int, 4> ends{};
};

/// Position of an arc end at a crossing.
struct EndRef {
  int crossing = -1;
  int position = -1;
  bool operator==(const EndRef&) const = default;
};

inline bool is_over_position(int position) { return (position & 1) != 0; }

/// Validated link diagram. Immutable after parsing.
class LinkDiagram {
 public:
  LinkDiagram() = default;
  /// Validates and builds the derived data; throws DiagramError.
  LinkDiagram(std::vector<Crossing> crossings, std::vector<int> loop_labels);

  const std::vector<Crossing>& crossings() const { return crossings_; }
  int num_crossings() const { return static_cast<int>(crossings_.size()); }
  int num_loops() const { return static_cast<int>(loop_labels_.size()); }
  const std::vector<int>& loop_labels() const { return loop_labels_; }

  /// Distinct non-loop arc labels, ascending.
  const std::vector<int>& arcs() const { return arcs_; }
  /// Both ends of a non-loop arc (by index into arcs()).
  const std::array<EndRef, 2>& arc_ends(int arc_index) const { return arc_ends_[arc_index]; }
  /// Index into arcs() of the arc at a crossing end.
  int arc_at(int crossing, int position) const { return end_arc_[crossing * 4 + position]; }
  /// The other end of the arc leaving (crossing, position).
  EndRef partner(int crossing, int position) const;

  /// Number of link components (traced circuits plus loops).
  int num_components() const { return num_components_; }
  /// Number of connected components of the underlying planar graph, loops included.
  int num_diagram_components() const { return num_diagram_components_; }
  /// Link component of each crossing strand: component_of(c, p) for the
  /// strand entering at position p (the strand through p and p+2).
  int component_of(int crossing, int position) const { return end_component_[crossing * 4 + position]; }
  /// Link component index of each loop.
  int loop_component(int loop_index) const { return num_components_ - num_loops() + loop_index; }

  /// Faces of the embedding; each face is a cyclic list of ends (crossing, position)
  /// where the face boundary leaves the crossing.
  const std::vector<std::vector<EndRef>>& faces() const { return faces_; }

  std::string to_pd() const;
  std::string to_json() const;

 private:
  void validate_and_derive();

  std::vector<Crossing> crossings_;
  std::vector<int> loop_labels_;
  std::vector<int> arcs_;
  std::vector<std::array<EndRef, 2>> arc_ends_;
  std::vector<int> end_arc_;
  std::vector<int> end_component_;
  std::vector<std::vector<EndRef>> faces_;
  int num_components_ = 0;
  int num_diagram_components_ = 0;
};

/// Accepts PD text (`PD[X(a,b,c,d),...,L[k]]`, or bare items) and the JSON
/// diagram format (`{"crossings":[{"ends":[a,b,c,d]}],"loops":k}`).
LinkDiagram parse_diagram(std::string_view text);

/// #crossings + #diagram components - 1.
int crossing_measure(const LinkDiagram& d);

bool is_knot_diagram(const LinkDiagram& d);

}  // namespace knotcert
