#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "knotcert/perm.hpp"

namespace knotcert {

class TriangulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Face gluing: face f of this tetrahedron is glued to face perm[f] of `tet`,
/// vertex v of this tetrahedron going to vertex perm[v] there. tet < 0 marks a boundary face.
struct Gluing {
  int tet = -1;
  Perm4 perm;
  bool boundary() const { return tet < 0; }
};

/// An edge of the skeleton seen from one tetrahedron.
struct EdgeEmbedding {
  int tet;
  int edge;  // 0..5
};

/// Tetrahedra with face gluings and the derived vertex/edge/face skeleton.
/// Mutation through join()/unjoin() invalidates the skeleton until the next query.
class Triangulation {
 public:
  Triangulation() = default;
  explicit Triangulation(int tetrahedra);

  int size() const { return static_cast<int>(gluings_.size()); }
  int add_tetrahedron();

  /// Glues face `face` of `tet` to the matching face of `other`; sets both directions.
  void join(int tet, int face, int other, Perm4 perm);
  void unjoin(int tet, int face);
  const Gluing& gluing(int tet, int face) const { return gluings_[tet][face]; }
  bool is_boundary_face(int tet, int face) const { return gluings_[tet][face].boundary(); }

  // Skeleton queries; computed on first use.
  int num_vertices() const;
  int num_edges() const;
  int num_faces() const;
  int vertex_class(int tet, int vertex) const;
  int edge_class(int tet, int edge) const;
  int face_class(int tet, int face) const;
  /// Number of tetrahedron-edge embeddings of an edge class (its valence t_j).
  int edge_valence(int edge_class) const;
  const std::vector<EdgeEmbedding>& edge_embeddings(int edge_class) const;
  bool edge_on_boundary(int edge_class) const;
  bool vertex_on_boundary(int vertex_class) const;
  /// Vertex classes at the ends of an edge class, read from its first embedding.
  std::array<int, 2> edge_endpoints(int edge_class) const;
  /// Euler characteristic of the link of a vertex class.
  int vertex_link_euler(int vertex_class) const;
  std::vector<int> vertex_link_eulers() const;
  int num_boundary_faces() const;

  /// Empty when the complex is a valid orientable 3-manifold with (possibly empty) boundary;
  /// otherwise a description of the first violated condition.
  std::optional<std::string> validity_error() const;
  bool is_valid() const { return !validity_error().has_value(); }
  bool is_orientable() const;

  /// Line-based canonical serialization and its SHA-256 digest in hex.
  std::string serialize() const;
  static Triangulation parse(std::string_view text);
  std::string hash() const;

  Triangulation barycentric_subdivision() const;

 private:
  struct Skeleton {
    std::vector<std::array<int, 4>> vertex_of;
    std::vector<std::array<int, 6>> edge_of;
    std::vector<std::array<int, 4>> face_of;
    std::vector<std::vector<EdgeEmbedding>> edge_embeddings;
    std::vector<char> edge_boundary;
    std::vector<char> vertex_boundary;
    std::vector<char> edge_reversed;
    int num_vertices = 0;
    int num_faces = 0;
  };
  const Skeleton& skeleton() const;

  std::vector<std::array<Gluing, 4>> gluings_;
  mutable std::optional<Skeleton> skeleton_;
};

/// Barycentric subdivision as a free function.
Triangulation barycentric_subdivide(const Triangulation& t);

/// Index of the map between the sorted vertex triples of two faces, 0..5 in lexicographic order of S3.
int face_perm_code(int face, Perm4 perm);
Perm4 face_perm_from_code(int face, int target_face, int code);

}  // namespace knotcert
