#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "knotcert/budget.hpp"
#include "knotcert/complement.hpp"
#include "knotcert/diagram.hpp"
#include "knotcert/normal_cone.hpp"

namespace knotcert {

enum class Verdict { yes, no, budget_exceeded };
enum class SearchMode { haken, vertex };

const char* to_string(Verdict v);
const char* to_string(SearchMode m);

class DecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DecideOptions {
  SearchMode mode = SearchMode::vertex;
  BuildMode build = BuildMode::compact;
  Budget budget;
  int workers = 1;
  /// Coordinate bound of the haken-mode box; the full bound is far out of reach.
  int haken_bound = 2;
  /// Search-node limit for each box search (haken box, fundamental checks, Hilbert basis).
  std::int64_t box_nodes = 20'000'000;
};

struct DecisionStats {
  std::int64_t candidates = 0;
  double elapsed_ms = 0;
  SearchMode mode = SearchMode::vertex;
};

struct DecisionResult {
  std::string kind;  // "unknot", "split" or "genus"
  Verdict verdict = Verdict::no;
  std::optional<NormalVector> witness;
  std::optional<std::int64_t> genus;
  /// Genus only: "vertex" or "fundamental" for the list that produced the answer, and whether
  /// the value is known to be minimal rather than an upper bound.
  std::string tier;
  bool genus_confirmed = false;
  /// Haken mode only: whether the box bound was the full exhausting bound.
  bool exhaustive = true;
  /// Index of the marked meridian or arc the witness was checked against.
  int marking = 0;
  std::string reason;
  BuildMode build = BuildMode::compact;
  DecisionStats stats;
  std::shared_ptr<const MarkedComplement> complement;
};

/// Is the knot diagram a diagram of the unknot? Throws DecisionError for a link diagram.
DecisionResult decide_unknotted(const LinkDiagram& d, const DecideOptions& options = {});
DecisionResult decide_unknotted(std::shared_ptr<const MarkedComplement> c, const DecideOptions& options = {});

/// Is the link splittable? Single-component diagrams are not.
DecisionResult decide_splittable(const LinkDiagram& d, const DecideOptions& options = {});

/// Genus of a knot. Throws DecisionError for a link diagram.
DecisionResult compute_genus(const LinkDiagram& d, const DecideOptions& options = {});

struct Certificate {
  std::string kind;  // "unknot" or "split"
  std::string triangulation_hash;
  std::string build;  // "compact" or "paper"
  NormalVector vector;
  /// Indices into the constraint list: matching rows first, then coordinates (row count + k
  /// means v_k >= 0). Empty when `attestation` is "fundamental".
  std::vector<std::int64_t> bindings;
  std::string attestation;  // "vertex" or "fundamental"
  std::vector<std::vector<EdgeRef>> meridians;
  std::vector<std::vector<EdgeRef>> arcs;
  int marking = 0;
  int version = 1;
};

/// Packages a yes-verdict as a certificate. Throws DecisionError without a witness.
Certificate emit_certificate(const DecisionResult& r);

struct Verification {
  bool valid = false;
  std::string reason;
};

Verification verify_certificate(const Certificate& cert, const LinkDiagram& d);

/// Binding constraints: an independent set of 7t-1 tight constraints, or empty when the
/// vector is not on an extreme ray.
std::vector<std::int64_t> binding_constraints(const HakenCone& c, const NormalVector& v);

std::string to_json(const DecisionResult& r, bool include_timing = true);
std::string to_json(const Certificate& c);
/// Throws DecisionError on malformed JSON.
Certificate certificate_from_json(const std::string& text);

}  // namespace knotcert
