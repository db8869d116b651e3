#include "knotcert/decide.hpp"

#include <algorithm>
#include <limits>
#include <thread>

#include <json.hpp>

#include "knotcert/homology.hpp"
#include "knotcert/linalg.hpp"
#include "knotcert/surface.hpp"

namespace knotcert {

namespace {

using Json = nlohmann::ordered_json;

struct WitnessFound {};

double elapsed_ms(const Budget& b) { return b.elapsed_seconds() * 1000.0; }

// Smallest index in [0, n) accepted by `pred`, or -1. Each worker scans a contiguous chunk,
// so the answer does not depend on the worker count.
template <class Pred>
std::int64_t first_accepted(std::int64_t n, int workers, const Pred& pred) {
  if (workers <= 1 || n < 2) {
    for (std::int64_t i = 0; i < n; ++i)
      if (pred(i)) return i;
    return -1;
  }
  const std::int64_t w = std::min<std::int64_t>(workers, n);
  std::vector<std::int64_t> found(w, -1);
  std::vector<std::exception_ptr> errors(w);
  std::vector<std::thread> threads;
  for (std::int64_t k = 0; k < w; ++k) {
    threads.emplace_back([&, k] {
      const std::int64_t lo = n * k / w, hi = n * (k + 1) / w;
      try {
        for (std::int64_t i = lo; i < hi; ++i)
          if (pred(i)) {
            found[k] = i;
            return;
          }
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (std::int64_t k = 0; k < w; ++k) {
    if (found[k] >= 0) return found[k];
    if (errors[k]) std::rethrow_exception(errors[k]);
  }
  return -1;
}

std::shared_ptr<const MarkedComplement> complement_for(const LinkDiagram& d, const DecideOptions& o) {
  return std::make_shared<const MarkedComplement>(build_complement(d, o.build));
}

std::vector<NormalVector> enumerate(const HakenCone& cone, const DecideOptions& o) {
  EnumerationOptions eo;
  eo.admissible_only = true;
  eo.workers = o.workers;
  eo.budget = o.budget;
  return vertex_solutions(cone, eo);
}

bool connected(const Triangulation& t, const NormalVector& v) {
  return connected_components(reconstruct(t, v)) == 1;
}

mpz_class boundary_weight(const Triangulation& t, const NormalVector& v) {
  mpz_class b = 0;
  for (int e = 0; e < t.num_edges(); ++e)
    if (t.edge_on_boundary(e)) b += edge_weight(t, v, e);
  return b;
}

int path_parity(const Triangulation& t, const NormalVector& v, const std::vector<EdgeRef>& path) {
  mpz_class s = 0;
  for (const auto& e : path) s += edge_weight(t, v, edge_class_of(t, e));
  return mpz_odd_p(s.get_mpz_t()) ? 1 : 0;
}

void finish(DecisionResult& r, const DecideOptions& o) {
  r.stats.mode = o.mode;
  r.build = o.build;
  r.stats.elapsed_ms = elapsed_ms(o.budget);
}

DecisionResult budget_result(std::string kind, const BudgetExceeded& e, const DecideOptions& o) {
  DecisionResult r;
  r.kind = std::move(kind);
  r.verdict = Verdict::budget_exceeded;
  r.reason = e.what();
  finish(r, o);
  return r;
}

std::optional<NormalVector> essential_disk_in_vertices(const MarkedComplement& c, const std::vector<NormalVector>& vs,
                                                       int workers) {
  const auto& t = c.triangulation;
  const auto idx = first_accepted(static_cast<std::int64_t>(vs.size()), workers, [&](std::int64_t i) {
    return euler_characteristic(t, vs[i]) == 1 && is_essential_disk(t, vs[i], c.meridians[0]);
  });
  if (idx < 0) return std::nullopt;
  return vs[idx];
}

DecisionResult unknot_haken(std::shared_ptr<const MarkedComplement> c, const DecideOptions& o) {
  DecisionResult r;
  r.kind = "unknot";
  r.complement = c;
  r.exhaustive = false;
  const auto& t = c->triangulation;
  const auto cone = matching_equations(t);
  std::int64_t visited = 0;
  try {
    for_each_admissible_in_box(cone, o.haken_bound, o.box_nodes, [&](const NormalVector& v) {
      ++visited;
      o.budget.check_count(visited, "haken search");
      if ((visited & 255) == 0) o.budget.check_time("haken search");
      if (!is_essential_disk(t, v, c->meridians[0])) return;
      if (!is_fundamental(cone, v, o.box_nodes)) return;
      r.witness = v;
      throw WitnessFound{};
    });
  } catch (const WitnessFound&) {
  }
  r.stats.candidates = visited;
  r.verdict = r.witness ? Verdict::yes : Verdict::no;
  if (!r.witness) r.reason = "no essential disk with coordinates <= " + std::to_string(o.haken_bound);
  finish(r, o);
  return r;
}

void require_knot(const LinkDiagram& d, const char* what) {
  if (d.num_components() != 1) throw DecisionError(std::string(what) + " needs a knot diagram");
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::budget_exceeded: return "budget-exceeded";
  }
  return "?";
}

const char* to_string(SearchMode m) { return m == SearchMode::haken ? "haken" : "vertex"; }

DecisionResult decide_unknotted(std::shared_ptr<const MarkedComplement> c, const DecideOptions& o) {
  if (c->meridians.size() != 1) throw DecisionError("unknot recognition needs a knot complement");
  try {
    if (o.mode == SearchMode::haken) return unknot_haken(std::move(c), o);
    DecisionResult r;
    r.kind = "unknot";
    r.complement = c;
    const auto vs = enumerate(matching_equations(c->triangulation), o);
    r.stats.candidates = static_cast<std::int64_t>(vs.size());
    r.witness = essential_disk_in_vertices(*c, vs, o.workers);
    r.verdict = r.witness ? Verdict::yes : Verdict::no;
    finish(r, o);
    return r;
  } catch (const BudgetExceeded& e) {
    return budget_result("unknot", e, o);
  }
}

DecisionResult decide_unknotted(const LinkDiagram& d, const DecideOptions& o) {
  require_knot(d, "unknot recognition");
  try {
    return decide_unknotted(complement_for(d, o), o);
  } catch (const BudgetExceeded& e) {
    return budget_result("unknot", e, o);
  }
}

DecisionResult decide_splittable(const LinkDiagram& d, const DecideOptions& o) {
  DecisionResult r;
  r.kind = "split";
  if (d.num_components() < 2) {
    r.verdict = Verdict::no;
    r.reason = "single component";
    finish(r, o);
    return r;
  }
  try {
    auto c = complement_for(d, o);
    r.complement = c;
    const auto& t = c->triangulation;
    const auto vs = enumerate(matching_equations(t), o);
    r.stats.candidates = static_cast<std::int64_t>(vs.size());
    std::vector<int> arc_hit(vs.size(), -1);
    const auto idx = first_accepted(static_cast<std::int64_t>(vs.size()), o.workers, [&](std::int64_t i) {
      const auto& v = vs[i];
      if (euler_characteristic(t, v) != 2 || boundary_weight(t, v) != 0) return false;
      if (!connected(t, v)) return false;
      for (std::size_t a = 0; a < c->arcs.size(); ++a)
        if (arc_parity(t, v, c->arcs[a]) == 1) {
          arc_hit[i] = static_cast<int>(a);
          return true;
        }
      return false;
    });
    if (idx >= 0) {
      r.witness = vs[idx];
      r.marking = arc_hit[idx];
    }
    r.verdict = r.witness ? Verdict::yes : Verdict::no;
    finish(r, o);
    return r;
  } catch (const BudgetExceeded& e) {
    return budget_result("split", e, o);
  }
}

DecisionResult compute_genus(const LinkDiagram& d, const DecideOptions& o) {
  require_knot(d, "genus computation");
  DecisionResult r;
  r.kind = "genus";
  std::shared_ptr<const MarkedComplement> c;
  std::vector<NormalVector> vs;
  try {
    c = complement_for(d, o);
    r.complement = c;
    vs = enumerate(matching_equations(c->triangulation), o);
  } catch (const BudgetExceeded& e) {
    return budget_result("genus", e, o);
  }
  const auto& t = c->triangulation;
  const auto& meridian = c->meridians[0];
  r.stats.candidates = static_cast<std::int64_t>(vs.size());

  std::optional<std::int64_t> best;
  auto consider = [&](const NormalVector& v) {
    const mpz_class chi = euler_characteristic(t, v);
    if (best && chi <= 1 - 2 * *best) return;
    if (chi > 1 || boundary_weight(t, v) == 0) return;
    const auto surface = reconstruct(t, v);
    if (connected_components(surface) != 1 || !is_orientable(surface)) return;
    if (boundary_curves(surface) != 1) return;
    if (meridian_parity(t, v, meridian) != 1) return;
    best = (1 - chi.get_si()) / 2;
    r.witness = v;
  };
  for (const auto& v : vs) consider(v);
  r.tier = "vertex";

  if (best && *best == 0) {
    r.genus_confirmed = true;
  } else if (best && *best == 1) {
    r.genus_confirmed = !essential_disk_in_vertices(*c, vs, o.workers).has_value();
  }
  if (!r.genus_confirmed) {
    try {
      const auto cone = matching_equations(t);
      const auto basis = hilbert_basis(cone, o.box_nodes);
      r.stats.candidates += static_cast<std::int64_t>(basis.size());
      for (const auto& v : basis)
        if (quads_compatible(cone, v)) consider(v);
      r.tier = "fundamental";
      r.genus_confirmed = best.has_value();
    } catch (const BudgetExceeded& e) {
      r.reason = std::string("upper bound only: ") + e.what();
    }
  }
  r.genus = best;
  r.verdict = best ? Verdict::yes : Verdict::budget_exceeded;
  finish(r, o);
  return r;
}

std::vector<std::int64_t> binding_constraints(const HakenCone& c, const NormalVector& v) {
  const int n = c.coordinates();
  const auto rows = dense_rows(c);
  RowSpace space(n);
  std::vector<std::int64_t> chosen;
  for (std::size_t i = 0; i < rows.size() && space.rank() < n - 1; ++i)
    if (space.add(rows[i])) chosen.push_back(static_cast<std::int64_t>(i));
  for (int k = 0; k < n && space.rank() < n - 1; ++k) {
    if (v[k] != 0) continue;
    std::vector<mpz_class> unit(n, 0);
    unit[k] = 1;
    if (space.add(std::move(unit))) chosen.push_back(static_cast<std::int64_t>(rows.size()) + k);
  }
  if (space.rank() != n - 1) return {};
  return chosen;
}

Certificate emit_certificate(const DecisionResult& r) {
  if (r.verdict != Verdict::yes || !r.witness || !r.complement)
    throw DecisionError("no witness to certify");
  if (r.kind != "unknot" && r.kind != "split") throw DecisionError("certificates cover unknot and split only");
  const auto& c = *r.complement;
  Certificate cert;
  cert.kind = r.kind;
  cert.triangulation_hash = c.triangulation.hash();
  cert.build = r.build == BuildMode::paper ? "paper" : "compact";
  cert.vector = *r.witness;
  cert.bindings = binding_constraints(matching_equations(c.triangulation), cert.vector);
  cert.attestation = cert.bindings.empty() ? "fundamental" : "vertex";
  cert.meridians = c.meridians;
  cert.arcs = c.arcs;
  cert.marking = r.marking;
  return cert;
}

Verification verify_certificate(const Certificate& cert, const LinkDiagram& d) {
  auto fail = [](std::string why) { return Verification{false, std::move(why)}; };
  if (cert.version != 1) return fail("unsupported version");
  if (cert.kind != "unknot" && cert.kind != "split") return fail("unknown kind");
  if (cert.build != "compact" && cert.build != "paper") return fail("unknown build");
  if (cert.kind == "unknot" && d.num_components() != 1) return fail("unknot certificate for a link");
  if (cert.kind == "split" && d.num_components() < 2) return fail("split certificate for a knot");

  const auto c = build_complement(d, cert.build == "paper" ? BuildMode::paper : BuildMode::compact);
  const auto& t = c.triangulation;
  if (t.hash() != cert.triangulation_hash) return fail("triangulation hash mismatch");
  if (cert.meridians != c.meridians || cert.arcs != c.arcs) return fail("markings mismatch");

  const auto cone = matching_equations(t);
  const int n = cone.coordinates();
  if (static_cast<int>(cert.vector.size()) != n) return fail("vector length mismatch");
  if (!is_admissible(cone, cert.vector)) return fail("vector not admissible");
  if (content(cert.vector) != 1) return fail("vector not primitive");

  if (cert.attestation == "vertex") {
    const std::int64_t rows = static_cast<std::int64_t>(cone.rows.size());
    if (static_cast<int>(cert.bindings.size()) != n - 1) return fail("wrong number of binding constraints");
    const auto dense = dense_rows(cone);
    RowSpace space(n);
    for (auto b : cert.bindings) {
      if (b < 0 || b >= rows + n) return fail("binding index out of range");
      std::vector<mpz_class> row;
      if (b < rows) {
        row = dense[b];
      } else {
        if (cert.vector[b - rows] != 0) return fail("binding constraint not tight");
        row.assign(n, 0);
        row[b - rows] = 1;
      }
      if (!space.add(std::move(row))) return fail("binding constraints dependent");
    }
  } else if (cert.attestation == "fundamental") {
    if (!cert.bindings.empty()) return fail("fundamental attestation with bindings");
    try {
      if (!is_fundamental(cone, cert.vector)) return fail("vector not fundamental");
    } catch (const BudgetExceeded&) {
      return fail("fundamental check too large");
    }
  } else {
    return fail("unknown attestation");
  }

  const mpz_class chi = euler_characteristic(t, cert.vector);
  const mpz_class b = boundary_weight(t, cert.vector);
  if (cert.kind == "unknot") {
    if (chi != 1) return fail("euler characteristic is not 1");
    if (b == 0) return fail("surface is closed");
    if (cert.marking != 0 || c.meridians.size() != 1) return fail("bad meridian index");
    if (path_parity(t, cert.vector, c.meridians[0]) != 1) return fail("meridian parity is even");
  } else {
    if (chi != 2) return fail("euler characteristic is not 2");
    if (b != 0) return fail("surface has boundary");
    if (cert.marking < 0 || cert.marking >= static_cast<int>(c.arcs.size())) return fail("bad arc index");
    for (const auto& e : c.arcs[cert.marking])
      if (t.edge_on_boundary(edge_class_of(t, e))) return fail("arc touches the boundary");
    if (path_parity(t, cert.vector, c.arcs[cert.marking]) != 1) return fail("arc parity is even");
  }
  return {true, "ok"};
}

namespace {

Json vector_json(const NormalVector& v) {
  Json a = Json::array();
  for (const auto& x : v) {
    if (x.fits_slong_p())
      a.push_back(static_cast<std::int64_t>(x.get_si()));
    else
      a.push_back(x.get_str());
  }
  return a;
}

NormalVector vector_from_json(const Json& a) {
  NormalVector v;
  for (const auto& x : a) {
    if (x.is_number_integer())
      v.emplace_back(static_cast<long>(x.get<std::int64_t>()));
    else if (x.is_string())
      v.emplace_back(x.get<std::string>());
    else
      throw DecisionError("vector entries must be integers");
  }
  return v;
}

Json loops_json(const std::vector<std::vector<EdgeRef>>& loops) {
  Json a = Json::array();
  for (const auto& loop : loops) {
    Json l = Json::array();
    for (const auto& e : loop) l.push_back({e[0], e[1]});
    a.push_back(std::move(l));
  }
  return a;
}

std::vector<std::vector<EdgeRef>> loops_from_json(const Json& a) {
  std::vector<std::vector<EdgeRef>> out;
  for (const auto& l : a) {
    std::vector<EdgeRef> loop;
    for (const auto& e : l) {
      if (!e.is_array() || e.size() != 2) throw DecisionError("edge reference must be a pair");
      loop.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    out.push_back(std::move(loop));
  }
  return out;
}

}  // namespace

std::string to_json(const DecisionResult& r, bool include_timing) {
  Json j;
  j["kind"] = r.kind;
  j["verdict"] = to_string(r.verdict);
  j["witness"] = r.witness ? vector_json(*r.witness) : Json(nullptr);
  if (r.kind == "genus") {
    j["genus"] = r.genus ? Json(*r.genus) : Json(nullptr);
    j["genus_confirmed"] = r.genus_confirmed;
    j["tier"] = r.tier;
  }
  if (r.complement) j["triangulation_hash"] = r.complement->triangulation.hash();
  if (r.stats.mode == SearchMode::haken) j["exhaustive"] = r.exhaustive;
  if (!r.reason.empty()) j["reason"] = r.reason;
  Json stats;
  stats["candidates"] = r.stats.candidates;
  if (include_timing) stats["elapsed_ms"] = r.stats.elapsed_ms;
  stats["mode"] = to_string(r.stats.mode);
  j["stats"] = std::move(stats);
  return j.dump();
}

std::string to_json(const Certificate& c) {
  Json j;
  j["kind"] = c.kind;
  j["triangulation_hash"] = c.triangulation_hash;
  j["build"] = c.build;
  j["vector"] = vector_json(c.vector);
  j["bindings"] = c.bindings;
  j["attestation"] = c.attestation;
  j["markings"] = {{"meridians", loops_json(c.meridians)}, {"arcs", loops_json(c.arcs)}, {"index", c.marking}};
  j["version"] = c.version;
  return j.dump();
}

Certificate certificate_from_json(const std::string& text) {
  try {
    const auto j = Json::parse(text);
    Certificate c;
    c.kind = j.at("kind").get<std::string>();
    c.triangulation_hash = j.at("triangulation_hash").get<std::string>();
    c.build = j.at("build").get<std::string>();
    c.vector = vector_from_json(j.at("vector"));
    c.bindings = j.at("bindings").get<std::vector<std::int64_t>>();
    c.attestation = j.at("attestation").get<std::string>();
    const auto& m = j.at("markings");
    c.meridians = loops_from_json(m.at("meridians"));
    c.arcs = loops_from_json(m.at("arcs"));
    c.marking = m.at("index").get<int>();
    c.version = j.at("version").get<int>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw DecisionError(std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace knotcert
