// Acceptance suite: prints one PASS/FAIL line per criterion and exits nonzero on any failure.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "knotcert/complement.hpp"
#include "knotcert/decide.hpp"
#include "knotcert/homology.hpp"
#include "knotcert/planar.hpp"
#include "knotcert/surface.hpp"
#include "oracles/complex_oracles.hpp"
#include "oracles/cone_oracles.hpp"
#include "oracles/corpus.hpp"
#include "oracles/knot_oracles.hpp"

using namespace knotcert;
using Clock = std::chrono::steady_clock;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fixed(double x, int digits = 2) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << x;
  return s.str();
}

LinkDiagram pd(const std::string& s) { return parse_diagram(s); }

std::vector<std::string> knot_corpus() {
  std::vector<std::string> out{corpus::kTrivialLoop, corpus::kKink1, corpus::kKink2, corpus::kTrefoil,
                               corpus::kFigureEight};
  for (int n = 3; n <= 6; ++n) out.push_back(corpus::kink_chain(n));
  return out;
}

NormalVector add(const NormalVector& a, const NormalVector& b) {
  NormalVector r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

mpz_class pow2(unsigned e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

// ---------------------------------------------------------------------------------------------

std::string golden_decisions() {
  struct Case {
    const char* diagram;
    bool unknot;
  };
  const Case cases[] = {{corpus::kTrivialLoop, true},
                        {corpus::kKink1, true},
                        {corpus::kKink2, true},
                        {corpus::kTrefoil, false},
                        {corpus::kFigureEight, false}};
  double slowest = 0;
  for (const auto& c : cases) {
    const auto d = pd(c.diagram);
    if (c.unknot)
      require(oracle::reidemeister_one_reduced_crossings(d) == 0, std::string("kink oracle on ") + c.diagram);
    else
      require(oracle::alexander_polynomial(d) != oracle::Poly{1}, std::string("Alexander oracle on ") + c.diagram);
    const auto t0 = Clock::now();
    const auto r = decide_unknotted(d);
    const double s = seconds_since(t0);
    slowest = std::max(slowest, s);
    require(r.verdict == (c.unknot ? Verdict::yes : Verdict::no), std::string("verdict for ") + c.diagram);
    require(s < 300, std::string("time for ") + c.diagram);
  }
  return "5 diagrams, slowest " + fixed(slowest) + " s";
}

std::string genus_matches() {
  const std::pair<const char*, int> golden[] = {
      {corpus::kTrefoil, 1}, {corpus::kFigureEight, 1}, {corpus::kTrivialLoop, 0}};
  for (const auto& [text, expected] : golden) {
    const auto d = pd(text);
    const int lower = oracle::span(oracle::alexander_polynomial(d)) / 2;
    const int upper = oracle::seifert_genus_bound(d);
    require(lower == expected && upper == expected, std::string("oracle bounds for ") + text);
    const auto r = compute_genus(d);
    require(r.genus && *r.genus == expected && r.genus_confirmed, std::string("genus of ") + text);
  }
  int checked = 0;
  for (const auto& text : knot_corpus()) {
    const auto d = pd(text);
    const auto g = compute_genus(d);
    const auto u = decide_unknotted(d);
    require(g.genus.has_value(), "genus computed for " + text);
    require((*g.genus == 0) == (u.verdict == Verdict::yes), "genus zero iff unknot for " + text);
    const int lower = oracle::span(oracle::alexander_polynomial(d)) / 2;
    const int upper = oracle::seifert_genus_bound(d);
    require(lower <= *g.genus && *g.genus <= upper, "oracle sandwich for " + text);
    ++checked;
  }
  return "trefoil 1, figure-eight 1, trivial 0; g=0 iff unknot on " + std::to_string(checked) + " knots";
}

std::string splitting() {
  require(decide_splittable(pd(corpus::kUnlink2)).verdict == Verdict::yes, "unlink splits");
  const auto hopf = pd(corpus::kHopf);
  require(std::abs(oracle::linking_number(hopf, 0, 1)) == 1, "Hopf linking number");
  require(decide_splittable(hopf).verdict == Verdict::no, "Hopf does not split");
  for (const auto* single : {corpus::kTrivialLoop, corpus::kTrefoil})
    require(decide_splittable(pd(single)).verdict == Verdict::no, "single component");
  return "unlink yes, Hopf no, single components no";
}

std::string cone_bounds() {
  std::vector<std::string> diagrams = {corpus::kTrivialLoop, corpus::kKink1, corpus::kKink2, corpus::kHopf};
  for (int n = 3; n <= 8; ++n) diagrams.push_back(corpus::kink_chain(n));
  int complexes = 0;
  std::size_t vectors = 0, unfiltered_vectors = 0;
  for (const auto& text : diagrams) {
    const auto t = build_complement(pd(text)).triangulation;
    if (t.size() > 8) continue;
    ++complexes;
    const auto c = matching_equations(t);
    const int n = c.coordinates();
    auto check = [&](const std::vector<NormalVector>& list, const std::string& label) {
      require(static_cast<double>(list.size()) <= std::ldexp(1.0, n), label + " count bound on " + text);
      for (const auto& v : list) {
        require(oracle::content(oracle::to_long(v)) == 1, label + " gcd on " + text);
        require(*std::max_element(v.begin(), v.end()) <= pow2(n - 1), label + " size bound on " + text);
        require(oracle::matches(t, oracle::to_long(v)), label + " matching on " + text);
      }
    };
    const auto vs = vertex_solutions(c);
    check(vs, "admissible");
    vectors += vs.size();
    if (t.size() <= 7) {
      EnumerationOptions all;
      all.admissible_only = false;
      const auto rays = vertex_solutions(c, all);
      check(rays, "unfiltered");
      unfiltered_vectors += rays.size();
    }
  }
  require(complexes >= 8, "enough complexes with t <= 8");
  return std::to_string(complexes) + " complexes, " + std::to_string(vectors) + " admissible and " +
         std::to_string(unfiltered_vectors) + " unfiltered vertex solutions";
}

std::string oracle_equivalence() {
  std::size_t admissible = 0, sampled = 0, surfaces = 0;
  std::mt19937_64 rng(2024);
  for (const auto* text : {corpus::kKink2, corpus::kKink1}) {
    const auto t = build_complement(pd(text)).triangulation;
    require(t.size() <= 2, "fidelity complex size");
    const auto c = matching_equations(t);
    std::set<std::vector<long>> brute, listed;
    oracle::admissible_in_box(t, 3, [&](const std::vector<long>& v) {
      require(is_admissible(c, oracle::to_mpz(v)), "oracle vector rejected");
      if (std::any_of(v.begin(), v.end(), [](long x) { return x != 0; })) brute.insert(v);
    });
    for_each_admissible_in_box(c, 3, 500'000'000, [&](const NormalVector& v) { listed.insert(oracle::to_long(v)); });
    require(brute == listed, std::string("box enumeration on ") + text);
    admissible += brute.size();

    // Sparse random samples from the whole box, quadrilateral-violating vectors included.
    std::uniform_int_distribution<long> coord(0, 3);
    for (int i = 0; i < 200'000; ++i) {
      std::vector<long> v(c.coordinates());
      for (auto& x : v) x = coord(rng) * (coord(rng) == 0);
      require(is_admissible(c, oracle::to_mpz(v)) == oracle::admissible(t, v), "sampled admissibility");
      ++sampled;
    }
    for (const auto& v : brute) {
      const auto s = reconstruct(t, oracle::to_mpz(v));
      const auto chi = euler_characteristic(t, oracle::to_mpz(v));
      require(chi == s.euler_characteristic(), "formula vs cell count");
      require(chi == oracle::surface_euler(t, s), "formula vs oracle count");
      ++surfaces;
    }
  }
  return std::to_string(admissible) + " admissible box vectors, " + std::to_string(sampled) + " samples, " +
         std::to_string(surfaces) + " surfaces";
}

std::string additivity() {
  int pairs = 0;
  std::mt19937 rng(99);
  for (const auto* text : {corpus::kHopf, corpus::kUnlink2, corpus::kTrivialLoop, corpus::kKink1}) {
    const auto mc = build_complement(pd(text));
    const auto& t = mc.triangulation;
    const auto c = matching_equations(t);
    const auto vs = vertex_solutions(c);
    std::uniform_int_distribution<std::size_t> pick(0, vs.size() - 1);
    int here = 0;
    for (int attempt = 0; attempt < 200'000 && here < 300; ++attempt) {
      const auto& a = vs[pick(rng)];
      const auto& b = vs[pick(rng)];
      const auto sum = add(a, b);
      if (!is_admissible(c, sum)) continue;
      ++here;
      require(euler_characteristic(t, sum) == euler_characteristic(t, a) + euler_characteristic(t, b), "chi additivity");
      require(weight(t, sum) == weight(t, a) + weight(t, b), "weight additivity");
      for (const auto& m : mc.meridians)
        require(meridian_parity(t, sum, m) == (meridian_parity(t, a, m) ^ meridian_parity(t, b, m)), "parity XOR");
    }
    pairs += here;
  }
  require(pairs >= 1000, "at least 1000 pairs, got " + std::to_string(pairs));
  return std::to_string(pairs) + " compatible pairs";
}

std::string mode_agreement() {
  int complexes = 0;
  for (const auto* text : {corpus::kKink2, corpus::kKink1, corpus::kTrivialLoop}) {
    auto mc = std::make_shared<const MarkedComplement>(build_complement(pd(text)));
    if (mc->triangulation.size() > 2) continue;
    DecideOptions h;
    h.mode = SearchMode::haken;
    const auto hv = decide_unknotted(mc, h);
    const auto vv = decide_unknotted(mc, DecideOptions{});
    require(hv.verdict != Verdict::budget_exceeded, std::string("haken completes on ") + text);
    require(hv.verdict == vv.verdict, std::string("verdicts agree on ") + text);
    ++complexes;
  }
  require(complexes >= 2, "t <= 2 complexes present");
  return std::to_string(complexes) + " complexes with t <= 2 agree";
}

// Semantic re-check of a certificate that the verifier accepted.
bool semantically_valid(const Certificate& cert, const LinkDiagram& d) {
  if (cert.version != 1) return false;
  if (cert.build != "compact" && cert.build != "paper") return false;
  const auto mc = build_complement(d, cert.build == "paper" ? BuildMode::paper : BuildMode::compact);
  const auto& t = mc.triangulation;
  if (cert.triangulation_hash != t.hash()) return false;
  if (cert.meridians != mc.meridians || cert.arcs != mc.arcs) return false;
  if (static_cast<int>(cert.vector.size()) != 7 * t.size()) return false;
  const auto v = oracle::to_long(cert.vector);
  if (!oracle::admissible(t, v) || oracle::content(v) != 1) return false;

  const auto c = matching_equations(t);
  if (cert.attestation == "vertex") {
    if (!oracle::on_extreme_ray(t, v)) return false;
    const auto rows = dense_rows(c);
    const long r = static_cast<long>(rows.size()), n = c.coordinates();
    std::vector<std::vector<mpz_class>> chosen;
    std::set<std::int64_t> distinct(cert.bindings.begin(), cert.bindings.end());
    if (distinct.size() != cert.bindings.size() || static_cast<long>(distinct.size()) != n - 1) return false;
    for (auto b : cert.bindings) {
      if (b < 0 || b >= r + n) return false;
      std::vector<mpz_class> row(n, 0);
      if (b < r) {
        row = rows[b];
      } else {
        row[b - r] = 1;
      }
      mpz_class dot = 0;
      for (long k = 0; k < n; ++k) dot += row[k] * v[k];
      if (dot != 0) return false;
      chosen.push_back(std::move(row));
    }
    if (static_cast<long>(oracle::invariant_factors(chosen).size()) != n - 1) return false;
  } else if (cert.attestation == "fundamental") {
    if (!cert.bindings.empty() || !is_fundamental(c, cert.vector)) return false;
  } else {
    return false;
  }

  const auto s = reconstruct(t, cert.vector);
  if (connected_components(s) != 1) return false;
  const auto report = classify(t, s);
  const auto points = oracle::edge_points(t, v);
  auto parity = [&](const std::vector<EdgeRef>& loop) {
    long total = 0;
    for (const auto& e : loop) total += points[t.edge_class(e[0], e[1])];
    return total & 1;
  };
  if (cert.kind == "unknot")
    return d.num_components() == 1 && cert.marking == 0 && report.is_disk && parity(mc.meridians[0]) == 1;
  if (cert.kind == "split")
    return d.num_components() >= 2 && cert.marking >= 0 && cert.marking < static_cast<int>(mc.arcs.size()) &&
           report.is_sphere && parity(mc.arcs[cert.marking]) == 1;
  return false;
}

Certificate mutate(const Certificate& base, const std::vector<NormalVector>& others, std::mt19937& rng, int kind) {
  Certificate m = base;
  const int n = static_cast<int>(m.vector.size());
  std::uniform_int_distribution<int> coord(0, n - 1);
  switch (kind) {
    case 0: m.vector[coord(rng)] += 1; break;
    case 1: m.vector[coord(rng)] -= 1; break;
    case 2:
    case 3: {
      std::vector<int> nonzero;
      for (int i = 0; i < n; ++i)
        if (m.vector[i] != 0) nonzero.push_back(i);
      auto& x = m.vector[nonzero[rng() % nonzero.size()]];
      x = kind == 2 ? mpz_class(0) : mpz_class(2 * x);
      break;
    }
    case 4: {
      auto& h = m.triangulation_hash;
      const std::size_t i = rng() % h.size();
      h[i] = h[i] == '0' ? '1' : '0';
      break;
    }
    case 5:
      if (!m.bindings.empty()) m.bindings[rng() % m.bindings.size()] = static_cast<std::int64_t>(rng() % (8 * n));
      break;
    case 6:
      if (!m.bindings.empty()) m.bindings.erase(m.bindings.begin() + rng() % m.bindings.size());
      break;
    case 7: m.bindings.push_back(static_cast<std::int64_t>(rng() % (8 * n))); break;
    case 8: m.kind = m.kind == "unknot" ? "split" : "unknot"; break;
    case 9: m.marking += (rng() & 1) ? 1 : -1; break;
    case 10: {
      auto& loops = (rng() & 1) && !m.arcs.empty() ? m.arcs : m.meridians;
      auto& loop = loops[rng() % loops.size()];
      auto& e = loop[rng() % loop.size()];
      e[1] = (e[1] + 1) % 6;
      break;
    }
    case 11: m.version = 2; break;
    case 12: m.build = m.build == "compact" ? "paper" : "compact"; break;
    case 13: m.attestation = m.attestation == "vertex" ? "fundamental" : "vertex"; break;
    case 14: m.vector = others[rng() % others.size()]; break;
    default:
      for (auto& x : m.vector) x *= 3;
      break;
  }
  return m;
}

std::string certificates() {
  struct Emitted {
    std::string diagram;
    Certificate cert;
    std::vector<NormalVector> others;
  };
  std::vector<Emitted> pool;
  int emitted = 0;
  auto take = [&](const std::string& text, const DecisionResult& r) {
    require(r.verdict == Verdict::yes, "yes verdict for " + text);
    const auto cert = emit_certificate(r);
    require(verify_certificate(cert, pd(text)).valid, "emitted certificate verifies for " + text);
    require(verify_certificate(certificate_from_json(to_json(cert)), pd(text)).valid, "JSON round trip for " + text);
    ++emitted;
    pool.push_back({text, cert, vertex_solutions(matching_equations(r.complement->triangulation))});
  };
  for (const auto& text : {std::string(corpus::kTrivialLoop), std::string(corpus::kKink1),
                           std::string(corpus::kKink2), corpus::kink_chain(3)})
    take(text, decide_unknotted(pd(text)));
  take(corpus::kUnlink2, decide_splittable(pd(corpus::kUnlink2)));
  DecideOptions h;
  h.mode = SearchMode::haken;
  for (const auto* text : {corpus::kKink1, corpus::kKink2}) take(text, decide_unknotted(pd(text), h));

  std::mt19937 rng(500);
  int rejected = 0, coincidental = 0, false_accept = 0;
  for (int i = 0; i < 500; ++i) {
    const auto& e = pool[i % pool.size()];
    auto m = mutate(e.cert, e.others, rng, i % 16);
    for (int retry = 0; retry < 50 && to_json(m) == to_json(e.cert); ++retry) m = mutate(e.cert, e.others, rng, i % 16);
    require(to_json(m) != to_json(e.cert), "mutation " + std::to_string(i % 16) + " changed the certificate");
    const auto d = pd(e.diagram);
    if (!verify_certificate(m, d).valid) {
      ++rejected;
    } else if (semantically_valid(m, d)) {
      ++coincidental;
    } else {
      ++false_accept;
    }
  }
  require(false_accept == 0, std::to_string(false_accept) + " false acceptances");

  // Verification time for kink chains of crossing measure 0..6.
  std::vector<double> xs, ys;
  for (int n = 0; n <= 6; ++n) {
    const auto text = corpus::kink_chain(n);
    const auto d = pd(text);
    const auto r = decide_unknotted(d);
    require(r.verdict == Verdict::yes, "chain " + std::to_string(n) + " is unknotted");
    const auto cert = emit_certificate(r);
    ++emitted;
    double best = 1e9;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = Clock::now();
      require(verify_certificate(cert, d).valid, "chain certificate verifies");
      best = std::min(best, seconds_since(t0));
    }
    xs.push_back(std::log(n + 1.0));
    ys.push_back(std::log(best));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  require(slope <= 4, "log-log slope " + fixed(slope));
  return std::to_string(emitted) + " certificates verified; fuzz 500: " + std::to_string(rejected) + " rejected, " +
         std::to_string(coincidental) + " coincidentally valid, 0 false; verify slope " + fixed(slope);
}

std::string layered_build_bounds() {
  std::string detail;
  for (const auto* text : {corpus::kTrivialLoop, corpus::kKink1, corpus::kUnlink2}) {
    const auto d = pd(text);
    const int n = crossing_measure(d);
    require(n <= 1, "fidelity input size");
    const auto c = build_complement(d, BuildMode::paper);
    require(c.triangulation.size() <= 253440L * (n + 1), std::string("tetrahedron bound on ") + text);
    require(c.triangulation.is_valid(), std::string("validity on ") + text);
    const auto e = grid_embed(d);
    require(is_plane_drawing(e), std::string("plane drawing on ") + text);
    const long m = static_cast<long>(e.points.size());
    for (const auto& p : e.points) {
      require(p.x >= 0 && p.y >= 0, "nonnegative coordinates");
      require(p.x <= 2 * m - 4 && p.y <= 2 * m - 4, "grid size bound");
      if (n >= 1) require(p.x <= 10 * n - 1 && p.y <= 10 * n - 1, "grid bound 10n-1");
    }
    detail += std::string(detail.empty() ? "" : ", ") + "n=" + std::to_string(n) + " t=" +
              std::to_string(c.triangulation.size());
  }
  return detail;
}

std::string strip_timing(const std::string& s) {
  return std::regex_replace(s, std::regex(R"("elapsed_ms":[0-9.eE+-]+,?)"), "");
}

std::string run_cli(const std::string& args) {
  const char* cli = std::getenv("KNOTCERT_CLI");
  if (!cli) return {};
  FILE* pipe = popen((std::string(cli) + " " + args + " 2>/dev/null").c_str(), "r");
  if (!pipe) return {};
  std::string out;
  char buf[4096];
  std::size_t k;
  while ((k = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, k);
  pclose(pipe);
  return out;
}

std::string determinism() {
  int comparisons = 0;
  auto with_workers = [](int w) {
    DecideOptions o;
    o.workers = w;
    return o;
  };
  for (const auto* text : {corpus::kTrefoil, corpus::kKink1, corpus::kFigureEight}) {
    const auto d = pd(text);
    const auto base_u = to_json(decide_unknotted(d), false);
    const auto base_g = to_json(compute_genus(d), false);
    for (int w : {1, 2, 4}) {
      require(to_json(decide_unknotted(d, with_workers(w)), false) == base_u, std::string("unknot json on ") + text);
      require(to_json(compute_genus(d, with_workers(w)), false) == base_g, std::string("genus json on ") + text);
      comparisons += 2;
    }
  }
  for (int w : {1, 3}) {
    const auto base = to_json(decide_splittable(pd(corpus::kUnlink2)), false);
    require(to_json(decide_splittable(pd(corpus::kUnlink2), with_workers(w)), false) == base, "split json");
    ++comparisons;
  }
  const auto c = matching_equations(build_complement(pd(corpus::kUnlink2)).triangulation);
  const auto vs = vertex_solutions(c);
  for (int w : {2, 4}) {
    EnumerationOptions o;
    o.workers = w;
    require(vertex_solutions(c, o) == vs, "vertex solutions across workers");
    ++comparisons;
  }

  if (std::getenv("KNOTCERT_CLI")) {
    const auto dir = std::filesystem::temp_directory_path() / "knotcert_acceptance";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "eight.pd").string();
    std::ofstream(path) << corpus::kFigureEight;
    const auto a = strip_timing(run_cli("genus " + path));
    require(!a.empty(), "cli output");
    require(strip_timing(run_cli("genus " + path)) == a, "cli repeat");
    require(strip_timing(run_cli("genus --workers 3 " + path)) == a, "cli workers");
    comparisons += 2;
  }
  return std::to_string(comparisons) + " byte-identical comparisons";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<std::string()>>> criteria = {
      {"golden unknot decisions", golden_decisions},
      {"genus against Seifert and Alexander bounds", genus_matches},
      {"splitting decisions", splitting},
      {"vertex solution bounds for t <= 8", cone_bounds},
      {"brute-force oracle equivalence for t <= 2", oracle_equivalence},
      {"additivity over random compatible pairs", additivity},
      {"haken and vertex mode agreement", mode_agreement},
      {"certificates, mutation fuzz and verification cost", certificates},
      {"layered build size and grid bounds", layered_build_bounds},
      {"determinism across runs and workers", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    std::string status = "PASS", detail;
    try {
      detail = criteria[i].second();
    } catch (const std::exception& e) {
      status = "FAIL";
      detail = e.what();
      ++failed;
    }
    std::cout << "criterion " << (i + 1) << " " << status << ": " << criteria[i].first << " (" << detail << "; "
              << fixed(seconds_since(t0), 1) << " s)" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
