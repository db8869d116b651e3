#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "knotcert/complement.hpp"
#include "knotcert/decide.hpp"

using namespace knotcert;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;

struct RunConfig {
  std::string command;
  std::string input;
  std::string certificate;
  std::string kind = "unknot";
  std::string mode = "vertex";
  bool paper = false;
  std::optional<std::int64_t> budget_candidates;
  std::optional<double> budget_seconds;
  int workers = 1;
  std::string format = "json";
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

DecideOptions options_for(const RunConfig& cfg) {
  DecideOptions o;
  o.mode = cfg.mode == "haken" ? SearchMode::haken : SearchMode::vertex;
  o.build = cfg.paper ? BuildMode::paper : BuildMode::compact;
  o.budget.max_candidates = cfg.budget_candidates;
  o.budget.max_seconds = cfg.budget_seconds;
  o.workers = cfg.workers;
  return o;
}

std::string summary(const DecisionResult& r) {
  std::ostringstream s;
  s << r.kind << ": " << to_string(r.verdict);
  if (r.genus) s << " (genus " << *r.genus << (r.genus_confirmed ? "" : ", upper bound") << ")";
  s << "\n" << r.stats.candidates << " candidates, " << to_string(r.stats.mode) << " mode, "
    << static_cast<long long>(r.stats.elapsed_ms) << " ms\n";
  if (!r.reason.empty()) s << r.reason << "\n";
  return s.str();
}

int emit(const RunConfig& cfg, const DecisionResult& r) {
  std::cout << (cfg.format == "text" ? summary(r) : to_json(r) + "\n");
  return r.verdict == Verdict::budget_exceeded ? kExitBudget : kExitOk;
}

int run(const RunConfig& cfg) {
  if (cfg.command == "verify") {
    const auto cert = certificate_from_json(read_text(cfg.certificate));
    const auto v = verify_certificate(cert, parse_diagram(read_text(cfg.input)));
    if (cfg.format == "text") {
      std::cout << (v.valid ? "valid" : "invalid") << ": " << v.reason << "\n";
    } else {
      nlohmann::ordered_json j;
      j["valid"] = v.valid;
      j["reason"] = v.reason;
      std::cout << j.dump() << "\n";
    }
    return kExitOk;
  }

  const auto diagram = parse_diagram(read_text(cfg.input));
  const auto opts = options_for(cfg);

  if (cfg.command == "triangulate") {
    const auto c = build_complement(diagram, opts.build);
    if (cfg.format == "text") {
      std::cout << c.triangulation.serialize() << serialize_markings(c);
    } else {
      nlohmann::ordered_json j;
      j["tetrahedra"] = c.triangulation.size();
      j["hash"] = c.triangulation.hash();
      j["triangulation"] = c.triangulation.serialize();
      j["markings"] = serialize_markings(c);
      std::cout << j.dump() << "\n";
    }
    return kExitOk;
  }
  if (cfg.command == "unknot") return emit(cfg, decide_unknotted(diagram, opts));
  if (cfg.command == "split") return emit(cfg, decide_splittable(diagram, opts));
  if (cfg.command == "genus") return emit(cfg, compute_genus(diagram, opts));

  // certify
  const auto r = cfg.kind == "split" ? decide_splittable(diagram, opts) : decide_unknotted(diagram, opts);
  if (r.verdict != Verdict::yes) return emit(cfg, r);
  const auto cert = emit_certificate(r);
  std::cout << (cfg.format == "text" ? cert.kind + " certificate, " + std::to_string(cert.vector.size()) +
                                           " coordinates, " + cert.attestation + " attestation\n"
                                     : to_json(cert) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Normal-surface decisions for knot and link diagrams"};
  app.require_subcommand(1);
  app.add_option("--mode", cfg.mode, "Candidate list: vertex solutions or the haken box")
      ->check(CLI::IsMember({"haken", "vertex"}));
  app.add_flag("--paper-triangulation", cfg.paper, "Use the large layered construction");
  app.add_option("--budget-candidates", cfg.budget_candidates, "Maximum candidate vectors")
      ->check(CLI::PositiveNumber);
  app.add_option("--budget-seconds", cfg.budget_seconds, "Maximum wall time")->check(CLI::PositiveNumber);
  app.add_option("--workers", cfg.workers, "Worker threads")->check(CLI::Range(1, 256));
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "text"}));

  auto add_command = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->callback([&cfg, name] { cfg.command = name; });
    return sub;
  };
  for (auto [name, help] : {std::pair{"unknot", "Decide whether a knot diagram is the unknot"},
                            std::pair{"split", "Decide whether a link is splittable"},
                            std::pair{"genus", "Compute the genus of a knot"},
                            std::pair{"triangulate", "Print the complement triangulation and markings"}})
    add_command(name, help)->add_option("input", cfg.input, "Diagram file or - for stdin")->required();
  auto* certify = add_command("certify", "Decide and print a certificate");
  certify->add_option("input", cfg.input, "Diagram file or - for stdin")->required();
  certify->add_option("--kind", cfg.kind, "Certificate kind")->check(CLI::IsMember({"unknot", "split"}));
  auto* verify = add_command("verify", "Check a certificate against a diagram");
  verify->add_option("certificate", cfg.certificate, "Certificate JSON file")->required();
  verify->add_option("input", cfg.input, "Diagram file or - for stdin")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    return run(cfg);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
