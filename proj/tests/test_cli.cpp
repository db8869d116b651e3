#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>

#include <json.hpp>

#include "knotcert/triangulation.hpp"
#include "oracles/corpus.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status = -1;
  std::string out;
};

std::string cli() {
  const char* path = std::getenv("KNOTCERT_CLI");
  return path ? path : "knotcert";
}

Outcome run(const std::string& args) {
  Outcome o;
  const std::string cmd = cli() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) o.out.append(buf, n);
  const int raw = pclose(pipe);
  o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return o;
}

std::string file_with(const std::string& name, const std::string& text) {
  const auto dir = fs::temp_directory_path() / "knotcert_cli_test";
  fs::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << text;
  return path.string();
}

nlohmann::json json_of(const Outcome& o) { return nlohmann::json::parse(o.out); }

std::string without_timing(const std::string& s) {
  return std::regex_replace(s, std::regex(R"("elapsed_ms":[0-9.eE+-]+,?)"), "");
}

}  // namespace

TEST_CASE("unknot command") {
  const auto o = run("unknot " + file_with("trivial.pd", corpus::kTrivialLoop));
  CHECK(o.status == 0);
  const auto j = json_of(o);
  CHECK(j["verdict"] == "yes");
  CHECK(j["witness"].is_array());
  CHECK(j["stats"]["mode"] == "vertex");

  const auto no = run("unknot " + file_with("trefoil.pd", corpus::kTrefoil));
  CHECK(no.status == 0);
  CHECK(json_of(no)["verdict"] == "no");
}

TEST_CASE("genus and split commands") {
  const auto g = run("genus " + file_with("trefoil.pd", corpus::kTrefoil));
  CHECK(g.status == 0);
  CHECK(json_of(g)["verdict"] == "yes");
  CHECK(json_of(g)["genus"] == 1);

  const auto s = run("split " + file_with("unlink.pd", corpus::kUnlink2));
  CHECK(json_of(s)["verdict"] == "yes");
  CHECK(json_of(run("split " + file_with("hopf.pd", corpus::kHopf)))["verdict"] == "no");
}

TEST_CASE("certify and verify") {
  const auto trivial = file_with("trivial.pd", corpus::kTrivialLoop);
  const auto c = run("certify " + trivial);
  REQUIRE(c.status == 0);
  const auto cert = file_with("cert.json", c.out);
  CHECK(json_of(c)["kind"] == "unknot");
  CHECK(json_of(c)["version"] == 1);

  const auto ok = run("verify " + cert + " " + trivial);
  CHECK(ok.status == 0);
  CHECK(json_of(ok)["valid"] == true);

  const auto bad = run("verify " + cert + " " + file_with("trefoil.pd", corpus::kTrefoil));
  CHECK(bad.status == 0);
  CHECK(json_of(bad)["valid"] == false);
  CHECK(json_of(bad)["reason"].is_string());

  const auto unlink = file_with("unlink.pd", corpus::kUnlink2);
  const auto split = run("certify --kind split " + unlink);
  CHECK(json_of(split)["kind"] == "split");
  CHECK(json_of(run("verify " + file_with("split.json", split.out) + " " + unlink))["valid"] == true);
}

TEST_CASE("exit codes") {
  CHECK(run("unknot /nonexistent/diagram.pd").status == 2);
  CHECK(run("unknot " + file_with("broken.pd", "PD[X(1,2,3)]")).status == 2);
  CHECK(run("unknot " + file_with("hopf.pd", corpus::kHopf)).status == 2);
  CHECK(run("frobnicate x").status == 2);
  CHECK(run("unknot --workers 0 x.pd").status == 2);
  CHECK(run("unknot --budget-seconds -1 x.pd").status == 2);

  const auto b = run("unknot --budget-candidates 2 " + file_with("trefoil.pd", corpus::kTrefoil));
  CHECK(b.status == 3);
  CHECK(json_of(b)["verdict"] == "budget-exceeded");
}

TEST_CASE("output is reproducible") {
  const auto eight = file_with("eight.pd", corpus::kFigureEight);
  const auto a = run("genus " + eight);
  const auto b = run("genus --workers 3 " + eight);
  CHECK(without_timing(a.out) == without_timing(b.out));
  CHECK(without_timing(a.out) == without_timing(run("genus " + eight).out));
  CHECK(without_timing(a.out).find("elapsed") == std::string::npos);
}

TEST_CASE("triangulate dumps an auditable complex") {
  const auto o = run("triangulate " + file_with("trefoil.pd", corpus::kTrefoil));
  REQUIRE(o.status == 0);
  const auto j = json_of(o);
  const auto t = knotcert::Triangulation::parse(j["triangulation"].get<std::string>());
  CHECK(t.size() == j["tetrahedra"]);
  CHECK(t.hash() == j["hash"]);
  CHECK(j["markings"].get<std::string>().rfind("meridian 0:", 0) == 0);

  const auto text = run("triangulate --format text " + file_with("trefoil.pd", corpus::kTrefoil));
  CHECK(text.out.rfind(t.serialize(), 0) == 0);
}

TEST_CASE("text format and stdin") {
  const auto o = run("unknot --format text - < " + file_with("kink.pd", corpus::kKink1));
  CHECK(o.status == 0);
  CHECK(o.out.rfind("unknot: yes", 0) == 0);
  CHECK(run("unknot --mode haken " + file_with("kink2.pd", corpus::kKink2)).status == 0);
}
