#include <doctest.h>

#include <json.hpp>
#include <string>

#include "qglt/io.hpp"
#include "qglt/lieb_thirring.hpp"
#include "qglt/operators.hpp"
#include "qglt/symmetry.hpp"

using namespace qglt;
using namespace qglt::io;
using nlohmann::json;

namespace {
Manifest fixed_manifest() {
  Manifest m;
  m.command = "verify theorem1";
  m.flags = {{"--gamma", "0.5"}, {"--random", "3"}};
  m.inputs = {{"<inline>", "00000000deadbeef"}};
  m.version = "0.1.0";
  m.timestamp = "2026-01-01T00:00:00Z";
  m.seed = 42;
  return m;
}
}  // namespace

TEST_CASE("digest: FNV-1a 64 published vectors") {
  CHECK(digest("") == "cbf29ce484222325");
  CHECK(digest("a") == "af63dc4c8601ec8c");
  CHECK(digest("abc") == "e71fa2190541574b");
}

TEST_CASE("profile serialization round-trips through canonical JSON") {
  EdgePotential p({{1.0, -2.0}, {0.5, 0.25}});
  const std::string text = to_json(p);
  CHECK(text == R"([{"len":1.0,"val":-2.0},{"len":0.5,"val":0.25}])");

  PotentialInput back = potential_from_json(text);
  REQUIRE(std::holds_alternative<EdgePotential>(back));
  CHECK(std::get<EdgePotential>(back) == p);
}

TEST_CASE("field and line serialization round-trip") {
  PotentialField f(StarGraph{3}, {EdgePotential({{1.0, -1.0}}), EdgePotential(),
                                  EdgePotential({{0.5, -3.0}, {0.5, -1.0}})});
  PotentialInput back = potential_from_json(to_json(f));
  REQUIRE(std::holds_alternative<PotentialField>(back));
  const auto& g = std::get<PotentialField>(back);
  CHECK(g.graph.n_edges == 3);
  for (int i = 0; i < 3; ++i) CHECK(g.edge(i) == f.edge(i));

  LinePotential line{EdgePotential({{2.0, -0.5}}), EdgePotential({{1.0, -1.5}})};
  PotentialInput lb = potential_from_json(to_json(line));
  REQUIRE(std::holds_alternative<LinePotential>(lb));
  CHECK(std::get<LinePotential>(lb).neg == line.neg);
  CHECK(std::get<LinePotential>(lb).pos == line.pos);
}

TEST_CASE("schema errors carry JSON paths") {
  auto message_of = [](const std::string& text) {
    try {
      potential_from_json(text);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::schema_error);
      return std::string(e.what());
    }
    return std::string("(no error)");
  };

  const std::string missing = message_of(R"([{"len":1.0}])");
  CHECK(missing.find("$[0]") != std::string::npos);
  CHECK(missing.find("'val'") != std::string::npos);
  CHECK(message_of(R"([{"len":1.0,"val":"x"}])").find("$[0].val") != std::string::npos);
  CHECK(message_of(R"({"n_edges":2,"edges":[[{"len":1,"val":-1}],[{"len":"y","val":0}]]})")
            .find("$.edges[1][0].len") != std::string::npos);
  CHECK(message_of(R"({"n_edges":0,"edges":[]})").find("n_edges") != std::string::npos);
  CHECK(message_of("{") .find("invalid JSON") != std::string::npos);
  CHECK(message_of(R"({"foo":1})").find("$") != std::string::npos);
  // negative segment length is rejected while parsing, with its path
  CHECK(message_of(R"([{"len":-1.0,"val":-1.0}])").find("$[0].len") != std::string::npos);
}

TEST_CASE("manifest serialization and payload merging") {
  Manifest m = fixed_manifest();
  json j = json::parse(to_json(m));
  CHECK(j["command"] == "verify theorem1");
  CHECK(j["flags"]["--gamma"] == "0.5");
  CHECK(j["inputs"]["<inline>"] == "00000000deadbeef");
  CHECK(j["seed"] == 42);
  CHECK(j["version"] == "0.1.0");
  CHECK(j["timestamp"] == "2026-01-01T00:00:00Z");

  json wrapped = json::parse(with_manifest(m, R"({"alpha":1,"beta":[2,3]})"));
  CHECK(wrapped["manifest"]["command"] == "verify theorem1");
  CHECK(wrapped["alpha"] == 1);
  CHECK(wrapped["beta"][1] == 3);

  // non-object payloads are nested under "result"
  json scalar = json::parse(with_manifest(m, "[1,2]"));
  CHECK(scalar["result"][0] == 1);
}

TEST_CASE("spectrum and report emitters expose the documented fields") {
  Spectrum s;
  s.eigenvalues = {-4.0, -1.0};
  s.tol_eig = 1e-10;
  s.tol_zero = 1e-12;
  s.near_zero_flag = true;
  json j = json::parse(to_json(s));
  CHECK(j["count"] == 2);
  CHECK(j["eigenvalues"][0] == -4.0);
  CHECK(j["near_zero_flag"] == true);
  CHECK(j["tol_zero"] == 1e-12);

  LTReport r;
  r.gamma = 0.5;
  r.n_edges = 3;
  r.trace = 0.4;
  r.norm = 1.0;
  r.ratio = 0.4;
  r.bound = 0.5;
  r.margin = 0.1;
  r.passed = true;
  r.provenance = "sharp";
  r.grid = {0.01, 30.0};
  json jr = json::parse(to_json(r));
  CHECK(jr["ratio"] == 0.4);
  CHECK(jr["passed"] == true);
  CHECK(jr["provenance"] == "sharp");
  CHECK(jr["grid"]["h"] == 0.01);
}

TEST_CASE("sweep TSV layout") {
  TranslationSweep sweep;
  sweep.gamma = 0.5;
  sweep.n_edges = 3;
  sweep.line_ratio = 0.25;
  sweep.points = {{2.0, 0.2, 0.2}, {4.0, 0.24, 0.04}};
  const std::string tsv = to_tsv(sweep, fixed_manifest());

  CHECK(tsv.find("# qglt 0.1.0") == 0);
  CHECK(tsv.find("a\tratio\tline_ratio\trel_gap\n") != std::string::npos);
  CHECK(tsv.find("2\t0.2\t0.25\t0.2\n") != std::string::npos);
  CHECK(tsv.find("4\t0.24\t0.25\t0.04\n") != std::string::npos);
  // manifest is embedded as a comment line
  CHECK(tsv.find("# manifest\t{") != std::string::npos);
}

TEST_CASE("operator dump mirrors the pencil layout") {
  GridSpec grid(0.5, 4, FarBc::neumann);
  DiscreteOperator op = assemble_star(zero_field(StarGraph{2}), grid);
  json j = json::parse(dump_operator(op));
  CHECK(j["structure"] == "star");
  CHECK(j["n_unknowns"] == 9);
  CHECK(j["vertex"]["diag"] == doctest::Approx(2.0 / 0.5));
  CHECK(j["vertex"]["mass"] == doctest::Approx(0.5));
  REQUIRE(j["chains"].size() == 2);
  CHECK(j["chains"][0]["coupling"] == doctest::Approx(-2.0));
  CHECK(j["chains"][0]["diag"].size() == 4);

  DiscreteOperator dsum = DiscreteOperator::direct_sum(
      {assemble_half_line(EdgePotential(), grid, VertexBc::dirichlet),
       assemble_half_line(EdgePotential(), grid, VertexBc::neumann)});
  json js = json::parse(dump_operator(dsum));
  CHECK(js["structure"] == "direct_sum");
  REQUIRE(js["parts"].size() == 2);
  CHECK(js["parts"][0]["vertex"].is_null());
}

TEST_CASE("file loading surfaces missing paths as usage errors") {
  CHECK_THROWS_AS(potential_from_file("/nonexistent/potential.json"), Error);
}
