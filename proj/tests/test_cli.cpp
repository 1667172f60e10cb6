#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <string>

using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

RunResult run(const std::string& args, const std::string& env = "") {
  const std::string err_path = "/tmp/qglt_cli_stderr.txt";
  const std::string cmd = env + (env.empty() ? "" : " ") + std::string(QGLT_BIN_PATH) + " " +
                          args + " 2>" + err_path;
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream err(err_path);
  r.err.assign(std::istreambuf_iterator<char>(err), std::istreambuf_iterator<char>());
  return r;
}

const char* kLineWell =
    R"('{"n_edges":2,"edges":[[{"len":1,"val":-1}],[{"len":1,"val":-1}]]}')";
const char* kLineInput = R"('{"neg":[{"len":1,"val":-1}],"pos":[{"len":1,"val":-1}]}')";

}  // namespace

TEST_CASE("solve: spectrum, ratio, and embedded manifest") {
  RunResult r = run(std::string("solve --potential ") + kLineWell +
                    " --gamma 0.5 --h 0.01 --len 12 --seed 3");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["manifest"]["command"] == "solve");
  CHECK(j["manifest"]["flags"]["--gamma"] == "0.5");
  CHECK(j["manifest"]["seed"] == 3);
  CHECK(j["manifest"]["version"].is_string());
  CHECK(j["gamma"] == 0.5);
  CHECK(j["n_edges"] == 2);
  REQUIRE(j["spectrum"]["count"] == 1);
  CHECK(j["spectrum"]["eigenvalues"][0] == doctest::Approx(-0.453753165861).epsilon(1e-4));
  CHECK(j["ratio"] == doctest::Approx(0.3368).epsilon(1e-2));

  RunResult dump = run(std::string("solve --potential ") + kLineWell +
                       " --h 0.5 --len 2 --dump-operator");
  REQUIRE(dump.exit_code == 0);
  json jd = json::parse(dump.out);
  CHECK(jd["operator"]["structure"] == "star");
}

TEST_CASE("verify subcommands exit 0 on honest passes") {
  RunResult sector = run("verify sector --edges 3 --random 2 --seed 1 --h 0.02 --len 10");
  REQUIRE(sector.exit_code == 0);
  json js = json::parse(sector.out);
  CHECK(js["passed"] == true);
  CHECK(js["checked"] == 2);

  RunResult t1 = run("verify theorem1 --edges 2 --random 3 --seed 5 --h 0.02 --len 10");
  REQUIRE(t1.exit_code == 0);
  CHECK(json::parse(t1.out)["passed"] == true);

  RunResult split = run("verify split-bound --edges 3 --random 2 --seed 4 --h 0.02 --len 10");
  CHECK(split.exit_code == 0);
}

TEST_CASE("verify mono with an over-tight constant exits 2") {
  RunResult r = run("verify mono --edges 5 --n0 3 --l-n0 0.01 --random 3 --seed 2 "
                    "--h 0.02 --len 10");
  CHECK(r.exit_code == 2);
  json j = json::parse(r.out);
  CHECK(j["passed"] == false);
}

TEST_CASE("usage errors exit 1 with a pointer to the offender") {
  RunResult unknown = run("solve --no-such-flag");
  CHECK(unknown.exit_code == 1);
  CHECK(unknown.err.find("--no-such-flag") != std::string::npos);

  RunResult bad = run("solve --potential '[{\"len\":1}]'");
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("SchemaError") != std::string::npos);
  CHECK(bad.err.find("$[0]") != std::string::npos);
  CHECK(bad.err.find("'val'") != std::string::npos);

  RunResult missing = run("solve");
  CHECK(missing.exit_code == 1);
  CHECK(missing.err.find("--potential") != std::string::npos);

  RunResult badsub = run("verify");
  CHECK(badsub.exit_code == 1);
}

TEST_CASE("config file binds per-subcommand sections, flags win") {
  const char* cfg_path = "/tmp/qglt_cli_config.toml";
  {
    std::ofstream cfg(cfg_path);
    cfg << "[solve]\ngamma = 1.5\nlen = 10.0\nh = 0.02\n";
  }
  const std::string env = std::string("QGLT_CONFIG=") + cfg_path;

  RunResult from_cfg = run(std::string("solve --potential ") + kLineWell, env);
  REQUIRE(from_cfg.exit_code == 0);
  CHECK(json::parse(from_cfg.out)["gamma"] == 1.5);

  RunResult flag_wins =
      run(std::string("solve --potential ") + kLineWell + " --gamma 0.5", env);
  REQUIRE(flag_wins.exit_code == 0);
  CHECK(json::parse(flag_wins.out)["gamma"] == 0.5);
}

TEST_CASE("oracle agrees with the discretized solve") {
  RunResult r = run("oracle --potential '{\"neg\":[{\"len\":1,\"val\":-1}],"
                    "\"pos\":[{\"len\":1,\"val\":-1}]}'");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  REQUIRE(j["roots"].size() == 1);
  CHECK(j["roots"][0]["energy"] == doctest::Approx(-0.453753165861).epsilon(1e-9));
  CHECK(j["scan_too_coarse"] == false);

  RunResult half = run("oracle --edges 1 --bc dirichlet --potential '[{\"len\":1,\"val\":-6}]'");
  REQUIRE(half.exit_code == 0);
  CHECK(json::parse(half.out)["roots"].size() == 1);
}

TEST_CASE("sweep: deterministic TSV with manifest header") {
  RunResult r = run(std::string("sweep --potential ") + kLineInput +
                    " --offsets 2 --offsets 4 --format tsv --h 0.02");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("# qglt ", 0) == 0);
  CHECK(r.out.find("a\tratio\tline_ratio\trel_gap\n") != std::string::npos);
  CHECK(r.out.find("# manifest\t{") != std::string::npos);

  RunResult again = run(std::string("sweep --potential ") + kLineInput +
                        " --offsets 2 --offsets 4 --format tsv --h 0.02");
  // identical modulo the embedded timestamp line
  auto strip = [](std::string s) {
    const auto pos = s.find("# manifest");
    const auto end = s.find('\n', pos);
    return s.erase(pos, end - pos);
  };
  CHECK(strip(r.out) == strip(again.out));
}

TEST_CASE("verify suite runs the whole battery") {
  RunResult r = run("verify suite --jobs 2");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["passed"] == true);
  CHECK(j["checks"].size() >= 20);
  for (const auto& c : j["checks"]) CHECK(c["passed"] == true);
}

TEST_CASE("search subcommand emits ratio and best field") {
  RunResult r = run("search --edges 2 --cells 5 --cell-width 0.5 --max-iters 10 "
                    "--restarts 1 --len 8 --h 0.02 --seed 1");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["best_ratio"].get<double>() > 0.3);
  CHECK(j["best_field"]["n_edges"] == 2);
  CHECK(j["iterate_trace"].size() >= 1);
  CHECK(j["terminated_by"].is_string());
}

TEST_CASE("version flag prints the library version") {
  RunResult r = run("--version");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("0.1.0") != std::string::npos);
}
