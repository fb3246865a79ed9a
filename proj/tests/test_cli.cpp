#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ttl/cli.hpp"
#include "ttl/eval.hpp"
#include "ttl/io.hpp"

using namespace ttl;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = "cli_test_tmp_" + std::to_string(counter++) + ".txt";
    std::ofstream f(path);
    f << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

int run(std::vector<std::string> args, std::string* stdout_text = nullptr) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  if (stdout_text) *stdout_text = out.str();
  return code;
}

}  // namespace

TEST_CASE("pathcheck exit codes and cross-check") {
  TempFile two(
      "trace 1: {p} {p} | {}\n"
      "trace 2: {p} {p} | {}\n");
  TempFile one("trace 1: {p} {p} | {}\n");

  CHECK(run({"pathcheck", "-f", "X X p", "--traces", two.path, "--mode",
             "exists", "--family", "ksync", "-k", "2"}) == kExitTrue);
  CHECK(run({"pathcheck", "-f", "X X p", "--traces", one.path, "--mode",
             "exists", "--family", "ksync", "-k", "2"}) == kExitFalse);
  CHECK(run({"pathcheck", "-f", "X X p", "--traces", two.path, "--mode",
             "exists", "--family", "kctx", "-k", "1", "--cross-check"}) ==
        kExitTrue);

  // Malformed trace file.
  TempFile bad("trace 1: {p\n");
  CHECK(run({"pathcheck", "-f", "p", "--traces", bad.path, "--family",
             "sync"}) == kExitInput);
  // Syntax error in the formula.
  CHECK(run({"pathcheck", "-f", "p &", "--traces", one.path, "--family",
             "sync"}) == kExitInput);
  // Missing family.
  CHECK(run({"pathcheck", "-f", "p", "--traces", one.path}) == kExitInput);
  // k-bound required for bounded families.
  CHECK(run({"pathcheck", "-f", "p", "--traces", one.path, "--family",
             "ksync"}) == kExitInput);
}

TEST_CASE("pathcheck with an explicit tef replays witnesses") {
  TempFile two(
      "trace 1: {p} {p} | {}\n"
      "trace 2: {p} {p} | {}\n");
  TempFile tef("tef init=0,0 steps={1} | {2}\n");
  std::string output;
  CHECK(run({"pathcheck", "-f", "X X p", "--traces", two.path, "--tef",
             tef.path, "--family", "sync", "--json"},
            &output) == kExitTrue);
  CHECK(output.find("\"verdict\": true") != std::string::npos);
}

TEST_CASE("model checking against a structure") {
  TempFile good(
      "state s {p}\n"
      "edge s s\n"
      "root s\n");
  CHECK(run({"mc", "-f", "p", "--kripke", good.path, "-n", "2", "--mode",
             "forall", "--family", "ksync", "-k", "1"}) == kExitTrue);

  TempFile leaky(
      "state a {p}\n"
      "state b {}\n"
      "edge a b\n"
      "edge b b\n"
      "root a\n");
  std::string output;
  CHECK(run({"mc", "-f", "X p", "--kripke", leaky.path, "-n", "1", "--mode",
             "forall", "--family", "ksync", "-k", "1", "--json"},
            &output) == kExitFalse);
  CHECK(output.find("team") != std::string::npos);

  CHECK(run({"mc", "-f", "p", "--kripke", good.path, "-n", "1", "--mode",
             "exists", "--family", "ksync", "-k", "1"}) == kExitCapability);
  // Missing -k is a usage error.
  CHECK(run({"mc", "-f", "p", "--kripke", good.path, "-n", "1", "--mode",
             "forall", "--family", "ksync"}) == kExitInput);
}

TEST_CASE("satisfiability with witnesses") {
  CHECK(run({"sat", "-f", "TRUE", "-n", "1", "--family", "ksync", "-k",
             "0"}) == kExitTrue);
  CHECK(run({"sat", "-f", "NE & FALSE", "-n", "1", "--family", "ksync", "-k",
             "0"}) == kExitFalse);
  std::string output;
  CHECK(run({"sat", "-f", "p & X !p", "-n", "1", "--family", "kctx", "-k",
             "0", "--json"},
            &output) == kExitTrue);
  CHECK(output.find("tef") != std::string::npos);
}

TEST_CASE("translate emits a loadable dump") {
  std::string output;
  CHECK(run({"translate", "-f", "p", "-n", "1"}, &output) == kExitTrue);
  CHECK(output.find("gaaba n=1") != std::string::npos);
  CHECK(output.find("init") != std::string::npos);
  CHECK(output.find("trans") != std::string::npos);
}

TEST_CASE("embed prints fragment formulas") {
  std::string output;
  CHECK(run({"embed", "-f", "G p", "--variant", "actl"}, &output) ==
        kExitTrue);
  CHECK(output.find("[o <= !o]") != std::string::npos);
  CHECK(run({"embed", "-f", "G p", "--variant", "eltl"}, &output) ==
        kExitTrue);
  CHECK(output.find("OR") != std::string::npos);
}

TEST_CASE("encode-n2c prints formula and structure") {
  TempFile machine("INC L 0 0\nDEC L 0 1\n");
  std::string output;
  CHECK(run({"encode-n2c", "--machine", machine.path, "-b", "1"}, &output) ==
        kExitTrue);
  CHECK(output.find("root") != std::string::npos);
  CHECK(output.find("i1") != std::string::npos);
}

TEST_CASE("generalized atoms come from a side file") {
  TempFile atoms("gen const 1 = {} {0} {1}\n");
  TempFile traces(
      "trace 1: | {p}\n"
      "trace 2: | {p}\n");
  CHECK(run({"pathcheck", "-f", "gen:const(p)", "--atoms", atoms.path,
             "--traces", traces.path, "--family", "sync"}) == kExitTrue);
  TempFile mixed(
      "trace 1: | {p}\n"
      "trace 2: | {}\n");
  CHECK(run({"pathcheck", "-f", "gen:const(p)", "--atoms", atoms.path,
             "--traces", mixed.path, "--family", "sync"}) == kExitFalse);
  // Unknown atom name is an input error.
  CHECK(run({"pathcheck", "-f", "gen:nope(p)", "--atoms", atoms.path,
             "--traces", traces.path, "--family", "sync"}) == kExitInput);
}

TEST_CASE("formula arguments can come from files") {
  TempFile formula("X X p\n");
  TempFile traces(
      "trace 1: {p} {p} | {}\n"
      "trace 2: {p} {p} | {}\n");
  CHECK(run({"pathcheck", "-f", "@" + formula.path, "--traces", traces.path,
             "--mode", "exists", "--family", "kctx", "-k", "1"}) ==
        kExitTrue);
}

TEST_CASE("json witnesses round-trip through the text parsers") {
  std::string output;
  REQUIRE(run({"sat", "-f", "p & X !p", "-n", "1", "--family", "kctx", "-k",
               "0", "--json"},
              &output) == kExitTrue);
  auto j = nlohmann::json::parse(output);
  CHECK(j["version"] == 1);
  CHECK(j["verdict"] == true);

  APContext ap;
  std::istringstream team_in(j["team"].get<std::string>());
  Team team = parse_traces(team_in, ap);
  std::istringstream tef_in(j["tef"].get<std::string>());
  Tef tef = parse_tef(tef_in, static_cast<uint32_t>(team.size()));
  // The replayed witness satisfies the formula.
  CHECK(eval_team(team, tef, parse_formula("p & X !p"), TefFamily::kctx(0),
                  ap));
}
