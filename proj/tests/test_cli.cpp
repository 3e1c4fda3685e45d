#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;

struct Outcome {
  int code;
  std::string out, err;
  Json report() const { return Json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = creature::cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "creature_cli_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::string write(const std::string& name, const std::string& text) {
  std::string path = scratch(name);
  std::ofstream(path) << text;
  return path;
}

Json read(const std::string& path) {
  std::ifstream in(path);
  return Json::parse(in);
}

const char* kSubsetCondition = R"({"pair": {"kind": "subset", "H": [2, 2, 3, 2, 4, 3, 2, 3], "growth": "identity"},
  "stem": [1, 0], "creatures": [{"m": 2, "set": [0, 2]}, {"m": 3, "set": [1]}, {"m": 4, "set": [0, 1, 3]}]})";

}  // namespace

TEST_CASE("verify-coloring reports families and failures") {
  Outcome o = run({"--no-timing", "verify-coloring", "--N", "2", "--M", "3", "--d", "2", "--budget", "1000000"});
  REQUIRE(o.code == 0);
  Json r = o.report();
  CHECK(r["command"] == "verify-coloring");
  CHECK(r["details"]["families_checked"] == 10);
  CHECK(r["details"]["failures"] == 0);
  CHECK(r["elapsed_ms"] == 0.0);
}

TEST_CASE("build-badness, encode and decode through files") {
  std::string w = scratch("w.json"), q = scratch("q.json");
  REQUIRE(run({"--no-timing", "--out", w, "build-badness", "--levels", "3"}).code == 0);
  CHECK(read(w)["result"]["blocks"] == Json::array({0, 57, 298, 298 + 993}));

  Outcome encoded = run({"--no-timing", "--out", q, "encode", "--witness", w, "--bits", "101"});
  REQUIRE(encoded.code == 0);
  Json report = read(q);
  CHECK(report["failed"] == 0);
  CHECK(report["checked"] == 103);

  Outcome decoded = run({"--no-timing", "decode", "--witness", w, "--condition", q});
  REQUIRE(decoded.code == 0);
  CHECK(decoded.report()["result"]["rho"] == "101");
  CHECK(decoded.report()["checked"] == 100);

  Outcome explicit_seed = run({"--no-timing", "decode", "--witness", w, "--condition", q, "--seed",
                               std::to_string(report["result"]["seed"]["level"].get<int>()) + "," +
                                   std::to_string(report["result"]["seed"]["a"].get<int>())});
  CHECK(explicit_seed.code == 0);
  CHECK(explicit_seed.report()["result"]["rho"] == "101");

  CHECK(run({"decode", "--witness", w, "--condition", q, "--seed", "1;2"}).code == 2);
  CHECK(run({"encode", "--witness", w, "--bits", "1011"}).code == 2);
}

TEST_CASE("summarize and reduce") {
  std::string pair = write("pair.json", R"({"kind": "subset", "H": [2, 2, 3, 3], "growth": "identity"})");
  Outcome summarized = run({"--no-timing", "summarize", "--pair", pair, "--blocks", "0,2,4"});
  REQUIRE(summarized.code == 0);
  CHECK(summarized.report()["result"]["kind"] == "summarized");

  std::string p = write("aligned.json", R"({"pair": {"kind": "subset", "H": [2, 2, 3, 3], "growth": "identity"},
    "stem": [1, 0], "creatures": [{"m": 2, "set": [0, 2]}, {"m": 3, "set": [1]}]})");
  Outcome q = run({"--no-timing", "summarize", "--condition", p, "--blocks", "0,2,4"});
  REQUIRE(q.code == 0);
  CHECK(q.report()["result"]["creatures"].size() == 1);

  std::string r = write("reduce.json", R"({"pair": {"kind": "subset", "H": [4, 4, 4, 4, 4, 4], "growth": "identity"},
    "stem": [], "creatures": [{"m": 0, "set": [0, 1]}, {"m": 1, "set": [0, 1, 2]}, {"m": 2, "set": [0, 1, 2, 3]},
    {"m": 3, "set": [1, 2, 3]}, {"m": 4, "set": [0, 1, 2, 3]}, {"m": 5, "set": [0, 1, 2, 3]}]})");
  Outcome reduced = run({"--no-timing", "reduce", "--condition", r, "--blocks", "2", "--growth-base", "0"});
  REQUIRE(reduced.code == 0);
  CHECK(reduced.report()["result"]["blocks"] == Json::array({0, 1, 4, 5}));
  CHECK(run({"reduce", "--condition", r, "--blocks", "2"}).code == 2);
}

TEST_CASE("build-split, split and check-hypothesis") {
  std::string maps = scratch("maps.json");
  REQUIRE(run({"--no-timing", "--out", maps, "build-split", "--H", "2,2,3,2,4,3,2,3"}).code == 0);
  CHECK(read(maps)["result"]["n"] == Json::array({0, 1, 2, 6}));

  std::string p = write("split.json", kSubsetCondition);
  Outcome with_maps = run({"--no-timing", "split", "--condition", p, "--maps", maps});
  CHECK(with_maps.code == 0);
  Outcome inline_maps = run({"--no-timing", "split", "--condition", p});
  CHECK(inline_maps.code == 0);
  CHECK(with_maps.report()["result"] == inline_maps.report()["result"]);

  CHECK(run({"check-hypothesis", "--H", "2", "--repeat", "8"}).code == 0);
  Outcome doubled = run({"--no-timing", "check-hypothesis", "--H", "2", "--repeat", "8", "--eps-scale", "2"});
  CHECK(doubled.code == 1);
  CHECK(doubled.report()["counterexample"] == "side0 level 0: product 1 > 1/eps = 1/2");
  CHECK(run({"build-split", "--H", "2", "--repeat", "8", "--split-levels", "4"}).code == 2);
}

TEST_CASE("verify-halving and verify-norms") {
  Outcome halving = run({"--no-timing", "verify-halving", "--grid", "small"});
  REQUIRE(halving.code == 0);
  CHECK(halving.report()["params"]["samples"] == 2000);
  CHECK(halving.report()["details"]["boundary_nor_2"].get<int>() > 0);

  Outcome fault = run({"--no-timing", "verify-halving", "--samples", "300", "--rule", "floor-minus-one"});
  CHECK(fault.code == 1);
  CHECK(fault.report()["details"]["clause_i_failures"] == 0);
  CHECK(fault.report()["details"]["placement_failures"].get<int>() > 0);
  CHECK(fault.report().contains("counterexample"));

  CHECK(run({"verify-norms", "--clause", "2", "--grid", "small"}).code == 0);
  std::string csv = scratch("norms.csv");
  REQUIRE(run({"verify-norms", "--grid", "small", "--csv", csv}).code == 0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK_FALSE(header.empty());
}

TEST_CASE("verify-goodpair") {
  CHECK(run({"verify-goodpair", "--kind", "subset", "--H", "2,3,4"}).code == 0);
  CHECK(run({"verify-goodpair", "--kind", "block", "--blocks", "0,2,3"}).code == 0);
  CHECK(run({"verify-goodpair", "--kind", "summarized", "--H", "2,3,3,2", "--blocks", "0,2,4"}).code == 0);
}

TEST_CASE("byte-identical reports with --no-timing") {
  std::vector<std::vector<std::string>> commands{
      {"--no-timing", "--seed", "7", "verify-halving", "--samples", "500"},
      {"--no-timing", "--seed", "7", "encode", "--bits", "01"},
      {"--no-timing", "verify-coloring", "--N", "3", "--M", "3", "--d", "9", "--sampled", "--samples", "20"},
  };
  for (const auto& args : commands) {
    Outcome a = run(args), b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
  CHECK_FALSE(run(commands[0]).out == run({"--no-timing", "--seed", "8", "verify-halving", "--samples", "500"}).out);
}

TEST_CASE("usage and input errors exit with 2") {
  CHECK(run({"verify-coloring", "--N", "2", "--M", "2", "--d", "1", "--bogus"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"no-such-command"}).code == 2);

  std::string broken = write("broken.json", "{\"pair\": ");
  Outcome malformed = run({"split", "--condition", broken});
  CHECK(malformed.code == 2);
  CHECK(malformed.err.find("malformed JSON") != std::string::npos);

  std::string wrong = write("wrong.json", R"({"pair": {"kind": "subset", "H": [2]}, "creatures": [{"m": 0, "set": [3]}]})");
  Outcome located = run({"reduce", "--condition", wrong});
  CHECK(located.code == 2);
  CHECK(located.err.find("/creatures/0") != std::string::npos);

  Outcome budget = run({"--budget", "10", "verify-coloring", "--N", "3", "--M", "3", "--d", "9"});
  CHECK(budget.code == 2);
  CHECK(budget.err.find("budget exceeded") != std::string::npos);

  CHECK(run({"verify-coloring", "--N", "3", "--M", "2", "--d", "4"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}
