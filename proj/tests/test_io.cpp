#include <filesystem>
#include <fstream>
#include <random>

#include "creature/io.hpp"
#include "creature/transforms.hpp"
#include "doctest.h"

using namespace creature;

namespace {

std::string temp_file(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("creature_io_" + name);
  std::ofstream(path) << text;
  return path.string();
}

Condition round_trip(const Condition& p) { return condition_from_json(Json::parse(condition_to_json(p).dump())); }

}  // namespace

TEST_CASE("pairs round-trip") {
  std::vector<PairPtr> pairs{
      std::make_shared<SubsetPair>(SlotSpace({2, 3, 4}), GrowthRule::Log2),
      std::make_shared<BlockPair>(std::vector<int>{0, 2, 3}),
      std::make_shared<SymbolicPair>(SymbolicSlots::with_formula({LogLogCard::exact(20), LogLogCard::exact(Rational(101, 3))})),
      summarize_pair(std::make_shared<SubsetPair>(SlotSpace({2, 2, 3}), GrowthRule::Identity), {0, 1, 3}),
  };
  for (const PairPtr& pair : pairs) {
    CAPTURE(pair->describe());
    PairPtr back = pair_from_json(Json::parse(pair_to_json(*pair).dump()));
    CHECK(back->same_as(*pair));
    CHECK(pair_to_json(*back) == pair_to_json(*pair));
  }
}

TEST_CASE("conditions round-trip") {
  auto subset = std::make_shared<SubsetPair>(SlotSpace({3, 3, 3, 3}), GrowthRule::Identity);
  Condition p{subset, {2}, {subset->make(1, {0, 2}), subset->make(2, {1})}};
  CHECK(round_trip(p) == p);

  auto symbolic = std::make_shared<SymbolicPair>(SymbolicSlots{{LogLogCard::exact(20), LogLogCard::exact(30)}, {2, 3}});
  Condition q{symbolic, {5}, {symbolic->make(1, LogLogCard::exact(Rational(51, 2)), Rational(7, 3))}};
  CHECK(round_trip(q) == q);

  auto summarized = summarize_pair(subset, {0, 2, 4});
  Condition r = summarize_condition(Condition{subset, {}, {subset->make(0, {1}), subset->make(1, {0, 1})}}, summarized);
  CHECK(round_trip(r) == r);

  Json j = condition_to_json(p);
  CHECK(j["creatures"][0]["nor"] == 2.0);
}

TEST_CASE("witness round-trip") {
  BadnessWitness w = build_badness(2, 2, 1.0);
  BadnessWitness back = witness_from_json(Json::parse(witness_to_json(w).dump()));
  CHECK(back.blocks() == w.blocks());
  CHECK(back.norm_gate() == w.norm_gate());
  CHECK(back.growth_base() == w.growth_base());
  for (int i = 0; i < w.level_count(); ++i) CHECK(back.level(i).d == w.level(i).d);
}

TEST_CASE("malformed input names its location") {
  SUBCASE("unparsable file reports a byte offset") {
    std::string path = temp_file("broken.json", "{\"kind\": \"subset\",, }");
    try {
      load_json_file(path);
      FAIL("no error");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(load_json_file("/nonexistent/creature.json"), InputError); }
  SUBCASE("bad creature inside a condition") {
    Json j = Json::parse(R"({"pair": {"kind": "subset", "H": [2, 2], "growth": "identity"},
                             "stem": [], "creatures": [{"m": 0, "set": [0, 5]}]})");
    try {
      condition_from_json(j, "c.json#");
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("c.json#/creatures/0") != std::string::npos);
    }
  }
  SUBCASE("unknown pair kind") {
    try {
      pair_from_json(Json::parse(R"({"kind": "tree"})"), "p");
      FAIL("no error");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("p/kind") != std::string::npos);
    }
  }
  SUBCASE("wrong types") {
    CHECK_THROWS_AS(pair_from_json(Json::parse(R"({"kind": "subset", "H": "2,2"})")), InputError);
    CHECK_THROWS_AS(witness_from_json(Json::parse(R"({"blocks": [0, 57]})")), InputError);
  }
}
