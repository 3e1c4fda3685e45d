#include "creature/io.hpp"

#include <fstream>
#include <sstream>

#include "creature/pairs.hpp"
#include "creature/transforms.hpp"

namespace creature {

namespace {

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, std::size_t index) { return where + "/" + std::to_string(index); }

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw InputError((where.empty() ? std::string("/") : where) + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing field '") + key + "'");
  return *it;
}

template <typename T>
T as(const Json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    bad(where, e.what());
  }
}

Rational rational_of(const Json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    bad(where, e.what());
  }
  bad(where, "expected an integer or a rational string such as \"7/2\"");
}

std::vector<int> ints_of(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array of integers");
  return as<std::vector<int>>(j, where);
}

// Wraps construction errors (non-members, bad shapes) with the location.
template <typename F>
auto located(const std::string& where, F&& build) {
  try {
    return build();
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    bad(where, e.what());
  }
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": byte " + std::to_string(e.byte) + ": malformed JSON");
  }
}

Json pair_to_json(const CreatingPair& pair) {
  switch (pair.kind()) {
    case PairKind::Subset: {
      const auto& p = static_cast<const SubsetPair&>(pair);
      return Json{{"kind", "subset"}, {"H", p.slots().sizes()}, {"growth", to_string(p.rule())}};
    }
    case PairKind::Block:
      return Json{{"kind", "block"}, {"blocks", static_cast<const BlockPair&>(pair).blocks()}};
    case PairKind::Symbolic: {
      const auto& p = static_cast<const SymbolicPair&>(pair);
      Json lambdas = Json::array();
      for (const LogLogCard& c : p.slots().cards) lambdas.push_back(c.to_string());
      return Json{{"kind", "symbolic"}, {"lambdas", lambdas}, {"divisors", p.slots().divisors}};
    }
    case PairKind::Summarized: {
      const auto& p = static_cast<const SummarizedPair&>(pair);
      return Json{{"kind", "summarized"}, {"base", pair_to_json(*p.base())}, {"blocks", p.blocks()}};
    }
    case PairKind::Other:
      break;
  }
  throw PreconditionError("pair " + pair.describe() + " has no JSON form");
}

PairPtr pair_from_json(const Json& j, const std::string& where) {
  std::string kind = as<std::string>(field(j, "kind", where), at(where, "kind"));
  return located(where, [&]() -> PairPtr {
    if (kind == "subset") {
      GrowthRule rule = GrowthRule::Identity;
      if (j.contains("growth")) rule = parse_growth_rule(as<std::string>(j["growth"], at(where, "growth")));
      return std::make_shared<SubsetPair>(SlotSpace(ints_of(field(j, "H", where), at(where, "H"))), rule);
    }
    if (kind == "block") return std::make_shared<BlockPair>(ints_of(field(j, "blocks", where), at(where, "blocks")));
    if (kind == "symbolic") {
      const Json& lambdas = field(j, "lambdas", where);
      if (!lambdas.is_array()) bad(at(where, "lambdas"), "expected an array");
      std::vector<LogLogCard> cards;
      for (std::size_t n = 0; n < lambdas.size(); ++n)
        cards.push_back(LogLogCard::exact(rational_of(lambdas[n], at(at(where, "lambdas"), n))));
      if (!j.contains("divisors")) {
        Rational threshold = j.contains("threshold") ? rational_of(j["threshold"], at(where, "threshold")) : Rational(16);
        return std::make_shared<SymbolicPair>(SymbolicSlots::with_formula(std::move(cards), threshold));
      }
      SymbolicSlots slots{std::move(cards), ints_of(j["divisors"], at(where, "divisors"))};
      return std::make_shared<SymbolicPair>(std::move(slots));
    }
    if (kind == "summarized")
      return summarize_pair(pair_from_json(field(j, "base", where), at(where, "base")),
                            ints_of(field(j, "blocks", where), at(where, "blocks")));
    bad(at(where, "kind"), "unknown pair kind '" + kind + "'");
  });
}

Json creature_to_json(const Creature& t) {
  Json out;
  if (const auto* info = std::get_if<SumInfo>(&t.dis)) {
    Json parts = Json::array();
    for (const Creature& part : info->parts) parts.push_back(creature_to_json(part));
    out["parts"] = parts;
  } else if (const auto* info = std::get_if<SymbolicInfo>(&t.dis)) {
    out["m"] = t.m_dn;
    out["lambda"] = t.card().to_string();
    out["drop"] = to_string(info->drop);
    out["k"] = info->k;
  } else if (const auto* info = std::get_if<BlockInfo>(&t.dis)) {
    out["level"] = info->level;
    out["sets"] = t.product().coords;
  } else {
    out["m"] = t.m_dn;
    out["set"] = t.product().coords.at(0);
  }
  out["nor"] = t.nor;
  return out;
}

Creature creature_from_json(const Json& j, const CreatingPair& pair, const std::string& where) {
  return located(where, [&]() -> Creature {
    switch (pair.kind()) {
      case PairKind::Subset:
        return static_cast<const SubsetPair&>(pair).make(as<int>(field(j, "m", where), at(where, "m")),
                                                         ints_of(field(j, "set", where), at(where, "set")));
      case PairKind::Block: {
        const Json& sets = field(j, "sets", where);
        if (!sets.is_array()) bad(at(where, "sets"), "expected an array of arrays");
        return static_cast<const BlockPair&>(pair).make(as<int>(field(j, "level", where), at(where, "level")),
                                                        as<std::vector<ValueSet>>(sets, at(where, "sets")));
      }
      case PairKind::Symbolic:
        return static_cast<const SymbolicPair&>(pair).make(
            as<int>(field(j, "m", where), at(where, "m")),
            LogLogCard::exact(rational_of(field(j, "lambda", where), at(where, "lambda"))),
            rational_of(field(j, "drop", where), at(where, "drop")));
      case PairKind::Summarized: {
        const auto& summarized = static_cast<const SummarizedPair&>(pair);
        const Json& parts = field(j, "parts", where);
        if (!parts.is_array()) bad(at(where, "parts"), "expected an array");
        std::vector<Creature> built;
        for (std::size_t n = 0; n < parts.size(); ++n)
          built.push_back(creature_from_json(parts[n], *summarized.base(), at(at(where, "parts"), n)));
        return summarized.make(built);
      }
      case PairKind::Other:
        break;
    }
    bad(where, "pair " + pair.describe() + " has no JSON form");
  });
}

Json condition_to_json(const Condition& p) {
  Json creatures = Json::array();
  for (const Creature& t : p.creatures) creatures.push_back(creature_to_json(t));
  return Json{{"pair", pair_to_json(*p.pair)}, {"stem", p.stem}, {"creatures", creatures}};
}

Condition condition_from_json(const Json& j, const std::string& where) {
  Condition p;
  p.pair = pair_from_json(field(j, "pair", where), at(where, "pair"));
  p.stem = j.contains("stem") ? ints_of(j["stem"], at(where, "stem")) : std::vector<int>{};
  if (j.contains("creatures")) {
    const Json& creatures = j["creatures"];
    if (!creatures.is_array()) bad(at(where, "creatures"), "expected an array");
    for (std::size_t n = 0; n < creatures.size(); ++n)
      p.creatures.push_back(creature_from_json(creatures[n], *p.pair, at(at(where, "creatures"), n)));
  }
  located(where, [&] {
    p.validate();
    return 0;
  });
  return p;
}

Json witness_to_json(const BadnessWitness& witness) {
  Json levels = Json::array();
  for (const LevelParams& level : witness.levels()) levels.push_back(Json{{"M", level.M}, {"N", level.N}, {"d", level.d}});
  return Json{{"blocks", witness.blocks()},
              {"levels", levels},
              {"growth_base", witness.growth_base()},
              {"norm_gate", witness.norm_gate()}};
}

BadnessWitness witness_from_json(const Json& j, const std::string& where) {
  std::vector<int> blocks = ints_of(field(j, "blocks", where), at(where, "blocks"));
  const Json& levels = field(j, "levels", where);
  if (!levels.is_array()) bad(at(where, "levels"), "expected an array");
  std::vector<LevelParams> params;
  for (std::size_t n = 0; n < levels.size(); ++n) {
    std::string here = at(at(where, "levels"), n);
    params.push_back(LevelParams{as<int>(field(levels[n], "M", here), at(here, "M")),
                                 as<int>(field(levels[n], "N", here), at(here, "N")),
                                 as<int>(field(levels[n], "d", here), at(here, "d"))});
  }
  int growth = j.contains("growth_base") ? as<int>(j["growth_base"], at(where, "growth_base")) : 0;
  double gate = j.contains("norm_gate") ? as<double>(j["norm_gate"], at(where, "norm_gate")) : 4.0;
  return located(where, [&] {
    BadnessWitness witness(std::move(blocks), std::move(params), growth, gate);
    witness.validate();
    return witness;
  });
}

Json split_to_json(const SplitMaps& maps) {
  Json out{{"slot_count", maps.slot_count}, {"n", maps.n}};
  Json ks = Json::array();
  for (const BigInt& k : maps.k_at_n) ks.push_back(k.str());
  out["k_at_n"] = ks;
  for (int side : {0, 1}) {
    Json intervals = Json::array();
    for (const auto& [lo, hi] : maps.U[side]) intervals.push_back(Json::array({lo, hi}));
    out["U" + std::to_string(side)] = intervals;
    out["pi" + std::to_string(side)] = maps.pi[side];
  }
  return out;
}

SplitMaps split_from_json(const Json& j, const std::string& where) {
  SplitMaps maps;
  maps.slot_count = as<int>(field(j, "slot_count", where), at(where, "slot_count"));
  maps.n = ints_of(field(j, "n", where), at(where, "n"));
  const Json& ks = field(j, "k_at_n", where);
  if (!ks.is_array()) bad(at(where, "k_at_n"), "expected an array");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    Rational k = rational_of(ks[i], at(at(where, "k_at_n"), i));
    if (denominator(k) != 1) bad(at(at(where, "k_at_n"), i), "expected an integer");
    maps.k_at_n.push_back(numerator(k));
  }
  for (int side : {0, 1}) {
    std::string u = "U" + std::to_string(side), pi = "pi" + std::to_string(side);
    const Json& intervals = field(j, u.c_str(), where);
    if (!intervals.is_array()) bad(at(where, u), "expected an array of [lo, hi) pairs");
    for (std::size_t n = 0; n < intervals.size(); ++n) {
      std::vector<int> bounds = ints_of(intervals[n], at(at(where, u), n));
      if (bounds.size() != 2 || bounds[0] >= bounds[1]) bad(at(at(where, u), n), "expected [lo, hi) with lo < hi");
      maps.U[side].emplace_back(bounds[0], bounds[1]);
    }
    maps.pi[side] = ints_of(field(j, pi.c_str(), where), at(where, pi));
  }
  located(where, [&] {
    maps.validate();
    return 0;
  });
  return maps;
}

Json symbolic_creature_to_json(const SymbolicCreature& t) {
  return Json{{"m", t.m},
              {"lambda", t.lambda.to_string()},
              {"i", to_string(t.i_star)},
              {"k", t.k},
              {"nor", to_string(t.nor(), 12)}};
}

}  // namespace creature
