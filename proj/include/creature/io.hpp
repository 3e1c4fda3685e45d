#pragma once

#include <string>

#include "json.hpp"

#include "creature/collapse.hpp"
#include "creature/core.hpp"
#include "creature/errors.hpp"
#include "creature/halving_split.hpp"

namespace creature {

using Json = nlohmann::ordered_json;

/// Malformed instance data; what() carries the JSON location.
class InputError : public Error {
 public:
  using Error::Error;
};

Json load_json_file(const std::string& path);

Json pair_to_json(const CreatingPair& pair);
PairPtr pair_from_json(const Json& j, const std::string& where = "");

Json creature_to_json(const Creature& t);
Creature creature_from_json(const Json& j, const CreatingPair& pair, const std::string& where = "");

Json condition_to_json(const Condition& p);
Condition condition_from_json(const Json& j, const std::string& where = "");

Json witness_to_json(const BadnessWitness& witness);
BadnessWitness witness_from_json(const Json& j, const std::string& where = "");

Json split_to_json(const SplitMaps& maps);
SplitMaps split_from_json(const Json& j, const std::string& where = "");
Json symbolic_creature_to_json(const SymbolicCreature& t);

}  // namespace creature
