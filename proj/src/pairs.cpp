#include "creature/pairs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "creature/errors.hpp"

namespace creature {

namespace {

std::vector<ValueSet> nonempty_subsets(const ValueSet& base, std::size_t budget) {
  if (base.size() >= 63 || (std::size_t{1} << base.size()) - 1 > budget)
    throw BudgetExceeded("subsets of a " + std::to_string(base.size()) + "-element set", std::pow(2.0, base.size()));
  std::vector<ValueSet> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << base.size()); ++mask) {
    ValueSet subset;
    for (std::size_t e = 0; e < base.size(); ++e) {
      if (mask >> e & 1U) subset.push_back(base[e]);
    }
    out.push_back(std::move(subset));
  }
  return out;
}

ValueSet range_set(int size) {
  ValueSet all(static_cast<std::size_t>(size));
  for (int v = 0; v < size; ++v) all[static_cast<std::size_t>(v)] = v;
  return all;
}

// Cartesian product of per-coordinate choices, refusing beyond the budget.
std::vector<std::vector<ValueSet>> product_of(const std::vector<std::vector<ValueSet>>& choices, std::size_t budget) {
  double estimate = 1.0;
  for (const auto& c : choices) estimate *= static_cast<double>(c.size());
  if (estimate > static_cast<double>(budget)) throw BudgetExceeded("block creature enumeration", estimate);
  std::vector<std::vector<ValueSet>> out;
  std::vector<std::size_t> odometer(choices.size(), 0);
  while (true) {
    std::vector<ValueSet> pick;
    pick.reserve(choices.size());
    for (std::size_t j = 0; j < choices.size(); ++j) pick.push_back(choices[j][odometer[j]]);
    out.push_back(std::move(pick));
    std::size_t j = choices.size();
    while (true) {
      if (j == 0) return out;
      --j;
      if (++odometer[j] < choices[j].size()) break;
      odometer[j] = 0;
    }
  }
}

bool valid_set(const ValueSet& set, int bound) {
  if (set.empty()) return false;
  if (!std::is_sorted(set.begin(), set.end()) || std::adjacent_find(set.begin(), set.end()) != set.end()) return false;
  return set.front() >= 0 && set.back() < bound;
}

}  // namespace

std::string to_string(GrowthRule rule) { return rule == GrowthRule::Identity ? "identity" : "log2"; }

GrowthRule parse_growth_rule(const std::string& text) {
  if (text == "identity") return GrowthRule::Identity;
  if (text == "log2") return GrowthRule::Log2;
  throw PreconditionError("unknown growth rule '" + text + "' (expected identity or log2)");
}

// ---------------------------------------------------------------- subset pair

SubsetPair::SubsetPair(SlotSpace slots, GrowthRule rule) : slots_(std::move(slots)), rule_(rule) {}

double SubsetPair::growth(std::size_t cardinality) const {
  return rule_ == GrowthRule::Identity ? static_cast<double>(cardinality) : std::log2(static_cast<double>(cardinality));
}

Creature SubsetPair::make(int m, ValueSet values) const {
  Creature t = Creature::local(m, std::move(values), 0.0);
  t.nor = growth(t.product().coords[0].size());
  if (!member(t)) throw PreconditionError("not a creature of " + describe() + ": " + creature::describe(t));
  return t;
}

std::string SubsetPair::describe() const {
  std::ostringstream os;
  os << "subset(g=" << to_string(rule_) << ";H=";
  for (int m = 0; m < slots_.count(); ++m) os << (m ? "," : "") << slots_.size(m);
  os << ")";
  return os.str();
}

std::optional<int> SubsetPair::slot_size(int m) const { return slots_.size(m); }

bool SubsetPair::member(const Creature& t) const {
  if (t.m_dn < 0 || t.m_dn >= slots_.count() || t.m_up != t.m_dn + 1) return false;
  if (t.is_symbolic() || !std::holds_alternative<std::monostate>(t.dis)) return false;
  const ProductPos& pos = t.product();
  if (pos.coords.size() != 1 || !valid_set(pos.coords[0], slots_.size(t.m_dn))) return false;
  return t.nor == growth(pos.coords[0].size());
}

bool SubsetPair::refines(const Creature& s, const Creature& t) const {
  return member(s) && member(t) && s.m_dn == t.m_dn && s.product().subset_of(t.product());
}

double SubsetPair::norm(const Creature& t) const { return growth(t.product().coords.at(0).size()); }

std::vector<Creature> SubsetPair::creatures_at(int m_dn, std::size_t budget) const {
  std::vector<Creature> out;
  for (ValueSet& set : nonempty_subsets(range_set(slots_.size(m_dn)), budget)) out.push_back(make(m_dn, std::move(set)));
  return out;
}

std::vector<Creature> SubsetPair::sigma(const Creature& t, std::size_t budget) const {
  std::vector<Creature> out;
  for (ValueSet& set : nonempty_subsets(t.product().coords.at(0), budget)) out.push_back(make(t.m_dn, std::move(set)));
  return out;
}

Creature SubsetPair::full_creature(int m_dn) const { return make(m_dn, range_set(slots_.size(m_dn))); }

std::optional<Creature> SubsetPair::shrink_to(const Creature& t, const ProductPos& pos) const {
  if (pos.coords.size() != 1 || !pos.subset_of(t.product()) || pos.coords[0].empty()) return std::nullopt;
  return make(t.m_dn, pos.coords[0]);
}

std::shared_ptr<const CreatingPair> SubsetPair::reindexed(std::span<const int> slot_map) const {
  std::vector<int> sizes;
  for (int m : slot_map) sizes.push_back(slots_.size(m));
  return std::make_shared<SubsetPair>(SlotSpace(std::move(sizes)), rule_);
}

Creature SubsetPair::relocated(const Creature& t, int target) const {
  Creature moved = t;
  moved.m_dn = target;
  moved.m_up = target + 1;
  return moved;
}

// ----------------------------------------------------------------- block pair

BlockPair::BlockPair(std::vector<int> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.size() < 2 || blocks_.front() != 0)
    throw PreconditionError("block boundaries must start at 0 and contain at least one block");
  for (std::size_t i = 1; i < blocks_.size(); ++i) {
    if (blocks_[i] <= blocks_[i - 1]) throw PreconditionError("block boundaries must be strictly increasing");
  }
}

int BlockPair::level_of_start(int m_dn) const {
  auto it = std::find(blocks_.begin(), blocks_.end() - 1, m_dn);
  if (it == blocks_.end() - 1) throw PreconditionError("slot " + std::to_string(m_dn) + " is not a block start");
  return static_cast<int>(it - blocks_.begin());
}

int BlockPair::level_of_slot(int m) const {
  if (m < 0 || m >= slot_count()) throw PreconditionError("slot " + std::to_string(m) + " outside the block range");
  return static_cast<int>(std::upper_bound(blocks_.begin(), blocks_.end(), m) - blocks_.begin()) - 1;
}

Creature BlockPair::make(int level, std::vector<ValueSet> sets) const {
  if (level < 0 || level >= levels()) throw PreconditionError("level " + std::to_string(level) + " out of range");
  Creature t;
  t.m_dn = blocks_[static_cast<std::size_t>(level)];
  t.m_up = blocks_[static_cast<std::size_t>(level) + 1];
  t.pos = ProductPos{std::move(sets)};
  t.dis = BlockInfo{level};
  t.nor = norm(t);
  if (!member(t)) throw PreconditionError("not a creature of " + describe() + ": " + creature::describe(t));
  return t;
}

std::string BlockPair::describe() const {
  std::ostringstream os;
  os << "block(m=";
  for (std::size_t i = 0; i < blocks_.size(); ++i) os << (i ? "," : "") << blocks_[i];
  os << ")";
  return os.str();
}

std::optional<int> BlockPair::slot_size(int m) const { return level_of_slot(m) + 2; }

std::vector<int> BlockPair::creature_starts() const { return {blocks_.begin(), blocks_.end() - 1}; }

bool BlockPair::member(const Creature& t) const {
  const auto* info = std::get_if<BlockInfo>(&t.dis);
  if (!info || t.is_symbolic() || info->level < 0 || info->level >= levels()) return false;
  auto level = static_cast<std::size_t>(info->level);
  if (t.m_dn != blocks_[level] || t.m_up != blocks_[level + 1]) return false;
  const ProductPos& pos = t.product();
  if (pos.coords.size() != static_cast<std::size_t>(t.width())) return false;
  for (const ValueSet& set : pos.coords) {
    if (!valid_set(set, info->level + 2)) return false;
  }
  return t.nor == norm(t);
}

bool BlockPair::refines(const Creature& s, const Creature& t) const {
  return member(s) && member(t) && s.m_dn == t.m_dn && s.product().subset_of(t.product());
}

double BlockPair::norm(const Creature& t) const {
  std::size_t smallest = std::numeric_limits<std::size_t>::max();
  for (const ValueSet& set : t.product().coords) smallest = std::min(smallest, set.size());
  return static_cast<double>(smallest);
}

std::vector<Creature> BlockPair::creatures_at(int m_dn, std::size_t budget) const {
  int level = level_of_start(m_dn);
  std::vector<ValueSet> per_slot = nonempty_subsets(range_set(level + 2), budget);
  std::vector<std::vector<ValueSet>> choices(static_cast<std::size_t>(blocks_[level + 1] - m_dn), per_slot);
  std::vector<Creature> out;
  for (auto& sets : product_of(choices, budget)) out.push_back(make(level, std::move(sets)));
  return out;
}

std::vector<Creature> BlockPair::sigma(const Creature& t, std::size_t budget) const {
  int level = std::get<BlockInfo>(t.dis).level;
  std::vector<std::vector<ValueSet>> choices;
  for (const ValueSet& set : t.product().coords) choices.push_back(nonempty_subsets(set, budget));
  std::vector<Creature> out;
  for (auto& sets : product_of(choices, budget)) out.push_back(make(level, std::move(sets)));
  return out;
}

Creature BlockPair::full_creature(int m_dn) const {
  int level = level_of_start(m_dn);
  std::vector<ValueSet> sets(static_cast<std::size_t>(blocks_[level + 1] - m_dn), range_set(level + 2));
  return make(level, std::move(sets));
}

std::optional<Creature> BlockPair::shrink_to(const Creature& t, const ProductPos& pos) const {
  if (!pos.subset_of(t.product())) return std::nullopt;
  for (const ValueSet& set : pos.coords) {
    if (set.empty()) return std::nullopt;
  }
  return make(std::get<BlockInfo>(t.dis).level, pos.coords);
}

// -------------------------------------------------------------- symbolic pair

SymbolicSlots SymbolicSlots::with_formula(std::vector<LogLogCard> cards, const Rational& threshold) {
  SymbolicSlots slots;
  for (const LogLogCard& card : cards) slots.divisors.push_back(k_n(card, threshold));
  slots.cards = std::move(cards);
  return slots;
}

SymbolicPair::SymbolicPair(SymbolicSlots slots) : slots_(std::move(slots)) {
  if (slots_.cards.size() != slots_.divisors.size())
    throw PreconditionError("symbolic slots need one divisor per cardinality");
  for (int k : slots_.divisors) {
    if (k < 1) throw PreconditionError("slot divisors must be >= 1");
  }
}

Real symbolic_norm(const Creature& t) {
  const auto& info = std::get<SymbolicInfo>(t.dis);
  return f_k(t.card(), NormParams{info.k, info.drop});
}

Creature SymbolicPair::make(int m, const LogLogCard& card, const Rational& drop) const {
  if (m < 0 || m >= slot_count()) throw PreconditionError("slot " + std::to_string(m) + " outside the symbolic range");
  Creature t{m, m + 1, 0.0, card, SymbolicInfo{drop, slots_.divisors[static_cast<std::size_t>(m)]}};
  t.nor = norm(t);
  if (!member(t)) throw PreconditionError("not a creature of " + describe() + ": " + creature::describe(t));
  return t;
}

std::string SymbolicPair::describe() const {
  std::ostringstream os;
  os << "symbolic(";
  for (int m = 0; m < slot_count(); ++m) {
    os << (m ? "," : "") << slots_.cards[static_cast<std::size_t>(m)].to_string() << ":"
       << slots_.divisors[static_cast<std::size_t>(m)];
  }
  os << ")";
  return os.str();
}

bool SymbolicPair::member(const Creature& t) const {
  const auto* info = std::get_if<SymbolicInfo>(&t.dis);
  if (!info || !t.is_symbolic() || t.m_dn < 0 || t.m_dn >= slot_count() || t.m_up != t.m_dn + 1) return false;
  auto m = static_cast<std::size_t>(t.m_dn);
  if (info->k != slots_.divisors[m] || !(t.card() <= slots_.cards[m])) return false;
  if (info->drop < 0 || slots_.cards[m] < LogLogCard::exact(info->drop)) return false;
  return t.nor == norm(t);
}

bool SymbolicPair::refines(const Creature& s, const Creature& t) const {
  if (!member(s) || !member(t) || s.m_dn != t.m_dn) return false;
  return s.card() <= t.card() && std::get<SymbolicInfo>(s.dis).drop >= std::get<SymbolicInfo>(t.dis).drop;
}

double SymbolicPair::norm(const Creature& t) const { return symbolic_norm(t).convert_to<double>(); }

std::vector<Creature> SymbolicPair::creatures_at(int m_dn, std::size_t) const {
  throw NotEnumerable("symbolic creatures at slot " + std::to_string(m_dn) + " cannot be enumerated");
}

std::vector<Creature> SymbolicPair::sigma(const Creature& t, std::size_t) const {
  throw NotEnumerable("Sigma of a symbolic creature at slot " + std::to_string(t.m_dn) + " cannot be enumerated");
}

Creature SymbolicPair::full_creature(int m_dn) const {
  if (m_dn < 0 || m_dn >= slot_count()) throw PreconditionError("slot " + std::to_string(m_dn) + " outside the symbolic range");
  return make(m_dn, slots_.cards[static_cast<std::size_t>(m_dn)], Rational(0));
}

std::shared_ptr<const CreatingPair> SymbolicPair::reindexed(std::span<const int> slot_map) const {
  SymbolicSlots mapped;
  for (int m : slot_map) {
    if (m < 0 || m >= slot_count()) throw PreconditionError("slot map leaves the symbolic range");
    mapped.cards.push_back(slots_.cards[static_cast<std::size_t>(m)]);
    mapped.divisors.push_back(slots_.divisors[static_cast<std::size_t>(m)]);
  }
  return std::make_shared<SymbolicPair>(std::move(mapped));
}

Creature SymbolicPair::relocated(const Creature& t, int target) const {
  Creature moved = t;
  moved.m_dn = target;
  moved.m_up = target + 1;
  return moved;
}

}  // namespace creature
