#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "creature/norm_calculus.hpp"
#include "creature/numeric.hpp"

namespace creature {

/// Finite prefix of H: sizes[m] = |H(m)|, elements of H(m) are 0..sizes[m]-1.
class SlotSpace {
 public:
  SlotSpace() = default;
  explicit SlotSpace(std::vector<int> sizes);

  int count() const noexcept { return static_cast<int>(sizes_.size()); }
  int size(int m) const;
  const std::vector<int>& sizes() const noexcept { return sizes_; }
  /// |prod_{n < end} H(n)|.
  BigInt prefix_product(int end) const;

  friend bool operator==(const SlotSpace&, const SlotSpace&) = default;

 private:
  std::vector<int> sizes_;
};

/// Sorted, duplicate-free set of slot values.
using ValueSet = std::vector<int>;

/// Possibilities of a forgetful creature whose pos is a product of per-slot
/// sets: coords[j] constrains slot m_dn + j.
struct ProductPos {
  std::vector<ValueSet> coords;

  BigInt cardinality() const;
  bool contains(std::span<const int> values) const;
  bool subset_of(const ProductPos& other) const;
  friend bool operator==(const ProductPos&, const ProductPos&) = default;
};

using Pos = std::variant<ProductPos, LogLogCard>;

struct Creature;

/// dis payload of a creature of the block pair: the level it occupies.
struct BlockInfo {
  int level = 0;
  friend bool operator==(const BlockInfo&, const BlockInfo&) = default;
};

/// dis payload of a symbolic creature: drop index and the slot's divisor.
struct SymbolicInfo {
  Rational drop;
  int k = 1;
  friend bool operator==(const SymbolicInfo&, const SymbolicInfo&) = default;
};

/// dis payload of a sum: the summands.
struct SumInfo {
  std::vector<Creature> parts;
};

using Payload = std::variant<std::monostate, BlockInfo, SymbolicInfo, SumInfo>;

struct Creature {
  int m_dn = 0;
  int m_up = 1;
  double nor = 0.0;
  Pos pos;
  Payload dis;

  bool is_symbolic() const noexcept { return std::holds_alternative<LogLogCard>(pos); }
  /// Throws NotEnumerable for symbolic creatures.
  const ProductPos& product() const;
  const LogLogCard& card() const;
  int width() const noexcept { return m_up - m_dn; }

  /// Local creature with explicit pos set at slot m.
  static Creature local(int m, ValueSet values, double nor);
};

bool operator==(const Creature& a, const Creature& b);
bool operator==(const SumInfo& a, const SumInfo& b);

enum class PairKind { Subset, Block, Symbolic, Summarized, Other };

/// A good creating pair (K, Sigma) restricted to the represented slot range.
///
/// Sigma is offered both as a decision procedure (refines) and, for strongly
/// finitary pairs, as an enumerator that refuses to exceed a budget.
class CreatingPair {
 public:
  virtual ~CreatingPair() = default;

  virtual PairKind kind() const = 0;
  /// Canonical description; two pairs are the same iff descriptions match.
  virtual std::string describe() const = 0;
  virtual bool is_local() const = 0;
  /// Slots [0, slot_count()) are represented.
  virtual int slot_count() const = 0;
  /// |H(m)| when explicit, nullopt for symbolic slots.
  virtual std::optional<int> slot_size(int m) const = 0;
  /// Valid m_dn values of creatures.
  virtual std::vector<int> creature_starts() const;

  virtual bool member(const Creature& t) const = 0;
  /// s in Sigma(t).
  virtual bool refines(const Creature& s, const Creature& t) const = 0;
  virtual double norm(const Creature& t) const = 0;

  virtual std::vector<Creature> creatures_at(int m_dn, std::size_t budget) const = 0;
  virtual std::vector<Creature> sigma(const Creature& t, std::size_t budget) const = 0;
  /// Creature with every possibility and the weakest payload.
  virtual Creature full_creature(int m_dn) const = 0;

  /// The member of Sigma(t) whose pos is `pos`, if the pair has one.
  virtual std::optional<Creature> shrink_to(const Creature& t, const ProductPos& pos) const;

  /// For local pairs: the pair over H o slot_map (slot m of the result is slot_map[m] here).
  virtual std::shared_ptr<const CreatingPair> reindexed(std::span<const int> slot_map) const;

  /// Moves a creature of this (local) pair to slot `target` of reindexed(...).
  virtual Creature relocated(const Creature& t, int target) const;

  bool same_as(const CreatingPair& other) const { return describe() == other.describe(); }
};

using PairPtr = std::shared_ptr<const CreatingPair>;

/// Finite-horizon truncation: stem, explicit creatures, and beyond them the
/// full creature at every further position.
struct Condition {
  PairPtr pair;
  std::vector<int> stem;
  std::vector<Creature> creatures;

  int i() const noexcept { return static_cast<int>(stem.size()); }
  /// m_up of the last explicit creature (stem length when there are none).
  int horizon_end() const;
  /// n-th creature, falling back to the full tail past the explicit ones.
  Creature creature_at(std::size_t n) const;
  /// Throws PreconditionError on misalignment, out-of-range stem values or non-members.
  void validate() const;
};

bool operator==(const Condition& a, const Condition& b);

inline constexpr std::size_t kDefaultBudget = 1'000'000;

/// pos(w, t_0, ..., t_n): all extensions of w through the aligned creatures.
std::vector<std::vector<int>> pos_product(std::span<const int> w, std::span<const Creature> creatures,
                                          std::size_t budget = kDefaultBudget);
/// |pos(w, t_0, ..., t_n)| without enumerating.
BigInt pos_product_count(std::span<const Creature> creatures);
/// v in pos(w, t_0, ..., t_n).
bool pos_product_contains(std::span<const int> w, std::span<const Creature> creatures, std::span<const int> v);

/// The order of the forcing: p <= q (q is stronger).
bool leq(const Condition& p, const Condition& q);

struct LawResult {
  std::string law;
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::string counterexample;
};

struct GoodPairReport {
  std::vector<LawResult> laws;
  std::size_t creatures = 0;

  bool passed() const;
  const LawResult& law(const std::string& name) const;
};

struct GoodPairScope {
  /// m_dn values to enumerate; empty means all creature starts below max_slots.
  std::vector<int> starts;
  int max_slots = 3;
  std::size_t budget = kDefaultBudget;
};

/// Exhaustively checks fullness, norm consistency, reflexivity, pos-monotonicity,
/// transitivity and enumerator/decision agreement of Sigma.
GoodPairReport check_good_pair(const CreatingPair& pair, const GoodPairScope& scope = {});

std::string describe(const Creature& t);

}  // namespace creature
