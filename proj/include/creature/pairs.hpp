#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "creature/core.hpp"

namespace creature {

/// Norm rule g of the subset pair: nor[t] = g(|pos(t)|).
enum class GrowthRule { Identity, Log2 };

std::string to_string(GrowthRule rule);
GrowthRule parse_growth_rule(const std::string& text);

/// Local pair whose creatures are nonempty subsets A of H(m) with nor = g(|A|);
/// Sigma(t) is every nonempty subset of A.
class SubsetPair final : public CreatingPair {
 public:
  SubsetPair(SlotSpace slots, GrowthRule rule);

  const SlotSpace& slots() const noexcept { return slots_; }
  GrowthRule rule() const noexcept { return rule_; }
  double growth(std::size_t cardinality) const;
  Creature make(int m, ValueSet values) const;

  PairKind kind() const override { return PairKind::Subset; }
  std::string describe() const override;
  bool is_local() const override { return true; }
  int slot_count() const override { return slots_.count(); }
  std::optional<int> slot_size(int m) const override;
  bool member(const Creature& t) const override;
  bool refines(const Creature& s, const Creature& t) const override;
  double norm(const Creature& t) const override;
  std::vector<Creature> creatures_at(int m_dn, std::size_t budget) const override;
  std::vector<Creature> sigma(const Creature& t, std::size_t budget) const override;
  Creature full_creature(int m_dn) const override;
  std::optional<Creature> shrink_to(const Creature& t, const ProductPos& pos) const override;
  std::shared_ptr<const CreatingPair> reindexed(std::span<const int> slot_map) const override;
  Creature relocated(const Creature& t, int target) const override;

 private:
  SlotSpace slots_;
  GrowthRule rule_;
};

/// Block pair over H(j) = i + 2 for m_i <= j < m_{i+1}: a creature at level i
/// is a product of nonempty Z_j subset H(j), nor = min |Z_j|, and Sigma shrinks
/// every Z_j.
class BlockPair final : public CreatingPair {
 public:
  explicit BlockPair(std::vector<int> blocks);

  const std::vector<int>& blocks() const noexcept { return blocks_; }
  int levels() const noexcept { return static_cast<int>(blocks_.size()) - 1; }
  int level_of_start(int m_dn) const;
  int level_of_slot(int m) const;
  Creature make(int level, std::vector<ValueSet> sets) const;

  PairKind kind() const override { return PairKind::Block; }
  std::string describe() const override;
  bool is_local() const override { return false; }
  int slot_count() const override { return blocks_.back(); }
  std::optional<int> slot_size(int m) const override;
  std::vector<int> creature_starts() const override;
  bool member(const Creature& t) const override;
  bool refines(const Creature& s, const Creature& t) const override;
  double norm(const Creature& t) const override;
  std::vector<Creature> creatures_at(int m_dn, std::size_t budget) const override;
  std::vector<Creature> sigma(const Creature& t, std::size_t budget) const override;
  Creature full_creature(int m_dn) const override;
  std::optional<Creature> shrink_to(const Creature& t, const ProductPos& pos) const override;

 private:
  std::vector<int> blocks_;
};

/// Per-slot data of the symbolic pairs: lambda of l_n = |H(n)| and the divisor k_n.
struct SymbolicSlots {
  std::vector<LogLogCard> cards;
  std::vector<int> divisors;

  int count() const noexcept { return static_cast<int>(cards.size()); }
  /// Divisors from the k_n formula.
  static SymbolicSlots with_formula(std::vector<LogLogCard> cards, const Rational& threshold = Rational(16));
};

/// Local pair whose creatures carry only lambda(|A|) and the drop index i:
/// nor = f_{k_m}(|A|, i), 0 <= i <= lambda(l_m), Sigma: lambda shrinks, i grows.
/// Possibility sets are never materialized.
class SymbolicPair final : public CreatingPair {
 public:
  explicit SymbolicPair(SymbolicSlots slots);

  const SymbolicSlots& slots() const noexcept { return slots_; }
  Creature make(int m, const LogLogCard& card, const Rational& drop) const;

  PairKind kind() const override { return PairKind::Symbolic; }
  std::string describe() const override;
  bool is_local() const override { return true; }
  int slot_count() const override { return slots_.count(); }
  std::optional<int> slot_size(int) const override { return std::nullopt; }
  bool member(const Creature& t) const override;
  bool refines(const Creature& s, const Creature& t) const override;
  double norm(const Creature& t) const override;
  std::vector<Creature> creatures_at(int m_dn, std::size_t budget) const override;
  std::vector<Creature> sigma(const Creature& t, std::size_t budget) const override;
  Creature full_creature(int m_dn) const override;
  std::shared_ptr<const CreatingPair> reindexed(std::span<const int> slot_map) const override;
  Creature relocated(const Creature& t, int target) const override;

 private:
  SymbolicSlots slots_;
};

/// Norm of a symbolic creature recomputed exactly.
Real symbolic_norm(const Creature& t);

}  // namespace creature
