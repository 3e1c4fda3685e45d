#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "creature/core.hpp"
#include "creature/norm_calculus.hpp"
#include "creature/pairs.hpp"

namespace creature {

/// A creature of the symbolic pair seen through its payload: slot, lambda(|A|),
/// drop index and the slot divisor.
struct SymbolicCreature {
  int m = 0;
  LogLogCard lambda;
  Rational i_star = 0;
  int k = 1;

  Real nor() const { return f_k(lambda, NormParams{k, i_star}); }
  void validate() const;

  Creature to_creature() const;
  static SymbolicCreature from_creature(const Creature& t);
  friend bool operator==(const SymbolicCreature&, const SymbolicCreature&) = default;
};

/// How half() places the new drop index. FloorMinusOne is a deliberately wrong
/// variant kept for fault injection.
enum class HalfRule { Ceil, FloorMinusOne };

/// True when nor(t) >= 2, decided exactly (lambda - i* >= 4^k).
bool norm_at_least_two(const SymbolicCreature& t);

/// The epsilon-half t* = (m, lambda, ceil((lambda + i*)/2)).
SymbolicCreature half(const SymbolicCreature& t, const Rational& epsilon, HalfRule rule = HalfRule::Ceil);

/// t0 = (m, lambda^s, i*^t) for a refinement s of half(t, epsilon) with nor(s) > 1.
SymbolicCreature unhalve(const SymbolicCreature& s, const SymbolicCreature& t, const Rational& epsilon,
                         HalfRule rule = HalfRule::Ceil);

struct HalvingOptions {
  HalfRule rule = HalfRule::Ceil;
  /// Level boundaries and their epsilons; empty means epsilon = 2/k per creature.
  std::vector<int> m_bar;
  std::vector<Rational> eps_bar;
};

struct HalvingReport {
  std::size_t samples = 0;
  std::size_t checked = 0;
  std::size_t boundary = 0;  // samples with nor exactly 2
  std::size_t skipped = 0;
  std::map<std::string, std::size_t> skip_reasons;
  std::size_t clause_i_failures = 0;
  std::size_t refinements = 0;
  std::size_t clause_ii_failures = 0;
  std::size_t midpoint_checked = 0;
  std::size_t midpoint_failures = 0;   // f_k(x, j) = f_k(x, i) - 1/k
  std::size_t placement_failures = 0;  // i* < j <= new drop < j + 1, new drop < lambda
  std::optional<std::string> first_failure;

  bool contract_holds() const { return clause_i_failures == 0 && clause_ii_failures == 0; }
  bool midpoint_holds() const { return midpoint_failures == 0 && placement_failures == 0; }
};

HalvingReport check_halving_property(const std::vector<SymbolicCreature>& samples, const HalvingOptions& options = {});

/// Random creatures with lambda in [lambda_lo, lambda_hi] and k in [1, 16]; a sizeable
/// share of the admissible ones sit on the nor = 2 boundary, and a few have
/// nor < 2 to exercise the precondition gate.
std::vector<SymbolicCreature> halving_sweep_samples(std::size_t count, std::uint64_t seed, int lambda_lo = 18,
                                                    int lambda_hi = 1024);

// ------------------------------------------------------------------ split

struct SplitMaps {
  int slot_count = 0;
  std::vector<int> n;                           // n_0 = 0 < n_1 < ...
  std::vector<std::pair<int, int>> U[2];        // half-open intervals
  std::vector<int> pi[2];                       // increasing enumerations of U^0, U^1
  std::vector<BigInt> k_at_n;                   // k_{n_i} for the n_i inside the slot range

  int side_of(int m) const;
  /// Position of slot m inside pi[side_of(m)].
  int index_of(int m) const;
  /// |U^side ∩ [0, end)|.
  int count_below(int side, int end) const;
  SlotSpace side_space(const SlotSpace& H, int side) const;
  void validate() const;
};

using DivisorFn = std::function<BigInt(int)>;

/// n_{i+1} is the least n > n_i with k(n) >= 2 * |prod_{j < n_i} H(j)|. Builds
/// `levels` such steps and throws PreconditionError when the range runs out.
SplitMaps build_split(const SlotSpace& H, const DivisorFn& k_fn, int levels);

struct LevelSequence {
  std::vector<int> m_bar;
  std::vector<Rational> eps_bar;
};

/// m^l_i with pi^l(m^l_i) = n_{2i+l} and eps^l_i = 2/k_{n_{2i+l}}, for the levels in range.
LevelSequence side_levels(const SplitMaps& maps, int side);

std::pair<Condition, Condition> split_condition(const Condition& p, const SplitMaps& maps);
Condition merge_condition(const Condition& p0, const Condition& p1, const SplitMaps& maps, const PairPtr& base);

struct HypothesisReport {
  std::size_t levels = 0;
  bool holds = true;
  std::optional<int> failing_level;
  BigInt product = 1;  // at the failing level
  Rational bound = 0;  // 1/eps at the failing level
};

/// |prod_{n < m_i} H(n)| <= 1/eps_i for every i, in exact arithmetic.
HypothesisReport check_product_hypothesis(const SlotSpace& H, const std::vector<int>& m_bar,
                                              const std::vector<Rational>& eps_bar);

}  // namespace creature
