#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "creature/coloring.hpp"
#include "creature/core.hpp"
#include "creature/pairs.hpp"

namespace creature {

/// Parameters of one level i: A_i = functions M_i -> 2, colors B_i = A_{i+1} x 2
/// (so N_i = 2 |A_{i+1}|), and arity d_i = m_{i+1} - m_i.
struct LevelParams {
  int M = 2;
  int N = 16;
  int d = 57;

  int label_count() const { return 1 << M; }
  ColoringParams coloring() const { return {N, M, d}; }
};

/// Block boundaries, label sets and transition functions F_i witnessing that
/// the block pair is sufficiently h-bad with h(x) = floor(x/2).
///
/// F_i(a, v) = (b >> 1, b & 1) where b = sum_{j < d_i} a(v(m_i + j)) mod N_i.
class BadnessWitness {
 public:
  BadnessWitness(std::vector<int> blocks, std::vector<LevelParams> levels, int growth_base, double norm_gate);

  const std::vector<int>& blocks() const noexcept { return blocks_; }
  const std::vector<LevelParams>& levels() const noexcept { return levels_; }
  const LevelParams& level(int i) const;
  int level_count() const noexcept { return static_cast<int>(levels_.size()); }
  int growth_base() const noexcept { return growth_base_; }
  /// Creatures need nor > norm_gate for the level clause to apply.
  double norm_gate() const noexcept { return norm_gate_; }
  /// |A_i| for i <= level_count().
  int label_count(int i) const;

  /// F_i(a, v); v must cover slots [0, m_{i+1}).
  std::pair<int, int> transition(int i, int a, std::span<const int> v) const;

  /// The block pair the witness is built for.
  std::shared_ptr<const BlockPair> pair() const;

  /// Checks block alignment, label ranges and the per-level coloring hypothesis.
  void validate() const;

 private:
  std::vector<int> blocks_;
  std::vector<LevelParams> levels_;
  int growth_base_;
  double norm_gate_;
};

/// h(x) = floor(x/2), extended to reals.
double badness_h(double x);

/// Builds `levels` levels with M_i = i + 2 and d_i the least value exceeding both
/// growth_base^(i+3) and the coloring hypothesis bound (N_i - 2) 2^(M_i).
BadnessWitness build_badness(int levels, int growth_base, double norm_gate = 4.0);

/// Label a and, for every target x = 2 a' + bit in A_{i+1} x 2, a refinement s_x of t.
struct DeltaResult {
  int a = 0;
  std::vector<Creature> refinements;
  double norm_floor = 0.0;  // min{h(nor[t]), h(i)}
};

/// Produces the level clause witness for t at level i: cells are the least
/// nor[t] elements of each Z_j, the label comes from the coloring construction
/// and every s_x keeps the subcells for color x.
DeltaResult verify_delta(const BadnessWitness& witness, const CreatingPair& pair, int level, const Creature& t);

/// Independent check of a level clause witness: each s_x refines t, meets the
/// norm floor, and F_i(a, .) is constant x on pos(u, s_x), established
/// coordinate-wise without enumerating the product.
std::optional<std::string> check_delta(const BadnessWitness& witness, const CreatingPair& pair, int level,
                                       const Creature& t, const DeltaResult& result);

struct NameSeed {
  int level = 0;
  int a = 0;
  friend bool operator==(const NameSeed&, const NameSeed&) = default;
};

struct EncodeResult {
  Condition q;
  NameSeed seed;
  std::vector<int> chain;             // b_0 .. b_L, b_0 = seed.a
  std::vector<double> norm_floors;    // min{h(nor[t_j^p]), h(i + j)} per encoded creature
};

/// Codes r into a stronger condition: by downward induction over the first
/// lh(r) creatures, replaces each with a level clause refinement so that every
/// branch through q reproduces r via the name recursion from the returned seed.
EncodeResult encode_real(const BadnessWitness& witness, const Condition& p, std::span<const int> bits);

struct Decoded {
  int start_level = 0;
  std::vector<int> eta;  // eta(i) .. eta(i + horizon)
  std::vector<int> rho;  // rho(i) .. rho(i + horizon - 1)
};

/// The name recursions eta(j) = F^0_{j-1}(eta(j-1), W|m_j) and rho(j) = F^1_j(eta(j), W|m_{j+1}).
Decoded eta_rho_decode(const BadnessWitness& witness, std::span<const int> branch, const NameSeed& seed, int horizon);

/// A uniformly random branch through the first `count` creatures of q.
std::vector<int> sample_branch(const Condition& q, std::size_t count, std::mt19937_64& rng);

/// The condition with empty stem and full creatures on every level of the witness.
Condition minimal_condition(const BadnessWitness& witness);

}  // namespace creature
