#include "creature/collapse.hpp"

#include <algorithm>
#include <cmath>

#include "creature/errors.hpp"

namespace creature {

double badness_h(double x) { return std::floor(x / 2.0); }

BadnessWitness::BadnessWitness(std::vector<int> blocks, std::vector<LevelParams> levels, int growth_base,
                               double norm_gate)
    : blocks_(std::move(blocks)), levels_(std::move(levels)), growth_base_(growth_base), norm_gate_(norm_gate) {
  validate();
}

const LevelParams& BadnessWitness::level(int i) const {
  if (i < 0 || i >= level_count()) throw PreconditionError("level " + std::to_string(i) + " outside the witness");
  return levels_[static_cast<std::size_t>(i)];
}

int BadnessWitness::label_count(int i) const {
  if (i < 0 || i > level_count()) throw PreconditionError("no label set A_" + std::to_string(i));
  if (i < level_count()) return level(i).label_count();
  return levels_.back().N / 2;
}

void BadnessWitness::validate() const {
  if (levels_.empty()) throw PreconditionError("witness needs at least one level");
  if (blocks_.size() != levels_.size() + 1 || blocks_.front() != 0)
    throw PreconditionError("witness needs m_0 = 0 and one boundary per level");
  if (norm_gate_ < 1.0) throw PreconditionError("norm gate must be at least 1");
  for (int i = 0; i < level_count(); ++i) {
    const LevelParams& lp = level(i);
    auto u = static_cast<std::size_t>(i);
    if (lp.M != i + 2) throw PreconditionError("level " + std::to_string(i) + " must use M_i = i + 2");
    if (blocks_[u + 1] - blocks_[u] != lp.d) throw PreconditionError("d_i must equal m_{i+1} - m_i");
    if (i + 1 < level_count() && lp.N != 2 * level(i + 1).label_count())
      throw PreconditionError("N_i must equal 2 |A_{i+1}|");
    if (!lp.coloring().satisfies_hypothesis())
      throw PreconditionError("level " + std::to_string(i) + " violates the coloring hypothesis");
  }
}

std::pair<int, int> BadnessWitness::transition(int i, int a, std::span<const int> v) const {
  const LevelParams& lp = level(i);
  if (a < 0 || a >= lp.label_count()) throw PreconditionError("label outside A_" + std::to_string(i));
  auto start = static_cast<std::size_t>(blocks_[static_cast<std::size_t>(i)]);
  if (v.size() < start + static_cast<std::size_t>(lp.d)) throw PreconditionError("branch too short for level " + std::to_string(i));
  long long sum = 0;
  for (int j = 0; j < lp.d; ++j) {
    int value = v[start + static_cast<std::size_t>(j)];
    if (value < 0 || value >= lp.M) throw PreconditionError("branch value outside H(j)");
    sum += a >> value & 1;
  }
  int color = static_cast<int>(sum % lp.N);
  return {color >> 1, color & 1};
}

std::shared_ptr<const BlockPair> BadnessWitness::pair() const { return std::make_shared<BlockPair>(blocks_); }

BadnessWitness build_badness(int levels, int growth_base, double norm_gate) {
  if (levels < 1) throw PreconditionError("need at least one level");
  if (growth_base < 2) throw PreconditionError("growth base must be at least 2");
  if (levels > 12) throw PreconditionError("more than 12 levels exceeds the represented slot range");
  std::vector<int> blocks{0};
  std::vector<LevelParams> params;
  for (int i = 0; i < levels; ++i) {
    LevelParams lp;
    lp.M = i + 2;
    lp.N = 2 * (1 << (i + 3));
    std::int64_t growth = 1;
    for (int e = 0; e < i + 3; ++e) growth *= growth_base;
    std::int64_t d = std::max<std::int64_t>(growth + 1, ColoringParams::minimal_arity(lp.N, lp.M));
    if (d > (1 << 26)) throw PreconditionError("block length exceeds the represented slot range");
    lp.d = static_cast<int>(d);
    blocks.push_back(blocks.back() + lp.d);
    params.push_back(lp);
  }
  return BadnessWitness(std::move(blocks), std::move(params), growth_base, norm_gate);
}

DeltaResult verify_delta(const BadnessWitness& witness, const CreatingPair& pair, int level, const Creature& t) {
  const LevelParams& lp = witness.level(level);
  auto u = static_cast<std::size_t>(level);
  if (t.m_dn != witness.blocks()[u] || t.m_up != witness.blocks()[u + 1])
    throw PreconditionError("creature is not aligned with level " + std::to_string(level));
  if (!pair.member(t)) throw PreconditionError("creature is not in " + pair.describe());
  if (!(t.nor > witness.norm_gate()))
    throw PreconditionError("norm precondition violated: nor " + std::to_string(t.nor) + " <= " +
                            std::to_string(witness.norm_gate()));

  const ProductPos& pos = t.product();
  std::size_t ell = std::numeric_limits<std::size_t>::max();
  for (const ValueSet& z : pos.coords) {
    ell = std::min(ell, z.size());
    if (z.back() >= lp.M) throw PreconditionError("possibility outside M_i at level " + std::to_string(level));
  }
  if (ell < 2) throw PreconditionError("level clause needs every |Z_j| >= 2");

  CellFamily family{static_cast<int>(ell), {}};
  for (const ValueSet& z : pos.coords) family.cells.emplace_back(z.begin(), z.begin() + static_cast<long>(ell));
  ColoringWitness coloring = find_witness(lp.coloring(), family);

  DeltaResult result;
  result.a = static_cast<int>(coloring.a().bits);
  result.norm_floor = std::min(badness_h(t.nor), badness_h(level));
  for (int x = 0; x < lp.N; ++x) {
    ProductPos shrunk;
    shrunk.coords.reserve(pos.coords.size());
    for (int j = 0; j < lp.d; ++j) shrunk.coords.push_back(coloring.subcell(x, j));
    auto s = pair.shrink_to(t, shrunk);
    if (!s) throw Error(pair.describe() + " has no creature with the required possibilities");
    result.refinements.push_back(std::move(*s));
  }
  return result;
}

std::optional<std::string> check_delta(const BadnessWitness& witness, const CreatingPair& pair, int level,
                                       const Creature& t, const DeltaResult& result) {
  const LevelParams& lp = witness.level(level);
  if (result.a < 0 || result.a >= lp.label_count()) return "label outside A_i";
  if (result.refinements.size() != static_cast<std::size_t>(lp.N)) return "one refinement per target expected";
  const double floor = std::min(badness_h(t.nor), badness_h(level));
  for (int x = 0; x < lp.N; ++x) {
    const Creature& s = result.refinements[static_cast<std::size_t>(x)];
    std::string tag = "target " + std::to_string(x) + ": ";
    if (!pair.refines(s, t)) return tag + "not a refinement";
    if (s.nor < floor) return tag + "norm below min{h(nor[t]), h(i)}";
    const ProductPos& pos = s.product();
    if (pos.coords.size() != static_cast<std::size_t>(lp.d)) return tag + "wrong width";
    long long sum = 0;
    for (const ValueSet& z : pos.coords) {
      int value = result.a >> z.front() & 1;
      for (int e : z) {
        if ((result.a >> e & 1) != value) return tag + "label not constant on a coordinate";
      }
      sum += value;
    }
    if (sum % lp.N != x) return tag + "forced color differs";
  }
  return std::nullopt;
}

EncodeResult encode_real(const BadnessWitness& witness, const Condition& p, std::span<const int> bits) {
  p.validate();
  const auto& blocks = witness.blocks();
  auto found = std::find(blocks.begin(), blocks.end(), p.i());
  if (found == blocks.end()) throw PreconditionError("stem length is not a block boundary");
  const int start = static_cast<int>(found - blocks.begin());
  const auto length = bits.size();

  EncodeResult result{p, {start, 0}, std::vector<int>(length + 1, 0), std::vector<double>(length, 0.0)};
  if (length == 0) return result;
  if (p.creatures.size() < length) throw PreconditionError("horizon too short for the requested bits");
  if (start + static_cast<int>(length) > witness.level_count())
    throw PreconditionError("witness has too few levels for the requested bits");
  for (std::size_t j = 0; j < length; ++j) {
    if (bits[j] != 0 && bits[j] != 1) throw PreconditionError("bits must be 0 or 1");
    if (!(p.creatures[j].nor > witness.norm_gate()))
      throw PreconditionError("creature " + std::to_string(j) + " fails the norm precondition");
  }

  for (std::size_t j = length; j-- > 0;) {
    int level = start + static_cast<int>(j);
    DeltaResult delta = verify_delta(witness, *p.pair, level, p.creatures[j]);
    int target = 2 * result.chain[j + 1] + bits[j];
    result.q.creatures[j] = delta.refinements[static_cast<std::size_t>(target)];
    result.chain[j] = delta.a;
    result.norm_floors[j] = delta.norm_floor;
  }
  result.seed.a = result.chain[0];
  return result;
}

Decoded eta_rho_decode(const BadnessWitness& witness, std::span<const int> branch, const NameSeed& seed, int horizon) {
  if (horizon < 0) throw PreconditionError("horizon must be nonnegative");
  if (seed.level < 0 || seed.level + horizon > witness.level_count())
    throw PreconditionError("horizon runs past the witness levels");
  if (seed.a < 0 || seed.a >= witness.label_count(seed.level)) throw PreconditionError("seed label outside A_i");
  if (branch.size() < static_cast<std::size_t>(witness.blocks()[static_cast<std::size_t>(seed.level + horizon)]))
    throw PreconditionError("branch too short");
  Decoded out{seed.level, {seed.a}, {}};
  for (int j = 0; j < horizon; ++j) {
    auto [next, bit] = witness.transition(seed.level + j, out.eta.back(), branch);
    out.rho.push_back(bit);
    out.eta.push_back(next);
  }
  return out;
}

std::vector<int> sample_branch(const Condition& q, std::size_t count, std::mt19937_64& rng) {
  std::vector<int> v = q.stem;
  for (std::size_t n = 0; n < count; ++n) {
    Creature t = q.creature_at(n);
    for (const ValueSet& z : t.product().coords) {
      std::uniform_int_distribution<std::size_t> pick(0, z.size() - 1);
      v.push_back(z[pick(rng)]);
    }
  }
  return v;
}

Condition minimal_condition(const BadnessWitness& witness) {
  Condition c{witness.pair(), {}, {}};
  for (int i = 0; i < witness.level_count(); ++i)
    c.creatures.push_back(c.pair->full_creature(witness.blocks()[static_cast<std::size_t>(i)]));
  return c;
}

}  // namespace creature
