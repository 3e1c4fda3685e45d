#include "creature/halving_split.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "creature/errors.hpp"

namespace creature {

namespace {

Rational pow2(int e) { return Rational(mp::pow(BigInt(2), static_cast<unsigned>(e))); }

std::string show(const SymbolicCreature& t) {
  std::ostringstream os;
  os << "(m=" << t.m << ", lambda=" << t.lambda.to_string() << ", i=" << to_string(t.i_star) << ", k=" << t.k << ")";
  return os.str();
}

const Rational& exact_lambda(const SymbolicCreature& t, const char* what) {
  if (!t.lambda.is_exact()) throw PreconditionError(std::string(what) + " needs an exact lambda");
  return *t.lambda.exact_value();
}

// lambda - i compared against a rational bound; exact whenever lambda is.
int compare_gap(const SymbolicCreature& t, const Rational& bound) {
  if (t.lambda.is_exact()) {
    Rational gap = *t.lambda.exact_value() - t.i_star;
    return gap < bound ? -1 : (gap > bound ? 1 : 0);
  }
  Real gap = t.lambda.value() - to_real(t.i_star);
  Real b = to_real(bound);
  return gap < b ? -1 : (gap > b ? 1 : 0);
}

bool norm_above_one(const SymbolicCreature& t) { return compare_gap(t, pow2(t.k)) > 0; }

}  // namespace

void SymbolicCreature::validate() const {
  if (k < 1) throw PreconditionError("divisor k must be at least 1");
  if (i_star < 0) throw PreconditionError("drop index must be nonnegative");
  if (compare_gap(*this, Rational(0)) < 0) throw PreconditionError("drop index exceeds lambda in " + show(*this));
}

Creature SymbolicCreature::to_creature() const {
  validate();
  Creature t{m, m + 1, 0.0, lambda, SymbolicInfo{i_star, k}};
  t.nor = nor().convert_to<double>();
  return t;
}

SymbolicCreature SymbolicCreature::from_creature(const Creature& t) {
  const auto* info = std::get_if<SymbolicInfo>(&t.dis);
  if (!info || !t.is_symbolic()) throw PreconditionError("not a symbolic creature: " + describe(t));
  return SymbolicCreature{t.m_dn, t.card(), info->drop, info->k};
}

bool norm_at_least_two(const SymbolicCreature& t) { return compare_gap(t, pow2(2 * t.k)) >= 0; }

SymbolicCreature half(const SymbolicCreature& t, const Rational& epsilon, HalfRule rule) {
  t.validate();
  if (!norm_at_least_two(t)) throw PreconditionError("half needs nor >= 2, got " + show(t));
  if (epsilon < Rational(2, t.k)) throw PreconditionError("epsilon " + to_string(epsilon) + " is below 2/k");
  Rational j = (exact_lambda(t, "half") + t.i_star) / 2;
  SymbolicCreature out = t;
  out.i_star = rule == HalfRule::Ceil ? Rational(ceil_of(j)) : Rational(floor_of(j) - 1);
  return out;
}

SymbolicCreature unhalve(const SymbolicCreature& s, const SymbolicCreature& t, const Rational& epsilon, HalfRule rule) {
  SymbolicCreature star = half(t, epsilon, rule);
  s.validate();
  if (s.m != t.m || s.k != t.k) throw PreconditionError("unhalve: s and t live on different slots");
  if (!(s.lambda <= t.lambda) || s.i_star < star.i_star)
    throw PreconditionError("unhalve: " + show(s) + " does not refine the half " + show(star));
  if (!norm_above_one(s)) throw PreconditionError("unhalve needs nor(s) > 1, got " + show(s));
  return SymbolicCreature{s.m, s.lambda, t.i_star, t.k};
}

HalvingReport check_halving_property(const std::vector<SymbolicCreature>& samples, const HalvingOptions& options) {
  if (options.m_bar.size() != options.eps_bar.size()) throw PreconditionError("m_bar and eps_bar differ in length");
  HalvingReport report;
  const Real slack(kInequalitySlack);
  auto skip = [&](const std::string& reason) {
    ++report.skipped;
    ++report.skip_reasons[reason];
  };
  auto fail = [&](std::size_t& counter, const std::string& what) {
    ++counter;
    if (!report.first_failure) report.first_failure = what;
  };

  for (const SymbolicCreature& t : samples) {
    ++report.samples;
    if (!t.lambda.is_exact()) {
      skip("lambda not exact");
      continue;
    }
    if (!norm_at_least_two(t)) {
      skip("nor < 2");
      continue;
    }
    Rational eps(2, t.k);
    if (!options.m_bar.empty()) {
      auto it = std::upper_bound(options.m_bar.begin(), options.m_bar.end(), t.m);
      if (it == options.m_bar.begin()) {
        skip("slot below m_0");
        continue;
      }
      eps = options.eps_bar[static_cast<std::size_t>(it - options.m_bar.begin()) - 1];
      if (eps < Rational(2, t.k)) {
        skip("epsilon below 2/k");
        continue;
      }
    }
    ++report.checked;
    if (compare_gap(t, pow2(2 * t.k)) == 0) ++report.boundary;

    const Rational& lambda = *t.lambda.exact_value();
    const Real nor_t = t.nor();
    const Real floor_norm = nor_t - to_real(eps);
    SymbolicCreature star = half(t, eps, options.rule);

    if (star.nor() < floor_norm - slack) fail(report.clause_i_failures, "clause (i) at " + show(t));

    Rational j = (lambda + t.i_star) / 2;
    ++report.midpoint_checked;
    Real mid = f_k(t.lambda, NormParams{t.k, j});
    if (abs(mid - (nor_t - Real(1) / t.k)) > Real(kEqualityTolerance))
      fail(report.midpoint_failures, "midpoint identity at " + show(t));
    if (!(t.i_star < j && j <= star.i_star && star.i_star < j + 1 && star.i_star < lambda))
      fail(report.placement_failures, "half drop " + to_string(star.i_star) + " misplaced for " + show(t));

    // Refinements s of t*: lambda shrinks, drop grows, nor(s) > 1.
    const Rational margin = pow2(t.k) + Rational(1, 2);
    std::vector<Rational> drops{star.i_star};
    if (lambda - margin > star.i_star) {
      drops.push_back((star.i_star + lambda - margin) / 2);
      drops.push_back(lambda - margin);
    }
    for (const Rational& drop : drops) {
      for (const Rational& lam : {lambda, Rational(drop + margin)}) {
        if (lam > lambda) continue;
        SymbolicCreature s{t.m, LogLogCard::exact(lam), drop, t.k};
        if (!norm_above_one(s)) continue;
        ++report.refinements;
        SymbolicCreature t0 = unhalve(s, t, eps, options.rule);
        bool inside = t0.lambda <= s.lambda && t0.m == s.m;
        if (!inside || t0.nor() < floor_norm - slack)
          fail(report.clause_ii_failures, "clause (ii) at " + show(t) + " refined to " + show(s));
      }
    }
  }
  return report;
}

std::vector<SymbolicCreature> halving_sweep_samples(std::size_t count, std::uint64_t seed, int lambda_lo,
                                                    int lambda_hi) {
  if (lambda_lo < 0 || lambda_hi < lambda_lo) throw PreconditionError("bad lambda range");
  std::mt19937_64 rng(seed);
  auto uniform = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  // Rational drawn from [lo, hi] on a grid of step 1/den.
  auto draw = [&](const Rational& lo, const Rational& hi) {
    long den = uniform(1, 4);
    BigInt a = ceil_of(lo * den), b = floor_of(hi * den);
    if (b < a) return lo;
    long span = static_cast<long>(std::min<BigInt>(b - a, BigInt(1'000'000'000)));
    return Rational(a + uniform(0, span), den);
  };

  int k_max = 0;
  while (k_max < 16 && pow2(2 * (k_max + 1)) <= lambda_hi) ++k_max;

  std::vector<SymbolicCreature> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    SymbolicCreature t;
    t.m = static_cast<int>(uniform(0, 63));
    bool admissible = k_max > 0 && (k_max == 16 || uniform(0, 7) != 0);
    if (admissible) {
      t.k = static_cast<int>(uniform(1, k_max));
      Rational four_k = pow2(2 * t.k);
      Rational lambda = draw(std::max(Rational(lambda_lo), four_k), Rational(lambda_hi));
      t.lambda = LogLogCard::exact(lambda);
      t.i_star = uniform(0, 3) == 0 ? lambda - four_k : draw(Rational(0), lambda - four_k);
    } else {
      t.k = static_cast<int>(uniform(k_max + 1, 16));
      Rational lambda = draw(Rational(lambda_lo), Rational(lambda_hi));
      t.lambda = LogLogCard::exact(lambda);
      t.i_star = draw(Rational(0), lambda);
    }
    out.push_back(std::move(t));
  }
  return out;
}

// ------------------------------------------------------------------ split

int SplitMaps::side_of(int m) const {
  if (m < 0 || m >= slot_count) throw PreconditionError("slot " + std::to_string(m) + " outside the split range");
  auto it = std::upper_bound(n.begin(), n.end(), m);
  return static_cast<int>((it - n.begin() - 1) % 2);
}

int SplitMaps::index_of(int m) const {
  const auto& enumeration = pi[side_of(m)];
  return static_cast<int>(std::lower_bound(enumeration.begin(), enumeration.end(), m) - enumeration.begin());
}

int SplitMaps::count_below(int side, int end) const {
  const auto& enumeration = pi[side];
  return static_cast<int>(std::lower_bound(enumeration.begin(), enumeration.end(), end) - enumeration.begin());
}

SlotSpace SplitMaps::side_space(const SlotSpace& H, int side) const {
  if (H.count() != slot_count) throw PreconditionError("slot space does not match the split range");
  std::vector<int> sizes;
  for (int m : pi[side]) sizes.push_back(H.size(m));
  return SlotSpace(std::move(sizes));
}

void SplitMaps::validate() const {
  if (n.empty() || n.front() != 0) throw PreconditionError("n must start at 0");
  for (std::size_t i = 1; i < n.size(); ++i)
    if (n[i] <= n[i - 1]) throw PreconditionError("n must be strictly increasing");
  std::vector<int> seen(static_cast<std::size_t>(slot_count), 0);
  for (int side : {0, 1}) {
    for (std::size_t j = 0; j < pi[side].size(); ++j) {
      int m = pi[side][j];
      if (j > 0 && m <= pi[side][j - 1]) throw PreconditionError("enumeration not increasing");
      if (m < 0 || m >= slot_count || side_of(m) != side) throw PreconditionError("enumeration leaves its side");
      ++seen[static_cast<std::size_t>(m)];
    }
  }
  for (int c : seen)
    if (c != 1) throw PreconditionError("U^0 and U^1 do not partition the range");
  for (int side : {0, 1}) {
    std::vector<int> expanded;
    for (const auto& [lo, hi] : U[side])
      for (int m = lo; m < hi; ++m) expanded.push_back(m);
    if (expanded != pi[side]) throw PreconditionError("U^" + std::to_string(side) + " and its enumeration differ");
  }
  if (k_at_n.size() > n.size()) throw PreconditionError("more divisors than points of n");
}

SplitMaps build_split(const SlotSpace& H, const DivisorFn& k_fn, int levels) {
  if (levels < 0) throw PreconditionError("levels must be nonnegative");
  if (H.count() == 0) throw PreconditionError("empty slot range");
  SplitMaps maps;
  maps.slot_count = H.count();

  std::vector<BigInt> k;
  for (int m = 0; m < H.count(); ++m) {
    k.push_back(k_fn(m));
    if (m > 0 && k[static_cast<std::size_t>(m)] < k[static_cast<std::size_t>(m) - 1])
      throw PreconditionError("k must be non-decreasing, fails at slot " + std::to_string(m));
  }

  maps.n.push_back(0);
  for (int level = 0; level < levels; ++level) {
    int current = maps.n.back();
    BigInt need = 2 * H.prefix_product(current);
    int next = current + 1;
    while (next < H.count() && k[static_cast<std::size_t>(next)] < need) ++next;
    if (next >= H.count())
      throw PreconditionError("no n_" + std::to_string(level + 1) + " within " + std::to_string(H.count()) +
                              " slots: need k >= " + need.str());
    maps.n.push_back(next);
  }
  for (int v : maps.n) maps.k_at_n.push_back(k[static_cast<std::size_t>(v)]);

  for (std::size_t i = 0; i < maps.n.size(); ++i) {
    int lo = maps.n[i];
    int hi = i + 1 < maps.n.size() ? maps.n[i + 1] : H.count();
    if (lo >= hi) continue;
    maps.U[i % 2].emplace_back(lo, hi);
    for (int m = lo; m < hi; ++m) maps.pi[i % 2].push_back(m);
  }
  maps.validate();
  return maps;
}

LevelSequence side_levels(const SplitMaps& maps, int side) {
  if (side != 0 && side != 1) throw PreconditionError("side must be 0 or 1");
  LevelSequence out;
  for (std::size_t idx = static_cast<std::size_t>(side); idx < maps.n.size(); idx += 2) {
    if (maps.k_at_n[idx] <= 0) throw PreconditionError("k must be positive");
    out.m_bar.push_back(maps.count_below(side, maps.n[idx]));
    out.eps_bar.emplace_back(BigInt(2), maps.k_at_n[idx]);
  }
  return out;
}

std::pair<Condition, Condition> split_condition(const Condition& p, const SplitMaps& maps) {
  if (!p.pair || !p.pair->is_local()) throw PreconditionError("split needs a condition over a local pair");
  if (p.pair->slot_count() != maps.slot_count) throw PreconditionError("pair and split range differ");
  if (std::find(maps.n.begin(), maps.n.end(), p.i()) == maps.n.end())
    throw PreconditionError("stem length " + std::to_string(p.i()) + " is not in n");
  p.validate();

  Condition side[2];
  for (int l : {0, 1}) side[l].pair = p.pair->reindexed(maps.pi[l]);
  for (int m = 0; m < p.i(); ++m) side[maps.side_of(m)].stem.push_back(p.stem[static_cast<std::size_t>(m)]);
  for (const Creature& t : p.creatures) {
    int l = maps.side_of(t.m_dn);
    side[l].creatures.push_back(p.pair->relocated(t, maps.index_of(t.m_dn)));
  }
  return {std::move(side[0]), std::move(side[1])};
}

Condition merge_condition(const Condition& p0, const Condition& p1, const SplitMaps& maps, const PairPtr& base) {
  if (!base || !base->is_local()) throw PreconditionError("merge needs a local base pair");
  const Condition* side[2] = {&p0, &p1};
  for (int l : {0, 1}) {
    if (!side[l]->pair || !side[l]->pair->same_as(*base->reindexed(maps.pi[l])))
      throw PreconditionError("side " + std::to_string(l) + " is not over the reindexed base pair");
  }
  int n = p0.i() + p1.i();
  if (std::find(maps.n.begin(), maps.n.end(), n) == maps.n.end() || maps.count_below(0, n) != p0.i())
    throw PreconditionError("stems do not split at a point of n");

  Condition p{base, {}, {}};
  std::size_t used[2] = {0, 0};
  for (int m = 0; m < n; ++m) {
    int l = maps.side_of(m);
    p.stem.push_back(side[l]->stem[used[l]++]);
  }
  std::size_t next[2] = {0, 0};
  for (int m = n; next[0] < p0.creatures.size() || next[1] < p1.creatures.size(); ++m) {
    int l = maps.side_of(m);
    if (next[l] < side[l]->creatures.size())
      p.creatures.push_back(side[l]->pair->relocated(side[l]->creatures[next[l]], m));
    else
      p.creatures.push_back(base->full_creature(m));
    ++next[l];
  }
  p.validate();
  return p;
}

HypothesisReport check_product_hypothesis(const SlotSpace& H, const std::vector<int>& m_bar,
                                          const std::vector<Rational>& eps_bar) {
  if (m_bar.size() != eps_bar.size()) throw PreconditionError("m_bar and eps_bar differ in length");
  HypothesisReport report;
  for (std::size_t i = 0; i < m_bar.size(); ++i) {
    if (m_bar[i] < 0 || m_bar[i] > H.count()) throw PreconditionError("m_" + std::to_string(i) + " outside the range");
    if (eps_bar[i] <= 0) throw PreconditionError("epsilons must be positive");
    ++report.levels;
    BigInt product = H.prefix_product(m_bar[i]);
    Rational bound = 1 / eps_bar[i];
    if (Rational(product) > bound) {
      report.holds = false;
      report.failing_level = static_cast<int>(i);
      report.product = product;
      report.bound = bound;
      break;
    }
  }
  return report;
}

}  // namespace creature
