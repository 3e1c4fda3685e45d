// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "creature/coloring.hpp"
#include "creature/collapse.hpp"
#include "creature/errors.hpp"
#include "creature/halving_split.hpp"
#include "creature/norm_calculus.hpp"
#include "creature/transforms.hpp"
#include "oracles.hpp"

using namespace creature;

namespace {

// Pinned thresholds.
constexpr double kColoringSeconds = 60.0;
constexpr double kCollapseSeconds = 30.0;
constexpr std::size_t kMinNormPoints = 10'000;
constexpr std::size_t kHalvingSamples = 40'000;
constexpr std::size_t kMinHalvingChecked = 10'000;
constexpr int kBranchesPerString = 100;
constexpr int kReduceInputs = 100;
constexpr int kSplitConditions = 1000;

struct Outcome {
  bool pass = true;
  std::string first_failure;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) first_failure = what;
    pass = pass && ok;
  }
};

std::shared_ptr<const SubsetPair> subset(std::vector<int> sizes, GrowthRule rule = GrowthRule::Identity) {
  return std::make_shared<SubsetPair>(SlotSpace(std::move(sizes)), rule);
}

void coloring(Outcome& o) {
  struct Shape {
    int N, M;
  };
  std::size_t families = 0, failures = 0, oracle_disagreements = 0;
  for (Shape s : {Shape{2, 2}, Shape{2, 3}, Shape{3, 2}}) {
    int least = ColoringParams::minimal_arity(s.N, s.M);
    for (int d = least; d <= least + 2; ++d) {
      ColoringParams params{s.N, s.M, d};
      ColoringReport report = verify_otimes(params);
      families += report.families_checked;
      failures += report.failures;
      o.require(report.families_checked == static_cast<std::size_t>(family_count(params)),
                "not every family enumerated at d = " + std::to_string(d));
      for (int ell = 2; ell <= s.M; ++ell) {
        for (const CellFamily& family : oracle::all_families(s.M, d, ell)) {
          ColoringWitness w = find_witness(params, family);
          auto reach = oracle::reachable_colors(params, family, w.a().bits);
          for (bool r : reach) oracle_disagreements += r ? 0 : 1;
        }
      }
    }
  }
  o.require(failures == 0, std::to_string(failures) + " families failed");
  o.require(oracle_disagreements == 0, "oracle finds uncovered colors");
  o.note << families << " families, " << failures << " failures, oracle agrees on all";
}

void norms(Outcome& o) {
  NormReport report = verify_norm_lemma(NormGrid::standard());
  o.require(report.grid_points >= kMinNormPoints, "grid too small");
  for (int clause = 1; clause <= 4; ++clause)
    o.require(report.checked[clause] > 0, "clause " + std::to_string(clause) + " never applies");
  o.require(report.violations == 0, report.first_violation ? report.first_violation->note : "violations");
  o.note << report.grid_points << " grid points, " << report.total_checked() << " clause checks, " << report.violations
         << " violations";
}

void halving(Outcome& o) {
  HalvingReport r = check_halving_property(halving_sweep_samples(kHalvingSamples, 0));
  o.require(r.checked >= kMinHalvingChecked, "fewer than 10^4 admissible creatures");
  o.require(r.boundary > 0, "boundary nor = 2 not sampled");
  o.require(r.contract_holds(), r.first_failure.value_or("contract fails"));
  o.require(r.midpoint_holds(), r.first_failure.value_or("midpoint identity fails"));
  o.require(r.midpoint_checked == r.checked, "midpoint identity not checked everywhere");
  o.note << r.checked << " creatures with nor >= 2 (" << r.boundary << " on the boundary), " << r.refinements
         << " refinements, " << r.skipped << " skipped";
}

void collapse(Outcome& o) {
  BadnessWitness w = build_badness(2, 2, 1.0);
  for (int i = 0; i < w.level_count(); ++i) {
    const LevelParams& level = w.level(i);
    o.require(level.coloring().satisfies_hypothesis(), "level hypothesis fails");
    o.require(!ColoringParams{level.N, level.M, level.d - 1}.satisfies_hypothesis(), "d_i is not minimal");
  }
  Condition p = minimal_condition(w);
  std::mt19937_64 rng(0);
  std::size_t decoded_ok = 0, floors_ok = 0;
  for (int code = 0; code < 4; ++code) {
    std::vector<int> bits{code >> 1 & 1, code & 1};
    EncodeResult r = encode_real(w, p, bits);
    o.require(leq(p, r.q), "encoded condition is not stronger");
    for (std::size_t j = 0; j < bits.size(); ++j) {
      bool ok = r.q.creatures[j].nor >= r.norm_floors[j] - kInequalitySlack;
      floors_ok += ok;
      o.require(ok, "norm floor violated");
    }
    for (int b = 0; b < kBranchesPerString; ++b) {
      Decoded d = eta_rho_decode(w, sample_branch(r.q, bits.size(), rng), r.seed, 2);
      bool ok = d.rho == bits && d.eta == r.chain;
      decoded_ok += ok;
      o.require(ok, "branch decodes to the wrong string");
    }
  }
  o.note << "blocks " << w.blocks()[1] << "," << w.blocks()[2] << "; " << decoded_ok << "/400 branches decode, "
         << floors_ok << "/8 norm floors hold";
}

void good_pairs(Outcome& o) {
  std::size_t creatures = 0;
  auto run = [&](const CreatingPair& pair) {
    GoodPairReport report = check_good_pair(pair);
    creatures += report.creatures;
    o.require(report.passed(), pair.describe());
  };
  run(*subset({2, 3, 4}));
  run(*subset({2, 3, 4}, GrowthRule::Log2));
  run(BlockPair({0, 2, 3}));
  run(*summarize_pair(subset({2, 3, 3, 2}), {0, 2, 4}));
  o.note << "subset (two growth rules), block and summarized pairs; " << creatures << " creatures";
}

void transforms(Outcome& o) {
  std::size_t sums = 0;
  auto summarized = summarize_pair(subset({2, 3, 4, 2, 3}), {0, 2, 3, 5});
  for (int start : summarized->creature_starts()) {
    for (const Creature& t : summarized->creatures_at(start, kDefaultBudget)) {
      double least = 1e300;
      for (const Creature& part : std::get<SumInfo>(t.dis).parts) least = std::min(least, part.nor);
      ++sums;
      o.require(t.nor == least, "nor(sum) != min(parts)");
    }
  }

  auto base = subset({2, 2, 2, 2});
  auto tiny = summarize_pair(base, {0, 2, 4});
  std::size_t aligned = 0;
  for (const Condition& p : oracle::all_conditions(base, 4)) {
    if (p.i() % 2 != 0 || p.horizon_end() % 2 != 0) continue;
    ++aligned;
    o.require(embed_condition(summarize_condition(p, tiny)) == p, "summarize then flatten differs");
  }

  auto conditions = oracle::all_conditions(tiny, 4);
  std::vector<Condition> flat;
  for (const Condition& q : conditions) flat.push_back(embed_condition(q));
  std::size_t order_pairs = 0;
  for (std::size_t a = 0; a < conditions.size(); ++a) {
    for (std::size_t b = 0; b < conditions.size(); ++b) {
      if (!leq(conditions[a], conditions[b])) continue;
      ++order_pairs;
      o.require(leq(flat[a], flat[b]), "embedding loses an order relation");
    }
  }

  std::mt19937_64 rng(5);
  int reduced = 0;
  for (int round = 0; round < kReduceInputs; ++round) {
    int n = 12 + static_cast<int>(rng() % 6);
    auto pair = subset(std::vector<int>(static_cast<std::size_t>(n), 6));
    Condition p{pair, {static_cast<int>(rng() % 6)}, {}};
    for (int m = 1; m < n; ++m) {
      int lo = std::min(6, 2 + (m - 1) / 2);
      int size = lo + static_cast<int>(rng() % static_cast<unsigned>(7 - lo));
      ValueSet values;
      for (int x = 0; x < 6; ++x)
        if (static_cast<int>(values.size()) < size && (rng() % 2 || 6 - x <= size - static_cast<int>(values.size())))
          values.push_back(x);
      p.creatures.push_back(pair->make(m, values));
    }
    ReduceResult r = reduce_to_bad_form(p, ReduceOptions{2, 0});
    ++reduced;
    o.require(leq(p, r.q), "reduce output is not stronger");
    for (std::size_t block = 1; block + 1 < r.blocks.size(); ++block)
      for (int m = r.blocks[block]; m < r.blocks[block + 1]; ++m)
        o.require(r.q.creatures[static_cast<std::size_t>(m - r.q.i())].product().coords[0].size() == block + 2,
                  "reduce block sizes are not uniform");
  }
  o.note << sums << " sums, " << aligned << " aligned conditions, " << order_pairs << " order pairs, " << reduced
         << " reductions";
}

void split_merge(Outcome& o) {
  auto pair = subset({2, 2, 3, 2, 4, 3, 2, 3});
  SplitMaps maps = build_split(pair->slots(), [](int n) { return BigInt(n) + 2; }, 3);
  std::mt19937_64 rng(23);
  int identical = 0;
  for (int round = 0; round < kSplitConditions; ++round) {
    int stem = maps.n[rng() % maps.n.size()];
    int horizon = stem + static_cast<int>(rng() % static_cast<unsigned>(pair->slot_count() - stem + 1));
    Condition p{pair, {}, {}};
    for (int m = 0; m < stem; ++m) p.stem.push_back(static_cast<int>(rng() % static_cast<unsigned>(*pair->slot_size(m))));
    for (int m = stem; m < horizon; ++m) {
      ValueSet values;
      for (int x = 0; x < *pair->slot_size(m); ++x)
        if (rng() % 2) values.push_back(x);
      if (values.empty()) values.push_back(0);
      p.creatures.push_back(pair->make(m, values));
    }
    auto [p0, p1] = split_condition(p, maps);
    bool same = merge_condition(p0, p1, maps, pair) == p;
    identical += same;
    o.require(same, "merge of split differs");
  }

  std::string witness;
  for (int side : {0, 1}) {
    LevelSequence levels = side_levels(maps, side);
    SlotSpace H = maps.side_space(pair->slots(), side);
    o.require(check_product_hypothesis(H, levels.m_bar, levels.eps_bar).holds, "hypothesis fails on the instance");
    for (Rational& e : levels.eps_bar) e *= 2;
    HypothesisReport doubled = check_product_hypothesis(H, levels.m_bar, levels.eps_bar);
    if (side == 0) {
      o.require(!doubled.holds && doubled.failing_level.has_value(), "doubled epsilon still passes");
      if (doubled.failing_level)
        witness = "level " + std::to_string(*doubled.failing_level) + ": " + doubled.product.str() + " > " +
                  to_string(doubled.bound);
    }
  }
  o.note << identical << "/" << kSplitConditions << " merges identical; doubled epsilon fails at side 0 " << witness;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<void(Outcome&)> run;
  };
  const Criterion criteria[] = {
      {1, "coloring construction, exhaustive", kColoringSeconds, coloring},
      {2, "log-norm halving inequalities", 0, norms},
      {3, "epsilon-half contract", 0, halving},
      {4, "collapse round-trip", kCollapseSeconds, collapse},
      {5, "good creating pair laws", 0, good_pairs},
      {6, "sums, summarization and reduction", 0, transforms},
      {7, "split and merge", 0, split_merge},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && seconds > c.limit_seconds) {
      std::ostringstream limit;
      limit << "took " << seconds << " s, limit " << c.limit_seconds << " s";
      o.require(false, limit.str());
    }
    failed += o.pass ? 0 : 1;
    std::string note = o.note.str();
    if (!o.pass) note += (note.empty() ? "" : "; ") + std::string("first failure: ") + o.first_failure;
    std::printf("criterion %d %s: %s (%s; %.2f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name, note.c_str(), seconds);
  }
  return failed == 0 ? 0 : 1;
}
