#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "creature/coloring.hpp"
#include "creature/collapse.hpp"
#include "creature/core.hpp"
#include "creature/halving_split.hpp"
#include "creature/io.hpp"
#include "creature/norm_calculus.hpp"
#include "creature/pairs.hpp"
#include "creature/transforms.hpp"

namespace creature::cli {

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::size_t budget = 10'000'000;
  bool no_timing = false;
  std::string out_path;
};

struct Run {
  std::string command;
  Json params = Json::object();
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::optional<std::string> counterexample;
  Json details = Json::object();
  Json result;

  void tally(std::size_t ok_or_not, std::size_t failures, const std::optional<std::string>& witness) {
    checked += ok_or_not;
    failed += failures;
    if (failures > 0 && !counterexample && witness) counterexample = witness;
  }
};

Json report_json(const Run& run, double elapsed_ms) {
  Json out{{"command", run.command},
           {"params", run.params},
           {"checked", run.checked},
           {"passed", run.checked >= run.failed ? run.checked - run.failed : 0},
           {"failed", run.failed}};
  if (run.counterexample) out["counterexample"] = *run.counterexample;
  out["elapsed_ms"] = elapsed_ms;
  if (!run.details.empty()) out["details"] = run.details;
  if (!run.result.is_null()) out["result"] = run.result;
  return out;
}

std::string join_bits(const std::vector<int>& bits) {
  std::string s;
  for (int b : bits) s += static_cast<char>('0' + b);
  return s;
}

std::vector<int> parse_bits(const std::string& text) {
  std::vector<int> bits;
  for (char c : text) {
    if (c != '0' && c != '1') throw InputError("--bits: expected a string of 0 and 1, got '" + text + "'");
    bits.push_back(c - '0');
  }
  return bits;
}

// Reports written with --out carry their payload under "result".
Json payload(const Json& j) {
  if (j.is_object() && j.contains("command") && j.contains("result")) return j["result"];
  return j;
}

// A condition file, or a report whose result holds one under "q".
Condition load_condition(const std::string& path, Json* envelope = nullptr) {
  Json j = payload(load_json_file(path));
  std::string where = path + "#";
  if (j.is_object() && !j.contains("pair") && j.contains("q")) {
    if (envelope) *envelope = j;
    j = Json(j["q"]);
    where += "/q";
  }
  return condition_from_json(j, where);
}

NameSeed parse_name_seed(const std::string& text) {
  auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    int level = std::stoi(text.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument(text);
    std::string rest = text.substr(comma + 1);
    int a = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
    return NameSeed{level, a};
  } catch (const std::logic_error&) {
    throw InputError("--seed: expected 'level,label', got '" + text + "'");
  }
}

// --------------------------------------------------------------- witness source

struct WitnessSource {
  std::string file;
  int levels = 2;
  int growth_base = 2;
  double norm_gate = 1.0;

  void add_to(CLI::App* sub) {
    sub->add_option("--witness", file, "Witness JSON written by build-badness");
    sub->add_option("--levels", levels, "Levels when building the witness inline")->capture_default_str();
    sub->add_option("--growth-base", growth_base, "Block growth base when building inline")->capture_default_str();
    sub->add_option("--norm-gate", norm_gate, "Creatures need nor above this gate")->capture_default_str();
  }
  BadnessWitness get(Json& params) const {
    if (!file.empty()) {
      params["witness"] = file;
      return witness_from_json(payload(load_json_file(file)), file + "#");
    }
    params["levels"] = levels;
    params["growth_base"] = growth_base;
    params["norm_gate"] = norm_gate;
    return build_badness(levels, growth_base, norm_gate);
  }
};

// -------------------------------------------------------------- split source

struct SplitSource {
  std::vector<int> H;
  int repeat = 1;
  long k_slope = 1;
  long k_offset = 2;
  int levels = 3;

  void add_to(CLI::App* sub, bool need_H) {
    auto* h = sub->add_option("--H", H, "Slot sizes |H(n)|, comma separated")->delimiter(',');
    if (need_H) h->required();
    sub->add_option("--repeat", repeat, "Repeat the --H list this many times")->capture_default_str();
    sub->add_option("--k-slope", k_slope, "Synthetic divisor k(n) = slope*n + offset")->capture_default_str();
    sub->add_option("--k-offset", k_offset, "Synthetic divisor offset")->capture_default_str();
    sub->add_option("--split-levels", levels, "Number of steps of the n sequence")->capture_default_str();
  }
  SlotSpace space() const {
    std::vector<int> sizes;
    for (int r = 0; r < repeat; ++r) sizes.insert(sizes.end(), H.begin(), H.end());
    return SlotSpace(std::move(sizes));
  }
  SplitMaps build(const SlotSpace& space, Json& params) const {
    params["H"] = space.sizes();
    params["k"] = std::to_string(k_slope) + "*n+" + std::to_string(k_offset);
    params["split_levels"] = levels;
    long slope = k_slope, offset = k_offset;
    return build_split(space, [=](int n) { return BigInt(slope) * n + offset; }, levels);
  }
};

// ------------------------------------------------------------ subcommands

struct Command {
  CLI::App* app = nullptr;
  std::function<void(Run&)> action;
};

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Creature-forcing constructions and their verification campaigns"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every sampling step")->capture_default_str();
  app.add_option("--budget", g.budget, "Cap on any exhaustive enumeration")->capture_default_str();
  app.add_flag("--no-timing", g.no_timing, "Report elapsed_ms as 0 for byte-identical output");
  app.add_option("--out", g.out_path, "Write the JSON report here instead of stdout");

  std::vector<Command> commands;
  auto add = [&](const char* name, const char* help) -> Command& {
    commands.push_back(Command{app.add_subcommand(name, help), {}});
    return commands.back();
  };

  // verify-coloring -> verify_otimes
  ColoringParams cp;
  bool sampled = false, probe = false;
  std::size_t coloring_samples = 1000;
  unsigned workers = 1;
  {
    auto& c = add("verify-coloring", "verify_otimes: run the sum-mod-N coloring construction on every cell family");
    c.app->add_option("--N", cp.N, "Number of colors")->required();
    c.app->add_option("--M", cp.M, "Size of the domain of the labels")->required();
    c.app->add_option("--d", cp.d, "Arity")->required();
    c.app->add_flag("--sampled", sampled, "Sample families instead of enumerating them");
    c.app->add_option("--samples", coloring_samples, "Families per ell when sampling")->capture_default_str();
    c.app->add_option("--workers", workers, "Worker threads")->capture_default_str();
    c.app->add_flag("--probe", probe, "Run even when the arity hypothesis fails; count uncovered colors");
    c.action = [&](Run& run) {
      run.params = Json{{"N", cp.N}, {"M", cp.M}, {"d", cp.d}, {"sampled", sampled}, {"probe", probe}};
      if (sampled) run.params["samples"] = coloring_samples;
      if (probe) cp.validate_ranges();
      else cp.validate();
      ColoringOptions options;
      options.exhaustive = !sampled;
      options.budget = g.budget;
      options.samples = coloring_samples;
      options.seed = g.seed;
      options.probe = probe;
      options.workers = std::max(1U, workers);
      ColoringReport report = verify_otimes(cp, options);
      run.tally(report.families_checked, report.failures, report.first_failure);
      run.details = Json{{"families_checked", report.families_checked},
                         {"failures", report.failures},
                         {"family_count", family_count(cp)},
                         {"uncovered_colors", report.uncovered_colors}};
    };
  }

  // verify-norms -> verify_norm_lemma
  std::vector<int> clauses;
  std::string grid_name = "default", csv_path;
  {
    auto& c = add("verify-norms", "verify_norm_lemma: the four halving inequalities of the log-norm over a grid");
    c.app->add_option("--clause", clauses, "Clause to check (1-4), repeatable; default all");
    c.app->add_option("--grid", grid_name, "default or small")->check(CLI::IsMember({"default", "small"}))->capture_default_str();
    c.app->add_option("--csv", csv_path, "Write every checked row as CSV");
    c.action = [&](Run& run) {
      NormVerifyOptions options;
      if (!clauses.empty()) options.clauses = clauses;
      for (int clause : options.clauses)
        if (clause < 1 || clause > 4) throw InputError("--clause: expected 1..4, got " + std::to_string(clause));
      options.keep_rows = !csv_path.empty();
      NormGrid grid = grid_name == "small" ? NormGrid::small() : NormGrid::standard();
      run.params = Json{{"grid", grid_name}, {"clauses", options.clauses}};
      NormReport report = verify_norm_lemma(grid, options);
      std::optional<std::string> witness;
      if (report.first_violation) {
        const NormRow& r = *report.first_violation;
        witness = "clause " + std::to_string(r.clause) + " at lambda=" + to_string(r.lambda) + " i=" +
                  to_string(r.drop) + " k=" + std::to_string(r.k) + ": lhs " + to_string(r.lhs, 15) + " rhs " +
                  to_string(r.rhs, 15);
      }
      run.tally(report.total_checked(), report.violations, witness);
      run.details = Json{{"grid_points", report.grid_points},
                         {"clause_checked", Json::array({report.checked[1], report.checked[2], report.checked[3],
                                                          report.checked[4]})}};
      if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw InputError(csv_path + ": cannot write");
        report.write_csv(csv);
        run.details["csv"] = csv_path;
      }
    };
  }

  // verify-halving -> check_halving_property
  std::size_t halving_samples = 20000;
  int lambda_lo = 18, lambda_hi = 1024;
  std::string rule_name = "ceil", halving_grid = "default";
  {
    auto& c = add("verify-halving", "check_halving_property: the epsilon-half contract on random symbolic creatures");
    auto* samples_opt = c.app->add_option("--samples", halving_samples, "Creatures to draw")->capture_default_str();
    c.app->add_option("--grid", halving_grid, "default (20000 creatures) or small (2000); --samples overrides")
        ->check(CLI::IsMember({"default", "small"}))
        ->capture_default_str();
    c.app->add_option("--lambda-lo", lambda_lo, "Least double logarithm")->capture_default_str();
    c.app->add_option("--lambda-hi", lambda_hi, "Largest double logarithm")->capture_default_str();
    c.app->add_option("--rule", rule_name, "ceil, or floor-minus-one to inject a fault")
        ->check(CLI::IsMember({"ceil", "floor-minus-one"}))
        ->capture_default_str();
    c.action = [&, samples_opt](Run& run) {
      if (samples_opt->count() == 0 && halving_grid == "small") halving_samples = 2000;
      run.params = Json{{"grid", halving_grid}, {"samples", halving_samples}, {"lambda_lo", lambda_lo}, {"lambda_hi", lambda_hi}, {"rule", rule_name}};
      HalvingOptions options;
      options.rule = rule_name == "ceil" ? HalfRule::Ceil : HalfRule::FloorMinusOne;
      HalvingReport report = check_halving_property(halving_sweep_samples(halving_samples, g.seed, lambda_lo, lambda_hi), options);
      std::size_t failures = report.clause_i_failures + report.clause_ii_failures + report.midpoint_failures +
                             report.placement_failures;
      run.tally(report.checked, failures, report.first_failure);
      run.details = Json{{"samples", report.samples},
                         {"boundary_nor_2", report.boundary},
                         {"skipped", report.skip_reasons},
                         {"refinements", report.refinements},
                         {"clause_i_failures", report.clause_i_failures},
                         {"clause_ii_failures", report.clause_ii_failures},
                         {"midpoint_failures", report.midpoint_failures},
                         {"placement_failures", report.placement_failures}};
    };
  }

  // verify-goodpair -> check_good_pair
  std::string pair_file, kind = "subset", growth = "identity";
  std::vector<int> H{2, 3, 4}, blocks;
  int max_slots = 3;
  {
    auto& c = add("verify-goodpair", "check_good_pair: the good creating pair laws, exhaustively at small scope");
    c.app->add_option("--pair", pair_file, "Pair JSON; overrides --kind");
    c.app->add_option("--kind", kind, "subset, block or summarized")
        ->check(CLI::IsMember({"subset", "block", "summarized"}))
        ->capture_default_str();
    c.app->add_option("--H", H, "Slot sizes of the subset pair")->delimiter(',')->capture_default_str();
    c.app->add_option("--growth", growth, "identity or log2")->capture_default_str();
    c.app->add_option("--blocks", blocks, "Block boundaries for block and summarized pairs")->delimiter(',');
    c.app->add_option("--max-slots", max_slots, "Only creatures starting below this slot")->capture_default_str();
    c.action = [&](Run& run) {
      PairPtr pair;
      if (!pair_file.empty()) {
        pair = pair_from_json(load_json_file(pair_file), pair_file + "#");
      } else if (kind == "block") {
        pair = std::make_shared<BlockPair>(blocks.empty() ? std::vector<int>{0, 2, 3} : blocks);
      } else {
        auto base = std::make_shared<SubsetPair>(SlotSpace(H), parse_growth_rule(growth));
        pair = kind == "subset" ? PairPtr(base) : PairPtr(summarize_pair(base, blocks.empty() ? std::vector<int>{0, 2, 3} : blocks));
      }
      run.params = Json{{"pair", pair_to_json(*pair)}, {"max_slots", max_slots}};
      GoodPairScope scope;
      scope.max_slots = max_slots;
      scope.budget = g.budget;
      GoodPairReport report = check_good_pair(*pair, scope);
      Json laws = Json::object();
      for (const LawResult& law : report.laws) {
        run.tally(law.checked, law.failed, law.law + ": " + law.counterexample);
        laws[law.law] = Json{{"checked", law.checked}, {"failed", law.failed}};
      }
      run.details = Json{{"creatures", report.creatures}, {"laws", laws}};
    };
  }

  // build-badness -> build_badness
  WitnessSource badness_source;
  {
    auto& c = add("build-badness", "build_badness: block pair, label sets and transitions of a scaled badness witness");
    badness_source.add_to(c.app);
    c.action = [&](Run& run) {
      BadnessWitness witness = badness_source.get(run.params);
      witness.validate();
      run.tally(static_cast<std::size_t>(witness.level_count()), 0, std::nullopt);
      run.result = witness_to_json(witness);
    };
  }

  // encode -> encode_real (+ eta_rho_decode on sampled branches)
  WitnessSource encode_source;
  std::string bits_text, condition_file;
  std::size_t branches = 100;
  {
    auto& c = add("encode", "encode_real: code a bit string into a stronger condition, then decode sampled branches");
    encode_source.add_to(c.app);
    c.app->add_option("--bits", bits_text, "The string r to encode")->required();
    c.app->add_option("--condition", condition_file, "Start condition JSON; default is the minimal condition");
    c.app->add_option("--branches", branches, "Branches of the result to decode")->capture_default_str();
    c.action = [&](Run& run) {
      BadnessWitness witness = encode_source.get(run.params);
      std::vector<int> bits = parse_bits(bits_text);
      run.params["bits"] = bits_text;
      run.params["branches"] = branches;
      Condition p = minimal_condition(witness);
      if (!condition_file.empty()) {
        p = load_condition(condition_file);
        run.params["condition"] = condition_file;
      }
      EncodeResult encoded = encode_real(witness, p, bits);
      std::size_t floor_failures = 0;
      for (std::size_t j = 0; j < bits.size(); ++j)
        if (encoded.q.creatures[j].nor < encoded.norm_floors[j] - kInequalitySlack) ++floor_failures;
      run.tally(bits.size(), floor_failures, "norm floor violated");

      std::mt19937_64 rng(g.seed);
      std::size_t mismatches = 0;
      std::optional<std::string> first;
      for (std::size_t b = 0; b < branches; ++b) {
        std::vector<int> branch = sample_branch(encoded.q, bits.size(), rng);
        Decoded decoded = eta_rho_decode(witness, branch, encoded.seed, static_cast<int>(bits.size()));
        if (decoded.rho != bits && mismatches++ == 0) first = "branch " + std::to_string(b) + " decodes to " + join_bits(decoded.rho);
      }
      run.tally(branches, mismatches, first);
      run.result = Json{{"q", condition_to_json(encoded.q)},
                        {"seed", Json{{"level", encoded.seed.level}, {"a", encoded.seed.a}}},
                        {"chain", encoded.chain},
                        {"norm_floors", encoded.norm_floors}};
    };
  }

  // decode -> eta_rho_decode
  WitnessSource decode_source;
  std::vector<int> branch;
  std::string decode_file, name_seed_text;
  int seed_level = 0, seed_a = 0, horizon = 0;
  std::size_t decode_branches = 100;
  {
    auto& c = add("decode", "eta_rho_decode: run the name recursions along a branch or sampled branches of a condition");
    decode_source.add_to(c.app);
    auto* by_branch = c.app->add_option("--branch", branch, "Branch values, comma separated")->delimiter(',');
    auto* by_condition = c.app->add_option("--condition", decode_file, "Condition or encode report to sample branches from");
    by_branch->excludes(by_condition);
    c.app->add_option("--branches", decode_branches, "Branches to sample with --condition")->capture_default_str();
    auto* seed_pair = c.app->add_option("--seed", name_seed_text, "Name seed as 'level,label'");
    c.app->add_option("--seed-level", seed_level, "Level of the name seed")->excludes(seed_pair)->capture_default_str();
    c.app->add_option("--seed-a", seed_a, "Label of the name seed")->excludes(seed_pair)->capture_default_str();
    c.app->add_option("--horizon", horizon, "Levels to decode; with an encode report, the encoded length");
    c.action = [&](Run& run) {
      BadnessWitness witness = decode_source.get(run.params);
      NameSeed seed{seed_level, seed_a};
      bool seed_given = !name_seed_text.empty() || seed_level != 0 || seed_a != 0;
      if (!name_seed_text.empty()) seed = parse_name_seed(name_seed_text);
      if (decode_file.empty()) {
        if (branch.empty()) throw InputError("decode needs --branch or --condition");
        int levels = horizon > 0 ? horizon : 1;
        run.params["seed"] = Json{{"level", seed.level}, {"a", seed.a}};
        run.params["horizon"] = levels;
        Decoded decoded = eta_rho_decode(witness, branch, seed, levels);
        run.tally(static_cast<std::size_t>(levels), 0, std::nullopt);
        run.result = Json{{"start_level", decoded.start_level}, {"eta", decoded.eta}, {"rho", join_bits(decoded.rho)}};
        return;
      }
      Json envelope;
      Condition q = load_condition(decode_file, &envelope);
      int levels = horizon;
      if (!seed_given && envelope.contains("seed"))
        seed = NameSeed{envelope["seed"].value("level", 0), envelope["seed"].value("a", 0)};
      if (levels <= 0 && envelope.contains("chain") && envelope["chain"].size() > 0)
        levels = static_cast<int>(envelope["chain"].size()) - 1;
      if (levels <= 0) throw InputError("--horizon is required unless the condition comes from an encode report");
      run.params["condition"] = decode_file;
      run.params["seed"] = Json{{"level", seed.level}, {"a", seed.a}};
      run.params["horizon"] = levels;
      run.params["branches"] = decode_branches;

      std::mt19937_64 rng(g.seed);
      std::optional<Decoded> first;
      std::size_t disagreements = 0;
      std::optional<std::string> witness_text;
      for (std::size_t b = 0; b < decode_branches; ++b) {
        Decoded decoded = eta_rho_decode(witness, sample_branch(q, static_cast<std::size_t>(levels), rng), seed, levels);
        if (!first) {
          first = decoded;
        } else if (decoded.rho != first->rho && disagreements++ == 0) {
          witness_text = "branch " + std::to_string(b) + " decodes to " + join_bits(decoded.rho) + ", branch 0 to " +
                         join_bits(first->rho);
        }
      }
      run.tally(decode_branches, disagreements, witness_text);
      if (first)
        run.result = Json{{"start_level", first->start_level}, {"eta", first->eta}, {"rho", join_bits(first->rho)}};
    };
  }

  // summarize -> summarize_pair / summarize_condition
  std::string summarize_file, summarize_pair_file;
  std::vector<int> summarize_blocks;
  {
    auto& c = add("summarize", "summarize_condition: regroup a block-aligned condition (or a pair) into block sums");
    auto* by_condition = c.app->add_option("--condition", summarize_file, "Condition JSON over a local pair");
    auto* by_pair = c.app->add_option("--pair", summarize_pair_file, "Pair JSON; prints the summarized pair");
    by_condition->excludes(by_pair);
    c.app->add_option("--blocks", summarize_blocks, "Block boundaries m_0 = 0 < m_1 < ...")->delimiter(',')->required();
    c.action = [&](Run& run) {
      if (!summarize_pair_file.empty()) {
        PairPtr base = pair_from_json(payload(load_json_file(summarize_pair_file)), summarize_pair_file + "#");
        run.params = Json{{"pair", summarize_pair_file}, {"blocks", summarize_blocks}};
        auto summarized = summarize_pair(base, summarize_blocks);
        run.tally(1, 0, std::nullopt);
        run.result = pair_to_json(*summarized);
        return;
      }
      if (summarize_file.empty()) throw InputError("summarize needs --condition or --pair");
      Condition p = load_condition(summarize_file);
      run.params = Json{{"condition", summarize_file}, {"blocks", summarize_blocks}};
      auto summarized = summarize_pair(p.pair, summarize_blocks);
      Condition q = summarize_condition(p, summarized);
      Condition flat = embed_condition(q);
      bool same = leq(p, flat) && leq(flat, p);
      run.tally(1, same ? 0 : 1, "flattening does not return the input");
      run.result = condition_to_json(q);
    };
  }

  // reduce -> reduce_to_bad_form
  std::string reduce_file;
  ReduceOptions reduce_options;
  {
    auto& c = add("reduce", "reduce_to_bad_form: strengthen a subset-pair condition to uniform block sizes");
    c.app->add_option("--condition", reduce_file, "Condition JSON over a subset pair")->required();
    c.app->add_option("--blocks", reduce_options.blocks, "Creature blocks")->capture_default_str();
    c.app->add_option("--growth-base", reduce_options.growth_base, "Block length base, 0 disables")->capture_default_str();
    c.action = [&](Run& run) {
      Condition p = load_condition(reduce_file);
      run.params = Json{{"condition", reduce_file}, {"blocks", reduce_options.blocks}, {"growth_base", reduce_options.growth_base}};
      ReduceResult r = reduce_to_bad_form(p, reduce_options);
      run.tally(1, leq(p, r.q) ? 0 : 1, "result is not stronger than the input");
      std::size_t uneven = 0;
      for (std::size_t n = 0; n + 1 < r.blocks.size(); ++n) {
        if (n == 0) continue;
        for (int m = r.blocks[n]; m < r.blocks[n + 1]; ++m) {
          auto size = r.q.creatures[static_cast<std::size_t>(m - r.q.i())].product().coords[0].size();
          if (size != n + 2) ++uneven;
        }
      }
      run.tally(1, uneven ? 1 : 0, "block sizes are not uniform");
      run.result = Json{{"q", condition_to_json(r.q)}, {"blocks", r.blocks}, {"q_star", condition_to_json(r.q_star)}};
    };
  }

  // build-split -> build_split
  SplitSource build_source;
  {
    auto& c = add("build-split", "build_split: the n sequence, interval partition and enumerations");
    build_source.add_to(c.app, true);
    c.action = [&](Run& run) {
      SlotSpace space = build_source.space();
      SplitMaps maps = build_source.build(space, run.params);
      run.tally(1, 0, std::nullopt);
      Json sides = Json::array();
      for (int side : {0, 1}) {
        LevelSequence levels = side_levels(maps, side);
        Json eps = Json::array();
        for (const Rational& e : levels.eps_bar) eps.push_back(to_string(e));
        sides.push_back(Json{{"H", maps.side_space(space, side).sizes()}, {"m_bar", levels.m_bar}, {"eps_bar", eps}});
      }
      run.result = split_to_json(maps);
      run.result["sides"] = sides;
    };
  }

  // split -> split_condition / merge_condition
  SplitSource split_source;
  std::string split_file, maps_file;
  {
    auto& c = add("split", "split_condition: restrict a condition to both halves and merge back");
    split_source.add_to(c.app, false);
    c.app->add_option("--condition", split_file, "Condition JSON over a local pair")->required();
    c.app->add_option("--maps", maps_file, "Split maps written by build-split; replaces --H and the k options");
    c.action = [&](Run& run) {
      Condition p = load_condition(split_file);
      run.params["condition"] = split_file;
      std::optional<SplitMaps> loaded;
      if (!maps_file.empty()) {
        loaded = split_from_json(payload(load_json_file(maps_file)), maps_file + "#");
        run.params["maps"] = maps_file;
      }
      SplitSource source = split_source;
      if (!loaded && source.H.empty()) {
        for (int m = 0; m < p.pair->slot_count(); ++m) {
          auto size = p.pair->slot_size(m);
          if (!size) throw InputError("--H is required for pairs without explicit slot sizes");
          source.H.push_back(*size);
        }
        source.repeat = 1;
      }
      SplitMaps maps = loaded ? *loaded : source.build(source.space(), run.params);
      auto [p0, p1] = split_condition(p, maps);
      Condition back = merge_condition(p0, p1, maps, p.pair);
      run.tally(1, back == p ? 0 : 1, "merge of the split differs from the input");
      run.result = Json{{"p0", condition_to_json(p0)}, {"p1", condition_to_json(p1)}};
    };
  }

  // check-hypothesis -> check_product_hypothesis
  SplitSource hyp_source;
  std::string eps_scale_text = "1";
  std::vector<int> explicit_m;
  std::vector<std::string> explicit_eps;
  {
    auto& c = add("check-hypothesis", "check_product_hypothesis: |prod_{n<m_i} H(n)| <= 1/eps_i in exact arithmetic");
    hyp_source.add_to(c.app, true);
    c.app->add_option("--eps-scale", eps_scale_text, "Multiply every eps_i by this rational")->capture_default_str();
    c.app->add_option("--m-bar", explicit_m, "Explicit m_i (with --eps-bar) instead of the split sides")->delimiter(',');
    c.app->add_option("--eps-bar", explicit_eps, "Explicit eps_i as rationals")->delimiter(',');
    c.action = [&](Run& run) {
      Rational scale = parse_rational(eps_scale_text);
      if (scale <= 0) throw InputError("--eps-scale must be positive");
      run.params["eps_scale"] = to_string(scale);
      SlotSpace space = hyp_source.space();
      std::vector<std::tuple<std::string, SlotSpace, LevelSequence>> instances;
      if (!explicit_m.empty() || !explicit_eps.empty()) {
        LevelSequence levels{explicit_m, {}};
        for (const std::string& e : explicit_eps) levels.eps_bar.push_back(parse_rational(e));
        run.params["H"] = space.sizes();
        instances.emplace_back("explicit", space, levels);
      } else {
        SplitMaps maps = hyp_source.build(space, run.params);
        for (int side : {0, 1})
          instances.emplace_back("side" + std::to_string(side), maps.side_space(space, side), side_levels(maps, side));
      }
      for (auto& [name, H_side, levels] : instances) {
        for (Rational& e : levels.eps_bar) e *= scale;
        HypothesisReport report = check_product_hypothesis(H_side, levels.m_bar, levels.eps_bar);
        std::optional<std::string> witness;
        Json entry{{"levels", report.levels}, {"holds", report.holds}};
        if (report.failing_level) {
          witness = name + " level " + std::to_string(*report.failing_level) + ": product " + report.product.str() +
                    " > 1/eps = " + to_string(report.bound);
          entry["failing_level"] = *report.failing_level;
          entry["product"] = report.product.str();
          entry["bound"] = to_string(report.bound);
        }
        run.tally(report.levels, report.holds ? 0 : 1, witness);
        run.details[name] = entry;
      }
    };
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Run run;
  auto start = std::chrono::steady_clock::now();
  try {
    for (Command& c : commands) {
      if (!c.app->parsed()) continue;
      run.command = c.app->get_name();
      c.action(run);
    }
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << " (estimate " << e.estimate() << ", budget " << g.budget << ")\n";
    return 2;
  } catch (const Error& e) {
    err << run.command << ": " << e.what() << "\n";
    return 2;
  }
  double elapsed = 0.0;
  if (!g.no_timing)
    elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  std::string text = report_json(run, elapsed).dump(2) + "\n";

  if (g.out_path.empty()) {
    out << text;
  } else {
    std::ofstream file(g.out_path);
    if (!file) {
      err << g.out_path << ": cannot write\n";
      return 2;
    }
    file << text;
  }
  return run.failed == 0 ? 0 : 1;
}

}  // namespace creature::cli
