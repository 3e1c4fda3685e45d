#include "creature/coloring.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include "creature/errors.hpp"

namespace creature {

bool ColoringParams::satisfies_hypothesis() const {
  return static_cast<std::int64_t>(N - 2) * (std::int64_t{1} << M) < d;
}

void ColoringParams::validate_ranges() const {
  if (N < 2) throw PreconditionError("coloring needs N >= 2");
  if (M < 2 || M > 30) throw PreconditionError("coloring needs 2 <= M <= 30");
  if (d < 1) throw PreconditionError("coloring needs d >= 1");
}

void ColoringParams::validate() const {
  validate_ranges();
  if (!satisfies_hypothesis())
    throw PreconditionError("hypothesis (N-2)*2^M < d violated for N=" + std::to_string(N) + ", M=" +
                            std::to_string(M) + ", d=" + std::to_string(d));
}

int ColoringParams::minimal_arity(int N, int M) {
  return static_cast<int>(std::max<std::int64_t>(1, static_cast<std::int64_t>(N - 2) * (std::int64_t{1} << M) + 1));
}

void CellFamily::validate(const ColoringParams& params) const {
  if (ell < 2 || ell > params.M) throw PreconditionError("cell size must lie in [2, M]");
  if (cells.size() != static_cast<std::size_t>(params.d)) throw PreconditionError("family must have d cells");
  for (const auto& cell : cells) {
    if (cell.size() != static_cast<std::size_t>(ell)) throw PreconditionError("cell of the wrong size");
    if (!std::is_sorted(cell.begin(), cell.end()) || std::adjacent_find(cell.begin(), cell.end()) != cell.end())
      throw PreconditionError("cells must be strictly increasing");
    if (cell.front() < 0 || cell.back() >= params.M) throw PreconditionError("cell element outside M");
  }
}

int eval_fhat(const ColoringParams& params, const BitFunction& h, std::span<const int> u) {
  if (u.size() != static_cast<std::size_t>(params.d)) throw PreconditionError("argument must have length d");
  if (h.width != params.M || (params.M < 32 && (h.bits >> params.M) != 0))
    throw PreconditionError("function does not map M into 2");
  long long sum = 0;
  for (int x : u) {
    if (x < 0 || x >= params.M) throw PreconditionError("argument entry outside M");
    sum += h(x);
  }
  return static_cast<int>(sum % params.N);
}

std::optional<int> ColoringWitness::class_ones(int b) const {
  if (b < 0 || b >= N_) throw PreconditionError("color outside B");
  int r = ((b - fixed_sum_) % N_ + N_) % N_;
  if (r > static_cast<int>(majority_.size())) return std::nullopt;
  return r;
}

const std::vector<int>& ColoringWitness::subcell(int b, int i) const {
  auto ones = class_ones(b);
  if (!ones) throw PreconditionError("color " + std::to_string(b) + " is not covered by this witness");
  int rank = rank_in_class_.at(static_cast<std::size_t>(i));
  if (rank >= 0 && rank < *ones) return ones_[static_cast<std::size_t>(i)];
  return zeros_[static_cast<std::size_t>(i)];
}

std::vector<std::vector<int>> ColoringWitness::subcells(int b) const {
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < zeros_.size(); ++i) out.push_back(subcell(b, static_cast<int>(i)));
  return out;
}

namespace {

std::uint32_t mask_of(const std::vector<int>& cell) {
  std::uint32_t mask = 0;
  for (int x : cell) mask |= 1U << x;
  return mask;
}

std::vector<int> first_with_value(const std::vector<int>& cell, const BitFunction& a, int value, int count) {
  std::vector<int> out;
  for (int x : cell) {
    if (static_cast<int>(out.size()) == count) break;
    if (a(x) == value) out.push_back(x);
  }
  return out;
}

}  // namespace

std::optional<ColoringWitness> try_find_witness(const ColoringParams& params, const CellFamily& family) {
  params.validate_ranges();
  try {
    family.validate(params);
  } catch (const PreconditionError&) {
    return std::nullopt;
  }
  const int half = family.ell / 2;

  // Lowest-index balanced h_i: ones exactly on the `half` smallest elements of c_i.
  std::vector<std::uint32_t> balanced(family.cells.size());
  for (std::size_t i = 0; i < family.cells.size(); ++i) {
    std::vector<int> low(family.cells[i].begin(), family.cells[i].begin() + half);
    balanced[i] = mask_of(low);
  }

  // Majority class; ties go to the lowest function.
  std::map<std::uint32_t, std::vector<int>> classes;
  for (std::size_t i = 0; i < balanced.size(); ++i) classes[balanced[i]].push_back(static_cast<int>(i));
  auto best = classes.begin();
  for (auto it = classes.begin(); it != classes.end(); ++it) {
    if (it->second.size() > best->second.size()) best = it;
  }

  ColoringWitness w;
  w.N_ = params.N;
  w.ell_ = family.ell;
  w.a_ = BitFunction{best->first, params.M};
  w.majority_ = best->second;
  w.rank_in_class_.assign(family.cells.size(), -1);
  for (std::size_t r = 0; r < w.majority_.size(); ++r) w.rank_in_class_[static_cast<std::size_t>(w.majority_[r])] = static_cast<int>(r);
  w.zeros_.resize(family.cells.size());
  w.ones_.resize(family.cells.size());

  for (std::size_t i = 0; i < family.cells.size(); ++i) {
    const auto& cell = family.cells[i];
    if (w.rank_in_class_[i] >= 0) {
      w.zeros_[i] = first_with_value(cell, w.a_, 0, half);
      w.ones_[i] = first_with_value(cell, w.a_, 1, half);
      continue;
    }
    // Outside the class a is constant on some half-cell; prefer the value 0.
    std::vector<int> zeros = first_with_value(cell, w.a_, 0, half);
    if (static_cast<int>(zeros.size()) == half) {
      w.zeros_[i] = std::move(zeros);
    } else {
      w.zeros_[i] = first_with_value(cell, w.a_, 1, half);
      w.fixed_sum_ = (w.fixed_sum_ + 1) % params.N;
    }
  }
  return w;
}

ColoringWitness find_witness(const ColoringParams& params, const CellFamily& family) {
  params.validate();
  family.validate(params);
  auto witness = try_find_witness(params, family);
  for (int b = 0; b < params.N; ++b) {
    if (!witness->covers(b))
      throw Error("construction failed to reach color " + std::to_string(b) + " although the hypothesis holds");
  }
  return *witness;
}

namespace {

std::optional<std::string> check_color(const ColoringParams& params, const CellFamily& family,
                                       const ColoringWitness& witness, int b) {
  const int half = family.ell / 2;
  long long sum = 0;
  for (std::size_t i = 0; i < family.cells.size(); ++i) {
    const std::vector<int>& sub = witness.subcell(b, static_cast<int>(i));
    const std::vector<int>& cell = family.cells[i];
    if (static_cast<int>(sub.size()) != half)
      return "color " + std::to_string(b) + ": subcell " + std::to_string(i) + " has the wrong size";
    if (!std::includes(cell.begin(), cell.end(), sub.begin(), sub.end()))
      return "color " + std::to_string(b) + ": subcell " + std::to_string(i) + " leaves its cell";
    int value = witness.a()(sub.front());
    for (int x : sub) {
      if (witness.a()(x) != value)
        return "color " + std::to_string(b) + ": a is not constant on subcell " + std::to_string(i);
    }
    sum += value;
  }
  if (sum % params.N != b)
    return "color " + std::to_string(b) + ": subcells force color " + std::to_string(sum % params.N);
  return std::nullopt;
}

}  // namespace

std::optional<std::string> check_witness(const ColoringParams& params, const CellFamily& family,
                                         const ColoringWitness& witness) {
  for (int b = 0; b < params.N; ++b) {
    if (!witness.covers(b)) return "color " + std::to_string(b) + " is not covered";
    if (auto defect = check_color(params, family, witness, b)) return defect;
  }
  return std::nullopt;
}

namespace {

std::vector<std::vector<int>> combinations(int M, int ell) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(static_cast<std::size_t>(ell));
  for (int i = 0; i < ell; ++i) current[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(current);
    int i = ell - 1;
    while (i >= 0 && current[static_cast<std::size_t>(i)] == M - ell + i) --i;
    if (i < 0) return out;
    ++current[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < ell; ++j) current[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(j) - 1] + 1;
  }
}

struct FamilyOutcome {
  bool failed = false;
  std::size_t uncovered = 0;
  std::string defect;
};

FamilyOutcome examine(const ColoringParams& params, const CellFamily& family) {
  FamilyOutcome outcome;
  auto witness = try_find_witness(params, family);
  if (!witness) return {true, 0, "malformed family"};
  const bool hypothesis = params.satisfies_hypothesis();
  for (int b = 0; b < params.N; ++b) {
    if (!witness->covers(b)) {
      ++outcome.uncovered;
      if (hypothesis && !outcome.failed) {
        outcome.failed = true;
        outcome.defect = "color " + std::to_string(b) + " is not covered";
      }
      continue;
    }
    if (auto defect = check_color(params, family, *witness, b); defect && !outcome.failed) {
      outcome.failed = true;
      outcome.defect = *defect;
    }
  }
  return outcome;
}

std::string describe_family(const CellFamily& family) {
  std::string s = "ell=" + std::to_string(family.ell) + " cells=";
  for (const auto& cell : family.cells) {
    s += "{";
    for (std::size_t e = 0; e < cell.size(); ++e) s += (e ? "," : "") + std::to_string(cell[e]);
    s += "}";
  }
  return s;
}

}  // namespace

double family_count(const ColoringParams& params) {
  double total = 0.0;
  for (int ell = 2; ell <= params.M; ++ell) {
    double choose = static_cast<double>(combinations(params.M, ell).size());
    total += std::pow(choose, params.d);
  }
  return total;
}

ColoringReport verify_otimes(const ColoringParams& params, const ColoringOptions& options) {
  auto start = std::chrono::steady_clock::now();
  if (options.probe) params.validate_ranges();
  else params.validate();

  ColoringReport report;
  std::mutex merge;
  std::size_t first_index = std::numeric_limits<std::size_t>::max();

  auto note = [&](std::size_t index, const FamilyOutcome& outcome, const CellFamily& family) {
    std::lock_guard lock(merge);
    ++report.families_checked;
    report.uncovered_colors += outcome.uncovered;
    if (outcome.failed) {
      ++report.failures;
      if (index < first_index) {
        first_index = index;
        report.first_failure = describe_family(family) + ": " + outcome.defect;
      }
    }
  };

  if (options.exhaustive) {
    double estimate = family_count(params);
    if (estimate > static_cast<double>(options.budget))
      throw BudgetExceeded("exhaustive cell-family enumeration", estimate);
  }

  std::size_t offset = 0;
  for (int ell = 2; ell <= params.M; ++ell) {
    const auto combos = combinations(params.M, ell);
    const std::size_t radix = combos.size();
    std::size_t count = options.samples;
    if (options.exhaustive) {
      count = 1;
      for (int i = 0; i < params.d; ++i) count *= radix;
    }
    std::mt19937_64 rng(options.seed + static_cast<std::uint64_t>(ell));
    std::vector<std::vector<std::size_t>> sampled;
    if (!options.exhaustive) {
      std::uniform_int_distribution<std::size_t> pick(0, radix - 1);
      sampled.resize(count, std::vector<std::size_t>(static_cast<std::size_t>(params.d)));
      for (auto& digits : sampled) {
        for (auto& digit : digits) digit = pick(rng);
      }
    }

    auto run = [&](unsigned worker, unsigned workers) {
      CellFamily family{ell, std::vector<std::vector<int>>(static_cast<std::size_t>(params.d))};
      for (std::size_t index = worker; index < count; index += workers) {
        std::size_t rest = index;
        for (std::size_t i = 0; i < family.cells.size(); ++i) {
          std::size_t digit = options.exhaustive ? rest % radix : sampled[index][i];
          rest /= radix;
          family.cells[i] = combos[digit];
        }
        note(offset + index, examine(params, family), family);
      }
    };
    unsigned workers = std::max(1U, options.workers);
    if (workers == 1) {
      run(0, 1);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
      for (auto& t : pool) t.join();
    }
    offset += count;
  }
  report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace creature
