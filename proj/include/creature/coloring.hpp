#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace creature {

/// Parameters of the sum-mod-N coloring: N colors, A = functions M -> 2, arity d.
struct ColoringParams {
  int N = 2;
  int M = 2;
  int d = 1;

  /// (N - 2) * 2^M < d.
  bool satisfies_hypothesis() const;
  /// Range checks (N >= 2, M >= 2, M <= 30, d >= 1); the hypothesis is checked separately.
  void validate_ranges() const;
  /// Range checks plus the hypothesis.
  void validate() const;
  /// Smallest d satisfying the hypothesis for the given N and M.
  static int minimal_arity(int N, int M);
};

/// A function M -> 2 stored as a bit mask: value at m is bit m.
struct BitFunction {
  std::uint32_t bits = 0;
  int width = 0;

  int operator()(int m) const { return static_cast<int>(bits >> m & 1U); }
  friend bool operator==(const BitFunction&, const BitFunction&) = default;
};

/// Cells c_i of size ell inside {0..M-1}.
struct CellFamily {
  int ell = 2;
  std::vector<std::vector<int>> cells;

  void validate(const ColoringParams& params) const;
};

/// The coloring F(h, u) = sum_i h(u(i)) mod N.
int eval_fhat(const ColoringParams& params, const BitFunction& h, std::span<const int> u);

/// The constructive witness: a function a and, for every color b, subcells of
/// size floor(ell/2) on which a is constant and whose constants sum to b mod N.
///
/// Subcells are derived on demand from the construction's choices:
/// cells outside the majority class keep a fixed constant subcell, cells in the
/// class take their 1-part when inside J(b) (the first r(b) class members) and
/// their 0-part otherwise.
class ColoringWitness {
 public:
  const BitFunction& a() const noexcept { return a_; }
  int ell() const noexcept { return ell_; }
  int half() const noexcept { return ell_ / 2; }
  /// Indices i with h_i = a (the majority class I), increasing.
  const std::vector<int>& majority() const noexcept { return majority_; }
  /// Sum of the constants j_i over cells outside the class.
  int fixed_sum() const noexcept { return fixed_sum_; }

  /// |J| for color b, or nullopt when the congruence has no solution inside I.
  std::optional<int> class_ones(int b) const;
  bool covers(int b) const { return class_ones(b).has_value(); }
  /// c_i^b; throws PreconditionError when b is not covered.
  const std::vector<int>& subcell(int b, int i) const;
  std::vector<std::vector<int>> subcells(int b) const;

 private:
  friend std::optional<ColoringWitness> try_find_witness(const ColoringParams&, const CellFamily&);

  int N_ = 2;
  int ell_ = 2;
  BitFunction a_;
  std::vector<int> majority_;
  std::vector<int> rank_in_class_;  // position in majority_ or -1
  int fixed_sum_ = 0;
  std::vector<std::vector<int>> zeros_;  // for class members: a == 0 part; otherwise the constant subcell
  std::vector<std::vector<int>> ones_;   // for class members: a == 1 part
};

/// Runs the construction without checking the hypothesis. Returns nullopt only
/// if the family is malformed; colors the congruence step cannot reach are
/// reported through ColoringWitness::covers.
std::optional<ColoringWitness> try_find_witness(const ColoringParams& params, const CellFamily& family);

/// As try_find_witness, but requires the hypothesis and a witness covering every color.
ColoringWitness find_witness(const ColoringParams& params, const CellFamily& family);

/// Independent check of a witness: subcell sizes and inclusion, constancy of a
/// on every subcell, and the determined color. Returns a description of the
/// first defect, if any.
std::optional<std::string> check_witness(const ColoringParams& params, const CellFamily& family,
                                         const ColoringWitness& witness);

struct ColoringReport {
  std::size_t families_checked = 0;
  std::size_t failures = 0;
  std::size_t uncovered_colors = 0;
  std::optional<std::string> first_failure;
  double elapsed_ms = 0.0;
};

struct ColoringOptions {
  bool exhaustive = true;
  std::size_t budget = 10'000'000;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  /// Run even if the hypothesis fails; uncovered colors are then counted, not asserted.
  bool probe = false;
  unsigned workers = 1;
};

/// Number of cell families over every ell in [2, M] (as a double, may be huge).
double family_count(const ColoringParams& params);

/// For every ell in [2, M] and every (or sampled) family, runs the construction
/// and checks the witness independently.
ColoringReport verify_otimes(const ColoringParams& params, const ColoringOptions& options = {});

}  // namespace creature
