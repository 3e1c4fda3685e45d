#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "creature/numeric.hpp"

namespace creature {

/// A cardinality x >= 2 carried by lambda = log2(log2(x)), so x = 2^(2^lambda).
///
/// Values built from a rational keep the exact lambda and every regime test
/// on them is decided in exact arithmetic. Values obtained by halving or from
/// a non-tower integer only have the 256-bit approximation.
class LogLogCard {
 public:
  LogLogCard() : LogLogCard(exact(Rational(0))) {}

  static LogLogCard exact(const Rational& lambda);
  static LogLogCard approx(const Real& lambda);
  /// From an explicit cardinality x >= 2.
  static LogLogCard of_cardinality(const BigInt& x);

  const Real& value() const noexcept { return value_; }
  const std::optional<Rational>& exact_value() const noexcept { return exact_; }
  bool is_exact() const noexcept { return exact_.has_value(); }

  /// The card of x/2: lambda' = log2(2^lambda - 1). May be -infinity when x = 2.
  LogLogCard halved() const;

  std::string to_string() const;

  friend bool operator==(const LogLogCard& a, const LogLogCard& b);
  friend bool operator<(const LogLogCard& a, const LogLogCard& b);
  friend bool operator<=(const LogLogCard& a, const LogLogCard& b) { return !(b < a); }

 private:
  LogLogCard(Real value, std::optional<Rational> exact) : value_(std::move(value)), exact_(std::move(exact)) {}

  Real value_;
  std::optional<Rational> exact_;
};

struct NormParams {
  int k = 1;          // divisor, >= 1
  Rational drop = 0;  // the drop index i, >= 0

  void validate() const;
};

/// The log-norm f_k(x, i): log2(lambda - i)/k when lambda - i >= 2, and 1 otherwise.
Real f_k(const LogLogCard& x, const NormParams& params);

/// True when x lies in the logarithmic regime of f_k for drop i (lambda - i >= 2).
bool in_log_regime(const LogLogCard& x, const Rational& drop);

/// Slot divisor: 2 when lambda(l_n) <= threshold, otherwise
/// floor(sqrt(max{k >= 1 : f_k(l_n, 0) > 1})).
int k_n(const LogLogCard& l_n, const Rational& threshold_lambda = Rational(16));

inline constexpr double kEqualityTolerance = 1e-9;
inline constexpr double kInequalitySlack = 1e-9;

struct NormGrid {
  std::vector<Rational> lambdas;
  std::vector<Rational> drops;
  std::vector<int> ks;
  /// Second cardinalities y for the comparison clause.
  std::vector<Rational> y_lambdas;

  static NormGrid standard();
  static NormGrid small();
  std::size_t point_count() const { return lambdas.size() * drops.size() * ks.size(); }
};

struct NormRow {
  Rational lambda;
  Rational drop;
  int k = 1;
  int clause = 0;
  Real lhs;
  Real rhs;
  bool pass = true;
  std::string note;
};

struct NormReport {
  std::size_t grid_points = 0;
  std::size_t checked[5] = {0, 0, 0, 0, 0};  // index by clause 1..4
  std::size_t violations = 0;
  std::vector<NormRow> rows;
  std::optional<NormRow> first_violation;

  std::size_t total_checked() const { return checked[1] + checked[2] + checked[3] + checked[4]; }
  void write_csv(std::ostream& out) const;
};

struct NormVerifyOptions {
  std::vector<int> clauses = {1, 2, 3, 4};
  bool keep_rows = false;
};

/// Checks the four halving inequalities/identities of the log-norm on every
/// grid point whose hypotheses hold.
///   (1) f_k(x/2, i) >= f_k(x, i) - 1/k
///   (2) f_k(x, i) >= 2, j = (lambda + i)/2  =>  f_k(x, j) = f_k(x, i) - 1/k
///   (3) min{f_k(x, i), f_k(y, j)} > 1       =>  f_k(y, i) >= f_k(x, i) - 1/k
///   (4) lambda >= 4 + i, lambda_z = (lambda + i)/2  =>  f_k(z, i) = f_k(x, i) - 1/k
NormReport verify_norm_lemma(const NormGrid& grid, const NormVerifyOptions& options = {});

}  // namespace creature
