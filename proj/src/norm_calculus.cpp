#include "creature/norm_calculus.hpp"

#include <cmath>
#include <map>
#include <ostream>

#include "creature/errors.hpp"

namespace creature {

LogLogCard LogLogCard::exact(const Rational& lambda) {
  if (lambda < 0) throw PreconditionError("double logarithm must be nonnegative, got " + creature::to_string(lambda));
  return LogLogCard(to_real(lambda), lambda);
}

LogLogCard LogLogCard::approx(const Real& lambda) { return LogLogCard(lambda, std::nullopt); }

LogLogCard LogLogCard::of_cardinality(const BigInt& x) {
  if (x < 2) throw PreconditionError("cardinality must be at least 2");
  // x = 2^e exactly with e = 2^r gives an exact lambda = r.
  if ((x & (x - 1)) == 0) {
    unsigned e = mp::msb(x);
    if ((e & (e - 1)) == 0) return exact(Rational(mp::msb(BigInt(e))));
    return approx(creature::log2(Real(e)));
  }
  return approx(creature::log2(creature::log2(Real(x))));
}

LogLogCard LogLogCard::halved() const {
  Real log_x = mp::pow(Real(2), value_);
  Real log_half = log_x - 1;
  if (log_half <= 0) return approx(-std::numeric_limits<Real>::infinity());
  return approx(creature::log2(log_half));
}

std::string LogLogCard::to_string() const {
  if (exact_) return creature::to_string(*exact_);
  return creature::to_string(value_, 30);
}

bool operator==(const LogLogCard& a, const LogLogCard& b) {
  if (a.exact_ && b.exact_) return *a.exact_ == *b.exact_;
  return a.value_ == b.value_;
}

bool operator<(const LogLogCard& a, const LogLogCard& b) {
  if (a.exact_ && b.exact_) return *a.exact_ < *b.exact_;
  return a.value_ < b.value_;
}

void NormParams::validate() const {
  if (k < 1) throw PreconditionError("norm divisor k must be >= 1");
  if (drop < 0) throw PreconditionError("drop index must be >= 0");
}

namespace {

// lambda - i, exactly when possible.
struct Gap {
  std::optional<Rational> exact;
  Real value;
};

Gap gap_of(const LogLogCard& x, const Rational& drop) {
  if (x.exact_value()) {
    Rational d = *x.exact_value() - drop;
    return {d, to_real(d)};
  }
  return {std::nullopt, x.value() - to_real(drop)};
}

bool gap_at_least(const Gap& gap, const Rational& bound) {
  return gap.exact ? *gap.exact >= bound : gap.value >= to_real(bound);
}

bool gap_above(const Gap& gap, const Rational& bound) {
  return gap.exact ? *gap.exact > bound : gap.value > to_real(bound);
}

}  // namespace

bool in_log_regime(const LogLogCard& x, const Rational& drop) { return gap_at_least(gap_of(x, drop), Rational(2)); }

Real f_k(const LogLogCard& x, const NormParams& params) {
  params.validate();
  Gap gap = gap_of(x, params.drop);
  if (!gap_at_least(gap, Rational(2))) return Real(1);
  return creature::log2(gap.value) / params.k;
}

int k_n(const LogLogCard& l_n, const Rational& threshold_lambda) {
  if (threshold_lambda < 2) throw PreconditionError("k_n threshold must be at least 2");
  if (l_n <= LogLogCard::exact(threshold_lambda)) return 2;
  // f_k(l_n, 0) > 1  <=>  2^k < lambda; lambda > 2 so k = 1 qualifies.
  Gap gap = gap_of(l_n, Rational(0));
  int max_k = 1;
  while (gap_above(gap, Rational(mp::pow(BigInt(2), static_cast<unsigned>(max_k + 1))))) ++max_k;
  int root = static_cast<int>(std::sqrt(static_cast<double>(max_k)));
  while ((root + 1) * (root + 1) <= max_k) ++root;
  while (root * root > max_k) --root;
  return root;
}

NormGrid NormGrid::standard() {
  NormGrid grid;
  for (int twice = 0; twice <= 80; ++twice) grid.lambdas.emplace_back(twice, 2);
  for (const char* extra : {"7/3", "17/5", "101/3", "48", "64", "100", "128", "255", "256", "512", "1000", "1024",
                            "4096", "65536", "65537"})
    grid.lambdas.push_back(parse_rational(extra));
  for (const char* d : {"0", "1/3", "1/2", "1", "3/2", "2", "3", "4", "11/2", "8", "12", "16", "20", "32", "100"})
    grid.drops.push_back(parse_rational(d));
  for (int k = 1; k <= 16; ++k) grid.ks.push_back(k);
  for (const char* y : {"0", "2", "9/2", "5", "10", "17", "33", "64", "130", "1024", "65536"})
    grid.y_lambdas.push_back(parse_rational(y));
  return grid;
}

NormGrid NormGrid::small() {
  NormGrid grid;
  for (const char* l : {"0", "1", "3/2", "2", "4", "6", "8", "20", "36", "1024"}) grid.lambdas.push_back(parse_rational(l));
  for (const char* d : {"0", "1/2", "2", "4", "12"}) grid.drops.push_back(parse_rational(d));
  for (int k : {1, 2, 3}) grid.ks.push_back(k);
  for (const char* y : {"2", "10", "20"}) grid.y_lambdas.push_back(parse_rational(y));
  return grid;
}

void NormReport::write_csv(std::ostream& out) const {
  out << "lambda,i,k,clause,lhs,rhs,pass\n";
  for (const NormRow& row : rows) {
    out << creature::to_string(row.lambda) << ',' << creature::to_string(row.drop) << ',' << row.k << ','
        << row.clause << ',' << creature::to_string(row.lhs, 17) << ',' << creature::to_string(row.rhs, 17) << ','
        << (row.pass ? "true" : "false") << '\n';
  }
}

namespace {

// Memoizes log2(lambda - i) on exact gaps; the verifier touches the same gap for every k.
class CachedNorm {
 public:
  Real operator()(const LogLogCard& x, const Rational& drop, int k) {
    Gap gap = gap_of(x, drop);
    if (!gap_at_least(gap, Rational(2))) return Real(1);
    if (!gap.exact) return creature::log2(gap.value) / k;
    auto it = cache_.find(*gap.exact);
    if (it == cache_.end()) it = cache_.emplace(*gap.exact, creature::log2(gap.value)).first;
    return it->second / k;
  }

 private:
  std::map<Rational, Real> cache_;
};

// Sign-exact test of f_k(x, i) against an integer m >= 1 (f > m, or f >= m when inclusive).
bool norm_beyond(const LogLogCard& x, const Rational& drop, int k, int m, bool inclusive) {
  Gap gap = gap_of(x, drop);
  if (!gap_at_least(gap, Rational(2))) return inclusive ? 1 >= m : 1 > m;
  Rational bound(mp::pow(BigInt(2), static_cast<unsigned>(k * m)));
  return inclusive ? gap_at_least(gap, bound) : gap_above(gap, bound);
}

}  // namespace

NormReport verify_norm_lemma(const NormGrid& grid, const NormVerifyOptions& options) {
  NormReport report;
  CachedNorm norm;
  bool want[5] = {false, false, false, false, false};
  for (int c : options.clauses) {
    if (c < 1 || c > 4) throw PreconditionError("clause must be in 1..4");
    want[c] = true;
  }
  const Real tol(kEqualityTolerance);
  const Real slack(kInequalitySlack);

  auto record = [&](NormRow row) {
    ++report.checked[row.clause];
    if (!row.pass) {
      ++report.violations;
      if (!report.first_violation) report.first_violation = row;
    }
    if (options.keep_rows || !row.pass) report.rows.push_back(std::move(row));
  };

  for (const Rational& lambda : grid.lambdas) {
    const LogLogCard x = LogLogCard::exact(lambda);
    const LogLogCard half_x = x.halved();
    for (const Rational& drop : grid.drops) {
      if (drop > lambda) continue;
      const Rational mid = (lambda + drop) / 2;
      // f_k(x/2, i) only varies with k through the divisor.
      const bool half_in_regime = in_log_regime(half_x, drop);
      const Real half_log = half_in_regime ? creature::log2(half_x.value() - to_real(drop)) : Real(1);
      for (int k : grid.ks) {
        ++report.grid_points;
        const Real fx = norm(x, drop, k);
        const Real target = fx - Real(1) / k;

        if (want[1]) {
          Real lhs = half_in_regime ? half_log / k : Real(1);
          record({lambda, drop, k, 1, lhs, target, lhs >= target - slack, ""});
        }
        if (want[2] && norm_beyond(x, drop, k, 2, true)) {
          Real lhs = norm(x, mid, k);
          record({lambda, drop, k, 2, lhs, target, mp::abs(lhs - target) <= tol, ""});
        }
        if (want[3] && norm_beyond(x, drop, k, 1, false)) {
          for (const Rational& y_lambda : grid.y_lambdas) {
            const LogLogCard y = LogLogCard::exact(y_lambda);
            if (!norm_beyond(y, mid, k, 1, false)) continue;
            Real lhs = norm(y, drop, k);
            record({lambda, drop, k, 3, lhs, target, lhs >= target - slack, "y=" + creature::to_string(y_lambda)});
          }
        }
        if (want[4] && lambda >= drop + 4) {
          Real lhs = norm(LogLogCard::exact(mid), drop, k);
          record({lambda, drop, k, 4, lhs, target, mp::abs(lhs - target) <= tol, ""});
        }
      }
    }
  }
  return report;
}

}  // namespace creature
