#include <sstream>

#include "creature/errors.hpp"
#include "creature/norm_calculus.hpp"
#include "doctest.h"

using namespace creature;

namespace {

Real f(const char* lambda, const char* drop, int k) {
  return f_k(LogLogCard::exact(parse_rational(lambda)), NormParams{k, parse_rational(drop)});
}

bool close(const Real& a, const Real& b, const char* tol = "1e-30") { return abs(a - b) < Real(tol); }

}  // namespace

TEST_CASE("f_k against frozen high-precision references") {
  // lambda, drop, k, f_k(x, i), f_k(x/2, i); generated by tests/oracles/fk_reference.py
  struct Ref {
    const char* lambda;
    const char* drop;
    int k;
    const char* fx;
    const char* fhalf;
  };
  const Ref refs[] = {
      {"6", "2", 1, "2.0", "1.991782103514363070960917168639479241127"},
      {"20", "4", 2, "2.0", "1.999999937970338375263272526643924339946"},
      {"20", "4", 1, "4.0", "3.999999875940676750526545053287848679892"},
      {"36", "4", 2, "2.5", "2.49999999999952675148483162172314201871"},
      {"7/3", "0", 1, "1.222392421336447925988230373284014299881", "1.010237394698643518893033929465203281312"},
      {"101/3", "1/3", 3, "1.686297896351189504762299971676987947657", "1.686297896349663090001057324250030465907"},
      {"1024", "0", 5, "2.0", "2.0"},
      {"65537", "12", 16, "0.9999848642564463854987040511025060045559", "0.9999848642564463854987040511025060045559"},
      {"17/5", "1/2", 1, "1.536052900240209772849453895138594586612", "1.462793850572990564104096198937070396803"},
      {"100", "11/2", 7, "0.9374632034601532359718837355821829049886", "0.9374632034601532359718837355821804228864"},
  };
  for (const Ref& r : refs) {
    CAPTURE(r.lambda);
    CAPTURE(r.drop);
    CAPTURE(r.k);
    LogLogCard x = LogLogCard::exact(parse_rational(r.lambda));
    NormParams params{r.k, parse_rational(r.drop)};
    CHECK(close(f_k(x, params), Real(r.fx)));
    CHECK(close(f_k(x.halved(), params), Real(r.fhalf)));
  }
}

TEST_CASE("f_k examples") {
  // x = 8: lambda = log2(3) < 2, so the fallback value applies.
  LogLogCard eight = LogLogCard::of_cardinality(BigInt(8));
  CHECK_FALSE(eight.is_exact());
  CHECK(f_k(eight, NormParams{2, 0}) == 1);
  CHECK(close(f("6", "2", 1), Real(2)));
  CHECK(close(f("20", "4", 2), Real(2)));
}

TEST_CASE("log-regime boundary is decided exactly") {
  CHECK(in_log_regime(LogLogCard::exact(6), Rational(4)));
  CHECK_FALSE(in_log_regime(LogLogCard::exact(6), parse_rational("4.000001")));
  CHECK(f("6", "4", 1) == 1);
  CHECK(f("6", "4", 3) == Real(1) / 3);
}

TEST_CASE("halving inequalities at the worked points") {
  SUBCASE("clause 2: j = (lambda + i)/2 drops the norm by 1/k") {
    Rational j = (Rational(20) + 4) / 2;
    CHECK(j == 12);
    CHECK(close(f_k(LogLogCard::exact(20), NormParams{1, j}), Real(3)));
    CHECK(close(f("20", "4", 1) - 1, Real(3)));
  }
  SUBCASE("clause 4 at its boundary lambda = 4 + i") {
    // x = 2^(2^8), i = 4, z with lambda_z = (8 + 4)/2 = 6.
    CHECK(close(f("6", "4", 1), Real(1)));
    CHECK(close(f("8", "4", 1) - 1, Real(1)));
  }
  SUBCASE("clause 1 where both sides fall back") {
    LogLogCard x = LogLogCard::exact(3);
    NormParams params{3, 2};
    CHECK(f_k(x, params) == 1);
    CHECK(f_k(x.halved(), params) == 1);
    CHECK(f_k(x.halved(), params) >= f_k(x, params) - Real(1) / 3);
  }
}

TEST_CASE("k_n") {
  CHECK(k_n(LogLogCard::exact(10)) == 2);
  CHECK(k_n(LogLogCard::exact(16)) == 2);
  CHECK(k_n(LogLogCard::exact(1024)) == 3);
  CHECK(k_n(LogLogCard::exact(65537)) == 4);
  CHECK(k_n(LogLogCard::exact(1024), Rational(2000)) == 2);
  CHECK(k_n(LogLogCard::exact(20), Rational(4)) == 2);  // max k = 4 (2^4 < 20)
  CHECK(k_n(LogLogCard::exact(257), Rational(4)) == 2);  // max k = 8
  CHECK(k_n(LogLogCard::exact(513), Rational(4)) == 3);  // max k = 9
  CHECK_THROWS_AS(k_n(LogLogCard::exact(10), Rational(1)), PreconditionError);
}

TEST_CASE("LogLogCard") {
  CHECK(LogLogCard::of_cardinality(BigInt(16)) == LogLogCard::exact(2));
  CHECK(LogLogCard::of_cardinality(BigInt(65536)).is_exact());
  CHECK(LogLogCard::exact(3) < LogLogCard::exact(parse_rational("7/2")));
  CHECK(LogLogCard::exact(5).halved() < LogLogCard::exact(5));
  // |x/2| = 2^(2^lambda - 1): for lambda = 1 that is 2, whose double log is 0.
  CHECK(abs(LogLogCard::exact(1).halved().value()) < Real("1e-60"));
  CHECK_THROWS_AS(LogLogCard::exact(-1), PreconditionError);
  CHECK_THROWS_AS(LogLogCard::of_cardinality(BigInt(1)), PreconditionError);
  CHECK_THROWS_AS((NormParams{0, 0}.validate()), PreconditionError);
  CHECK_THROWS_AS((NormParams{1, -1}.validate()), PreconditionError);
}

TEST_CASE("the four clauses hold on both grids") {
  for (const NormGrid& grid : {NormGrid::small(), NormGrid::standard()}) {
    NormReport report = verify_norm_lemma(grid);
    CHECK(report.violations == 0);
    for (int clause = 1; clause <= 4; ++clause) CHECK(report.checked[clause] > 0);
  }
  CHECK(NormGrid::standard().point_count() >= 10'000);
}

TEST_CASE("clause selection and CSV rows") {
  NormVerifyOptions options;
  options.clauses = {2};
  options.keep_rows = true;
  NormReport report = verify_norm_lemma(NormGrid::small(), options);
  CHECK(report.checked[1] == 0);
  CHECK(report.checked[2] == report.rows.size());
  std::ostringstream csv;
  report.write_csv(csv);
  CHECK(csv.str().rfind("lambda,i,k,clause,lhs,rhs,pass\n", 0) == 0);
}

TEST_CASE("monotonicity of f_k") {
  const NormGrid grid = NormGrid::small();
  for (int k = 1; k <= 4; ++k) {
    for (const Rational& lambda : grid.lambdas) {
      LogLogCard x = LogLogCard::exact(lambda);
      for (std::size_t a = 0; a + 1 < grid.drops.size(); ++a) {
        const Rational& i = grid.drops[a];
        const Rational& i2 = grid.drops[a + 1];
        if (i2 > lambda) continue;
        CAPTURE(k);
        // Non-increasing in k everywhere.
        CHECK(f_k(x, NormParams{k + 1, i}) <= f_k(x, NormParams{k, i}));
        // Non-increasing in i inside the log regime, and everywhere for k = 1.
        if (in_log_regime(x, i2) || k == 1) CHECK(f_k(x, NormParams{k, i2}) <= f_k(x, NormParams{k, i}));
      }
    }
  }
}

TEST_CASE("for k >= 2 the fallback value exceeds the regime boundary value") {
  // At lambda - i = 2 the log branch gives 1/k, just below it the fallback gives 1,
  // so f_k is not monotone in i across the boundary once k >= 2.
  CHECK(f("6", "4", 2) == Real(1) / 2);
  CHECK(f("6", "9/2", 2) == 1);
}
