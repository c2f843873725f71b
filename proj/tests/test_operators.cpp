#include <doctest.h>

#include <cmath>

#include "gapcount/error.hpp"
#include "gapcount/operators.hpp"

using namespace gapcount;

TEST_SUITE("operators") {
  TEST_CASE("periodic indexing wraps negative sites") {
    CHECK(period_index(-1, 3) == 2);
    CHECK(period_index(-3, 3) == 0);
    CHECK(period_index(7, 3) == 1);
    const PeriodicBackground bg({1.0, 2.0, 3.0}, {0.1, 0.2, 0.3});
    CHECK(bg.a_at(-1) == 3.0);
    CHECK(bg.b_at(-4) == 0.3);
  }

  TEST_CASE("background validation") {
    CHECK_THROWS_AS(PeriodicBackground({}, {}), InputError);
    CHECK_THROWS_AS(PeriodicBackground({1.0}, {0.0, 1.0}), InputError);
    CHECK_THROWS_AS(PeriodicBackground({1.0, 0.0}, {0.0, 1.0}), InvalidOperatorError);
  }

  TEST_CASE("explicit perturbations and truncation") {
    PerturbationSpec spec;
    spec.sites[0] = {0.5, 2.0};
    spec.sites[-2] = {0.0, -1.0};
    const JacobiOperator op(PeriodicBackground({1.0, 1.0}, {1.0, -1.0}), make_perturbation(spec));
    CHECK(op.b_at(0) == 3.0);
    CHECK(op.a_at(0) == 1.5);
    CHECK(op.b_at(-2) == 0.0);
    CHECK(op.perturbation().support_radius() == 2);
    CHECK(op.perturbation().trace_class());
    const TruncatedMatrix t = truncate(op, {-3, 2});
    REQUIRE(t.size() == 6);
    CHECK(t.diag()[t.index_of(0)] == 3.0);
    CHECK(t.offdiag()[t.index_of(0)] == 1.5);
    CHECK(t.diag()[t.index_of(-3)] == -1.0);
    CHECK_THROWS_AS(truncate(op, {1, 0}), InputError);

    PerturbationSpec bad;
    bad.sites[4] = {-1.0, 0.0};
    CHECK_THROWS_AS(JacobiOperator(PeriodicBackground::free(), make_perturbation(bad)), InvalidOperatorError);
  }

  TEST_CASE("tail bound dominates the brute-force tail") {
    for (auto [power, log_power] : {std::pair{2.0, 0.0}, std::pair{1.5, 0.0}, std::pair{1.0, 2.5}}) {
      SequenceGenerator g{0.7, power, log_power, true};
      CHECK(g.summable());
      for (long r : {0L, 5L, 100L}) {
        double brute = 0.0;
        for (long n = r + 1; n < 2000000; ++n) brute += 2.0 * g.magnitude(static_cast<double>(n));
        CHECK(g.tail_bound(r) >= brute);
      }
    }
    SequenceGenerator slow{1.0, 1.0, 0.0, false};
    CHECK_FALSE(slow.summable());
  }

  TEST_CASE("generators") {
    SequenceGenerator g{2.0, 2.0, 0.0, true};
    CHECK(g(0) == 2.0);
    CHECK(g(1) == -0.5);
    CHECK(g(-1) == -0.5);
    CHECK(g(2) == doctest::Approx(2.0 / 9.0));
    PerturbationSpec spec;
    spec.kind = PerturbationKind::kPowerLaw;
    spec.db = {1.0, 0.5, 0.0, false};
    CHECK_THROWS_AS(make_perturbation(spec), NonSummableError);
    spec.allow_non_summable = true;
    CHECK_FALSE(make_perturbation(spec).trace_class());
    spec.db = {1.0, 2.0, 1.0, false};
    CHECK_THROWS_AS(make_perturbation(spec), InputError);
  }

  TEST_CASE("effective radius bounds the tail") {
    PerturbationSpec spec;
    spec.kind = PerturbationKind::kPowerLaw;
    spec.db = {1.0, 2.0, 0.0, true};
    const Perturbation p = make_perturbation(spec);
    const long r = p.effective_radius(1e-3);
    CHECK(p.tail(r) < 1e-3);
    CHECK(p.tail(r - 1) >= 1e-3);
    const PerturbationNorms norms = perturbation_norms(p, 10, 0.25);
    double s = 0.0;
    for (long n = -10; n <= 10; ++n) s += std::fabs(p.db(n));
    CHECK(norms.trace_norm == doctest::Approx(s));
    CHECK(norms.log_weighted > 0.0);
  }
}
