#include <doctest.h>

#include "gapcount/bands.hpp"
#include "gapcount/error.hpp"
#include "gapcount/ltsums.hpp"
#include "oracle.hpp"

using namespace gapcount;

namespace {

JacobiOperator impurity_operator() {
  PerturbationSpec spec;
  spec.sites[0] = {0.3, 1.2};
  spec.sites[1] = {-0.2, -0.8};
  spec.sites[3] = {0.0, 0.6};
  spec.sites[-2] = {0.1, -0.5};
  return JacobiOperator(PeriodicBackground({1.0, 1.0}, {1.0, -1.0}), make_perturbation(spec));
}

std::vector<double> truncated_spectrum(const JacobiOperator& op, Window w) {
  std::vector<double> d, e;
  for (long n = w.lo; n <= w.hi; ++n) {
    d.push_back(op.b_at(n));
    if (n < w.hi) e.push_back(op.a_at(n));
  }
  return oracle::eigenvalues(oracle::tridiagonal(d, e));
}

double dist_p2(double l) {
  const double s5 = std::sqrt(5.0);
  if (l < -s5) return -s5 - l;
  if (l > s5) return l - s5;
  if (-1.0 < l && l < 1.0) return std::min(l + 1.0, 1.0 - l);
  return 0.0;
}

}  // namespace

TEST_SUITE("ltsums") {
  TEST_CASE("power sums equal the brute-force sums over the dense spectrum") {
    const JacobiOperator op = impurity_operator();
    const double alphas[] = {0.5, 0.6, 1.0};
    const GapReport r = gap_power_sum(op, alphas, 121);
    const auto ev = truncated_spectrum(op, r.window);
    std::size_t count = 0;
    for (double l : ev)
      if (dist_p2(l) > 1e-8) ++count;
    CHECK(r.count() == count);
    for (double a : alphas) {
      double s = 0.0;
      for (double l : ev)
        if (dist_p2(l) > 1e-8) s += std::pow(dist_p2(l), a);
      CHECK(r.sum(a).total == doctest::Approx(s).epsilon(1e-8));
    }
    CHECK_THROWS_AS(r.sum(0.7), InputError);
  }

  TEST_CASE("window must cover the perturbation") {
    PerturbationSpec spec;
    spec.sites[30] = {0.0, 2.0};
    const JacobiOperator op(PeriodicBackground({1.0, 1.0}, {1.0, -1.0}), make_perturbation(spec));
    CHECK_THROWS_AS(gap_power_sum(op, 0.6, 80), SizeError);
    CHECK_NOTHROW(gap_power_sum(op, 0.6, 121));
  }

  TEST_CASE("sum identity with an explicit function") {
    const JacobiOperator op = impurity_operator();
    const auto f = SumFunction::explicit_function(
        "quadratic", [](double s) { return s * s + s; }, [](double s) { return 2.0 * s + 1.0; });
    const SumIdentityResult r = check_sum_identity(op, -1.0, 0.5, f, 201);
    const auto ev = truncated_spectrum(op, Window::of_size(201));
    double lhs = 0.0;
    std::size_t k = 0;
    for (double l : ev)
      if (-1.0 < l && l < -0.5) {
        lhs += (l + 1.0) * (l + 1.0) + (l + 1.0);
        ++k;
      }
    CHECK(r.eigenvalues.size() == k);
    CHECK(r.lhs == doctest::Approx(lhs).epsilon(1e-9));
    CHECK(r.exact_ok);
    CHECK(r.quadrature_ok);
    const SumIdentityResult down = check_sum_identity(op, 1.0, -0.5, SumFunction::power(0.6), 201);
    CHECK(down.exact_ok);
    CHECK(down.quadrature_ok);
    CHECK(down.eigenvalues.size() >= 1);

    const auto shifted = SumFunction::explicit_function(
        "shifted", [](double s) { return s + 1.0; }, [](double) { return 1.0; });
    CHECK_THROWS_AS(check_sum_identity(op, -1.0, 0.5, shifted, 201), InputError);
    CHECK_THROWS_AS(check_sum_identity(op, -1.0, 0.0, f, 201), InputError);
  }

  TEST_CASE("verdicts") {
    CHECK(convergence_verdict({1.0, 2.0}, 1e-6, 1.5) == "insufficient");
    CHECK(convergence_verdict({1.0, 1.0 + 1e-7, 1.0 + 1.1e-7}, 1e-6, 1.5) == "stabilized");
    CHECK(convergence_verdict({1.0, 1.1, 1.11, 1.111}, 1e-6, 1.5) == "slow");
    CHECK(convergence_verdict({1.0, 1.01, 1.05}, 1e-6, 1.5) == "unstable");
    CHECK(convergence_verdict({2.0, 2.0, 2.0}, 1e-6, 1.5) == "stabilized");
  }

  TEST_CASE("hypotheses of the experiment variants are enforced") {
    const JacobiOperator op = impurity_operator();
    ConvergenceOptions o;
    o.schedule = {60, 120, 240};
    o.alpha = 0.5;
    CHECK_THROWS_AS(convergence_experiment(LtVariant::kThm13, op, o), InputError);
    CHECK_NOTHROW(convergence_experiment(LtVariant::kConjecture, op, o));
    o.alpha = 0.6;
    CHECK_THROWS_AS(convergence_experiment(LtVariant::kConjecture, op, o), InputError);
    o.schedule = {120, 60};
    CHECK_THROWS_AS(convergence_experiment(LtVariant::kThm13, op, o), InputError);

    PerturbationSpec slow;
    slow.kind = PerturbationKind::kLogWeight;
    slow.db = {1.0, 1.0, 2.0, true};
    const JacobiOperator lo(PeriodicBackground({1.0, 1.0}, {1.0, -1.0}), make_perturbation(slow));
    CHECK_FALSE(log_weighted_summable(lo.perturbation(), 0.25));
    ConvergenceOptions t14;
    t14.alpha = 0.5;
    CHECK_THROWS_AS(convergence_experiment(LtVariant::kThm14, lo, t14), NonSummableError);
    slow.db.log_power = 2.5;
    CHECK(log_weighted_summable(make_perturbation(slow), 0.25));
    CHECK(parse_lt_variant("thm14") == LtVariant::kThm14);
    CHECK_THROWS_AS(parse_lt_variant("thm99"), InputError);
  }

  TEST_CASE("experiment table layout") {
    const JacobiOperator op = impurity_operator();
    ConvergenceOptions o;
    o.schedule = {60, 120, 240};
    const ConvergenceTable t = convergence_experiment(LtVariant::kThm13, op, o);
    REQUIRE(t.totals.size() == 3);
    // three components plus one total row per size
    CHECK(t.rows.size() == 3 * 4);
    CHECK_FALSE(t.rows[3].component.has_value());
    CHECK_FALSE(t.rows[3].delta_prev.has_value());
    CHECK(t.rows[7].delta_prev.has_value());
    CHECK(t.verdict == t.rows.back().verdict);
    for (std::size_t i = 0; i < 3; ++i) {
      const GapReport r = gap_power_sum(op, 0.6, o.schedule[i]);
      CHECK(t.totals[i] == r.sum(0.6).total);
    }
  }

  TEST_CASE("trace majorant on a short impurity") {
    const JacobiOperator op = impurity_operator();
    const MajorantReport m = trace_majorant(op, 0.6, 10, 1e-10);
    CHECK(m.edges.size() == 4);
    CHECK(m.plus_trace > 0.0);
    for (const EdgeMajorant& e : m.edges) {
      CHECK(e.integrals.size() == 6);
      CHECK(e.tail_exponent > -0.98);
    }
    CHECK(m.finite_looking);
  }
}
