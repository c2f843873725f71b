#include <doctest.h>

#include "gapcount/bands.hpp"
#include "gapcount/error.hpp"
#include "gapcount/green.hpp"
#include "oracle.hpp"

using namespace gapcount;

namespace {

const PeriodicBackground kP2({1.0, 1.0}, {1.0, -1.0});

// (J - lambda)^{-1} on sites -half..half, optionally with one site removed.
oracle::Matrix truncated_resolvent(const PeriodicBackground& bg, long half, double lambda, std::optional<long> drop,
                                   std::vector<long>& sites) {
  sites.clear();
  for (long n = -half; n <= half; ++n)
    if (!drop || n != *drop) sites.push_back(n);
  oracle::Matrix m = oracle::zeros(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) {
    m[i][i] = bg.b_at(sites[i]) - lambda;
    if (i + 1 < sites.size() && sites[i + 1] == sites[i] + 1) m[i][i + 1] = m[i + 1][i] = bg.a_at(sites[i]);
  }
  return oracle::inverse(m);
}

std::size_t pos(const std::vector<long>& sites, long n) {
  return static_cast<std::size_t>(std::find(sites.begin(), sites.end(), n) - sites.begin());
}

}  // namespace

TEST_SUITE("green") {
  TEST_CASE("free lattice closed form") {
    for (double l : {2.5, -2.5, 3.7, -2.01}) {
      for (auto [n, m] : {std::pair{0L, 0L}, std::pair{0L, 3L}, std::pair{-2L, 5L}}) {
        CHECK(free_green(1.0, 0.0, n, m, l) == doctest::Approx(oracle::free_resolvent(n, m, l)).epsilon(1e-13));
        CHECK(green_function(PeriodicBackground::free(), n, m, l, 0, 1e-12) ==
              doctest::Approx(oracle::free_resolvent(n, m, l)).epsilon(1e-9));
      }
    }
    // Scaled lattice a = 2, b = 1: G(lambda) = G_free((lambda - 1) / 2) / 2.
    CHECK(free_green(2.0, 1.0, 1, 4, 6.0) == doctest::Approx(oracle::free_resolvent(1, 4, 2.5) / 2.0).epsilon(1e-13));
    CHECK_THROWS_AS(free_green(1.0, 0.0, 0, 0, 1.0), InputError);
  }

  TEST_CASE("period two resolvent matches a dense inverse") {
    std::vector<long> sites;
    const auto inv = truncated_resolvent(kP2, 80, 0.0, std::nullopt, sites);
    for (auto [n, m] : {std::pair{0L, 0L}, std::pair{1L, 1L}, std::pair{-3L, 2L}, std::pair{4L, 7L}})
      CHECK(green_function(kP2, n, m, 0.0, 0, 1e-12) == doctest::Approx(inv[pos(sites, n)][pos(sites, m)]).epsilon(1e-9));
    const GreenEvaluation ev = green_evaluate(kP2, {{0, 0}, {2, 5}, {5, 2}}, 0.0, 0, 1e-12);
    CHECK(ev.method == GreenMethod::kTruncatedSolve);
    CHECK(ev.values[1] == doctest::Approx(ev.values[2]).epsilon(1e-12));
    CHECK(ev.truncation >= 20);
  }

  TEST_CASE("Dirichlet Green's function is the resolvent with the reference site removed") {
    std::vector<long> sites;
    const double l = 0.3;
    const auto inv = truncated_resolvent(kP2, 80, l, 0L, sites);
    for (auto [n, m] : {std::pair{1L, 1L}, std::pair{-2L, -1L}, std::pair{3L, 6L}})
      CHECK(dirichlet_green(kP2, n, m, l, 0, 1e-12) == doctest::Approx(inv[pos(sites, n)][pos(sites, m)]).epsilon(1e-8));
    // Across the removed site the two half lines decouple.
    CHECK(std::fabs(dirichlet_green(kP2, -2, 3, l, 0, 1e-12)) < 1e-12);
    CHECK(std::fabs(dirichlet_green(kP2, 0, 4, l, 0, 1e-12)) < 1e-12);
  }

  TEST_CASE("Dirichlet eigenvalues in gaps") {
    // With both reference sites of the symmetric period-two cell, G(r, r) keeps one sign
    // across the gap, so there is nothing to find.
    for (long r : {0L, 1L}) {
      std::vector<long> sites;
      const auto lo = truncated_resolvent(kP2, 120, -0.9, std::nullopt, sites);
      const auto hi = truncated_resolvent(kP2, 120, 0.9, std::nullopt, sites);
      CHECK((lo[pos(sites, r)][pos(sites, r)] > 0) == (hi[pos(sites, r)][pos(sites, r)] > 0));
      CHECK_FALSE(dirichlet_gap_eigenvalue(kP2, {-1.0, 1.0}, r, 1e-12).has_value());
    }
    // A period-three background: every zero found is an eigenvalue of the decoupled truncation.
    const PeriodicBackground bg({1.0, 0.6, 1.3}, {0.0, 1.5, -1.0});
    const BandSet bands = compute_bands(bg);
    std::size_t found = 0;
    for (const Interval& gap : bands.gaps()) {
      for (long r = 0; r < 3; ++r) {
        const auto z = dirichlet_gap_eigenvalue(bg, gap, r, 1e-12);
        if (!z) continue;
        ++found;
        CHECK(gap.contains_open(*z));
        std::vector<long> sites;
        for (long n = -90; n <= 90; ++n)
          if (n != r) sites.push_back(n);
        oracle::Matrix m = oracle::zeros(sites.size());
        for (std::size_t i = 0; i < sites.size(); ++i) {
          m[i][i] = bg.b_at(sites[i]);
          if (i + 1 < sites.size() && sites[i + 1] == sites[i] + 1) m[i][i + 1] = m[i + 1][i] = bg.a_at(sites[i]);
        }
        const auto ev = oracle::eigenvalues(m);
        double best = 1.0;
        for (double v : ev) best = std::min(best, std::fabs(v - *z));
        CHECK(best < 1e-8);
        CHECK_THROWS_AS(dirichlet_green(bg, r + 1, r + 1, *z, 0, 1e-6, r), ResonanceError);
      }
    }
    CHECK(found >= 1);
  }

  TEST_CASE("truncation size and its preconditions") {
    const long far = green_required_size(kP2, 0.0, 1e-10, 0);
    const long near = green_required_size(kP2, 0.999, 1e-10, 0);
    CHECK(near > far);
    CHECK(green_required_size(kP2, 0.0, 1e-10, 100) >= 404);
    CHECK_THROWS_AS(green_function(kP2, 0, 30, 0.0, 100, 1e-10), SizeError);
    CHECK_THROWS_AS(green_function(kP2, 0, 0, 1.5, 0, 1e-10), InputError);
    CHECK_THROWS_AS(green_evaluate(kP2, {{0, 0}}, 0.0, 0, 1e-10, GreenMethod::kFreeAnalytic), InputError);
  }

  TEST_CASE("nonresonant reference site") {
    CHECK(nonresonant_site(kP2, 1.0) == 0);
    CHECK(nonresonant_site(kP2, -1.0) == 1);
  }

  TEST_CASE("log-log slope fit") {
    std::vector<double> d, q, flat;
    for (int k = 0; k < 30; ++k) {
      d.push_back(std::pow(10.0, -5.0 + k / 6.0));
      q.push_back(3.0 * std::pow(d.back(), -0.5));
      flat.push_back(2.0);
    }
    const ConstantFit steep = fit_constant(d, q);
    CHECK(steep.slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK_FALSE(steep.bounded);
    const ConstantFit ok = fit_constant(d, flat);
    CHECK(std::fabs(ok.slope) < 1e-12);
    CHECK(ok.bounded);
    CHECK(ok.value == 2.0);
  }

  TEST_CASE("near-edge scan on the period two gap") {
    GreenScanOptions o;
    o.edge = GapEdge::kLower;
    o.points = 12;
    const GreenScanReport r = scan_green_bounds(kP2, o);
    CHECK(r.edge == doctest::Approx(-1.0));
    CHECK(r.direction == 1);
    CHECK(r.reference == 1);
    REQUIRE(r.rows.size() == 12);
    CHECK(r.c52.bounded);
    CHECK(r.c54.bounded);
    CHECK(r.c55.bounded);
    CHECK(r.pointwise_dominated);
    for (const GreenScanRow& row : r.rows) CHECK(row.distance == doctest::Approx(row.delta).epsilon(1e-9));
  }
}
