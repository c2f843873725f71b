#include <doctest.h>

#include <random>

#include "gapcount/bands.hpp"
#include "gapcount/error.hpp"
#include "oracle.hpp"

using namespace gapcount;

TEST_SUITE("bands") {
  TEST_CASE("period two example") {
    const PeriodicBackground bg({1.0, 1.0}, {1.0, -1.0});
    for (double l : {-3.0, -1.2, 0.0, 0.4, 2.0})
      CHECK(discriminant(bg, l) == doctest::Approx(l * l - 3.0).epsilon(1e-14));
    const BandSet bs = compute_bands(bg);
    REQUIRE(bs.bands().size() == 2);
    const double s5 = std::sqrt(5.0);
    CHECK(std::fabs(bs.bands()[0].lo + s5) < 1e-12);
    CHECK(std::fabs(bs.bands()[0].hi + 1.0) < 1e-12);
    CHECK(std::fabs(bs.bands()[1].lo - 1.0) < 1e-12);
    CHECK(std::fabs(bs.bands()[1].hi - s5) < 1e-12);
    REQUIRE(bs.gaps().size() == 1);
    const auto comps = bs.components();
    REQUIRE(comps.size() == 3);
    CHECK(comps[0].exterior);
    CHECK_FALSE(comps[1].exterior);
    CHECK(comps[2].exterior);
    CHECK(bs.distance(0.5) == doctest::Approx(0.5));
    CHECK(bs.distance(1.5) == 0.0);
    CHECK(bs.component_of(0.0) == std::optional<std::size_t>(1));
    CHECK_FALSE(bs.component_of(1.5).has_value());
  }

  TEST_CASE("decay rate of the gap solution") {
    const PeriodicBackground bg({1.0, 1.0}, {1.0, -1.0});
    const double d = discriminant(bg, 0.0);  // -3
    CHECK(floquet_decay(bg, 0.0) == doctest::Approx(2.0 / (3.0 + std::sqrt(5.0))));
    CHECK(std::fabs(d + 3.0) < 1e-14);
    CHECK(floquet_decay(bg, 1.5) == doctest::Approx(1.0));
  }

  TEST_CASE("free lattice has one band [-2, 2]") {
    const BandSet bs = compute_bands(PeriodicBackground::free());
    REQUIRE(bs.bands().size() == 1);
    CHECK(bs.min() == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(bs.max() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(bs.gaps().empty());
  }

  TEST_CASE("closed gaps are reported, not opened") {
    // Period two with identical cells is the free lattice: the gap at 0 is closed.
    const BandSet bs = compute_bands(PeriodicBackground({1.0, 1.0}, {0.0, 0.0}));
    CHECK(bs.bands().size() == 1);
    REQUIRE(bs.closed_gaps().size() == 1);
    CHECK(std::fabs(bs.closed_gaps()[0]) < 1e-9);
  }

  TEST_CASE("edges of random backgrounds are discriminant roots") {
    std::mt19937_64 rng(31);
    for (std::size_t p : {3u, 4u, 5u}) {
      const auto a = oracle::random_vector(rng, p, 0.5, 1.5);
      const auto b = oracle::random_vector(rng, p, -1.5, 1.5);
      const PeriodicBackground bg(a, b);
      const BandSet bs = compute_bands(bg);
      CHECK(bs.bands().size() + bs.closed_gaps().size() == p);
      for (const BandEdge& e : bs.edges()) {
        CHECK(std::fabs(std::fabs(oracle::discriminant(a, b, e.lambda)) - 2.0) < 1e-9);
        const double h = 1e-6;
        const double fd = (oracle::discriminant(a, b, e.lambda + h) - oracle::discriminant(a, b, e.lambda - h)) / (2 * h);
        CHECK(e.slope == doctest::Approx(fd).epsilon(1e-5));
      }
      // Midpoints of bands satisfy |Delta| <= 2, midpoints of gaps do not.
      for (const Interval& band : bs.bands())
        CHECK(std::fabs(oracle::discriminant(a, b, 0.5 * (band.lo + band.hi))) <= 2.0);
      for (const Interval& gap : bs.gaps())
        CHECK(std::fabs(oracle::discriminant(a, b, 0.5 * (gap.lo + gap.hi))) > 2.0);
    }
  }

  TEST_CASE("band edge solution and resonances") {
    const PeriodicBackground bg({1.0, 1.0}, {1.0, -1.0});
    // At lambda = 1 the periodic solution has u_1 = 0: (1 - b_0) u_0 = a_0 u_1 + a_{-1} u_{-1}.
    const BandEdgeSolution s = band_edge_solution(bg, 1.0);
    REQUIRE(s.resonance_sites.size() == 1);
    CHECK(s.resonance_sites[0] == 1);
    CHECK(s.is_resonance(3, 2));
    CHECK_FALSE(s.is_resonance(2, 2));
    CHECK(std::fabs(s.at(0)) == doctest::Approx(1.0));
    const BandEdgeSolution t = band_edge_solution(bg, -1.0);
    REQUIRE(t.resonance_sites.size() == 1);
    CHECK(t.resonance_sites[0] == 0);
    CHECK_THROWS_AS(band_edge_solution(bg, 0.0), InputError);
  }
}
