#include <doctest.h>

#include <random>

#include "gapcount/dense.hpp"
#include "gapcount/error.hpp"
#include "gapcount/inertia.hpp"
#include "gapcount/tridiagonal.hpp"
#include "oracle.hpp"

using namespace gapcount;

namespace {

SymTridiagonal random_tridiagonal(std::mt19937_64& rng, std::size_t n) {
  return {oracle::random_vector(rng, n, -2.0, 2.0), oracle::random_vector(rng, n - 1, 0.2, 1.2)};
}

}  // namespace

TEST_SUITE("inertia") {
  TEST_CASE("counts below shifts equal the oracle counts") {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 15; ++rep) {
      const SymTridiagonal t = random_tridiagonal(rng, 5 + rng() % 60);
      const auto ev = oracle::eigenvalues(oracle::tridiagonal(t.diag, t.off));
      const auto shifts = oracle::random_vector(rng, 25, -4.0, 4.0);
      const auto counts = count_below(t.view(), shifts);
      for (std::size_t k = 0; k < shifts.size(); ++k) {
        const auto expect = std::count_if(ev.begin(), ev.end(), [&](double l) { return l < shifts[k]; });
        CHECK(counts[k].count == static_cast<std::size_t>(expect));
        CHECK(count_below(t.view(), shifts[k]) == static_cast<std::size_t>(expect));
      }
    }
  }

  TEST_CASE("eigenvalues in an interval match the oracle within tol") {
    std::mt19937_64 rng(22);
    const SymTridiagonal t = random_tridiagonal(rng, 80);
    const auto ev = oracle::eigenvalues(oracle::tridiagonal(t.diag, t.off));
    const double tol = 1e-11;
    const auto got = eigs_in_interval(t.view(), {-1.0, 1.5}, tol);
    std::vector<double> expect;
    for (double l : ev)
      if (-1.0 < l && l < 1.5) expect.push_back(l);
    REQUIRE(got.size() == expect.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::fabs(got[i] - expect[i]) <= 1e-9);
    const auto all = eigenvalues(t.view(), tol);
    REQUIRE(all.size() == ev.size());
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(std::fabs(all[i] - ev[i]) <= 1e-9);
  }

  TEST_CASE("interval count flags eigenvalues near the endpoints") {
    // diag(0, 1, 2) has eigenvalues exactly 0, 1, 2.
    const SymTridiagonal t{{0.0, 1.0, 2.0}, {0.0, 0.0}};
    const CountResult r = count_in_interval(t.view(), {1.0, 3.0}, 1e-9);
    CHECK(r.count == 1);
    CHECK(r.lo_flag);
    CHECK_FALSE(r.hi_flag);
    const CountResult inner = count_in_interval(t.view(), {0.5, 1.5}, 1e-9);
    CHECK(inner.count == 1);
    CHECK_FALSE(inner.lo_flag);
    CHECK_THROWS_AS(count_in_interval(t.view(), {1.0, 1.0}, 1e-9), InputError);
  }

  TEST_CASE("free lattice truncation has the sine spectrum") {
    const std::size_t n = 50;
    const SymTridiagonal t{std::vector<double>(n, 0.0), std::vector<double>(n - 1, 1.0)};
    const auto ev = eigenvalues(t.view(), 1e-13);
    for (std::size_t k = 1; k <= n; ++k)
      CHECK(ev[n - k] == doctest::Approx(2.0 * std::cos(M_PI * k / (n + 1.0))).epsilon(1e-11));
  }

  TEST_CASE("dense counts") {
    std::mt19937_64 rng(23);
    const SymTridiagonal t = random_tridiagonal(rng, 30);
    const auto ev = oracle::eigenvalues(oracle::tridiagonal(t.diag, t.off));
    const Eigen::MatrixXd d = to_dense(t.view());
    CHECK(dense_count_in_interval(d, {-0.5, 0.7}, 1e-12).count == oracle::count_in(ev, -0.5, 0.7));
    const auto ge = std::count_if(ev.begin(), ev.end(), [](double l) { return l >= 0.3; });
    CHECK(dense_count_ge(d, 0.3) == static_cast<std::size_t>(ge));
    Eigen::MatrixXd bad = d;
    bad(0, 1) += 1e-3;
    CHECK_THROWS_AS(dense_count_ge(bad, 0.0), InputError);
  }
}

TEST_SUITE("tridiagonal") {
  TEST_CASE("shifted solve and resolvent columns match the oracle inverse") {
    std::mt19937_64 rng(24);
    const SymTridiagonal t = random_tridiagonal(rng, 25);
    const double shift = 7.0;  // outside the Gershgorin interval
    auto m = oracle::tridiagonal(t.diag, t.off);
    for (std::size_t i = 0; i < m.size(); ++i) m[i][i] -= shift;
    const auto inv = oracle::inverse(m);
    for (std::size_t j : {0u, 12u, 24u}) {
      const auto col = resolvent_column(t.view(), shift, j);
      for (std::size_t i = 0; i < col.size(); ++i) CHECK(col[i] == doctest::Approx(inv[i][j]).epsilon(1e-12));
    }
    const auto diag = resolvent_diagonal(t.view(), shift);
    for (std::size_t i = 0; i < diag.size(); ++i) CHECK(diag[i] == doctest::Approx(inv[i][i]).epsilon(1e-12));
    const std::vector<double> rhs = oracle::random_vector(rng, 25, -1, 1);
    const auto x = solve_shifted(t.view(), shift, rhs);
    for (std::size_t i = 0; i < x.size(); ++i) {
      double s = 0;
      for (std::size_t k = 0; k < x.size(); ++k) s += inv[i][k] * rhs[k];
      CHECK(x[i] == doctest::Approx(s).epsilon(1e-11));
    }
  }

  TEST_CASE("Gershgorin interval encloses the spectrum") {
    std::mt19937_64 rng(25);
    const SymTridiagonal t = random_tridiagonal(rng, 40);
    const auto ev = oracle::eigenvalues(oracle::tridiagonal(t.diag, t.off));
    const auto [lo, hi] = gershgorin_interval(t.view());
    CHECK(lo <= ev.front());
    CHECK(ev.back() <= hi);
  }
}
