#pragma once

// Green's functions of a periodic background off its spectrum,
//   G(n, m; lambda) = <delta_n, (J0 - lambda)^{-1} delta_m>,
// the Dirichlet variant with the reference site decoupled,
//   G^D(n, m) = G(n, m) - G(n, r) G(r, m) / G(r, r),
// and empirical near-edge bounds on both.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "gapcount/bands.hpp"
#include "gapcount/operators.hpp"

namespace gapcount {

enum class GreenMethod { kAuto, kTruncatedSolve, kFreeAnalytic };

const char* to_string(GreenMethod m);

struct GreenEvaluation {
  double lambda = 0.0;
  std::vector<std::pair<long, long>> pairs;
  std::vector<double> values;  // values[i] = G(pairs[i])
  GreenMethod method = GreenMethod::kTruncatedSolve;
  long truncation = 0;  // window size N, 0 for the analytic method
};

/// Window size N such that sites with |n| <= max_site sit at least N/4 from
/// the boundary and the truncation error there is below tol. The error is
/// governed by |x|^{N / 4p} / dist(lambda, E), x the decaying Floquet multiplier.
long green_required_size(const PeriodicBackground& bg, double lambda, double tol, long max_site);

/// G(n, m; lambda) for a period-1 background in closed form:
/// x^{|n-m|} / (a (x - 1/x)) with x + 1/x = (lambda - b) / a and |x| < 1.
double free_green(double a, double b, long n, long m, double lambda);

/// Single entry by a truncated solve. size 0 picks the size automatically;
/// a given size below the requirement raises SizeError with the suggestion.
double green_function(const PeriodicBackground& bg, long n, long m, double lambda, long size, double tol);

GreenEvaluation green_evaluate(const PeriodicBackground& bg, const std::vector<std::pair<long, long>>& pairs,
                               double lambda, long size, double tol, GreenMethod method = GreenMethod::kAuto);

/// G^D(n, m; lambda) with reference site `reference`. Raises ResonanceError
/// when |G(r, r)| <= tol.
double dirichlet_green(const PeriodicBackground& bg, long n, long m, double lambda, long size, double tol,
                       long reference = 0);

/// A site in [0, p) where the band-edge solution at `edge` has its largest modulus.
long nonresonant_site(const PeriodicBackground& bg, double edge);

/// Zero of lambda -> G(r, r; lambda) inside the gap, i.e. the eigenvalue of
/// the background with site r decoupled. G(r, r) increases across a gap, so
/// there is at most one.
std::optional<double> dirichlet_gap_eigenvalue(const PeriodicBackground& bg, Interval gap, long reference,
                                               double tol);

enum class GapEdge { kLower, kUpper };

struct GreenScanOptions {
  std::size_t component = 1;   // index into BandSet::components()
  GapEdge edge = GapEdge::kLower;
  std::size_t points = 50;
  double epsilon = 0.0;        // 0: min(0.1, width / 4)
  double delta_min = 0.0;      // 0: epsilon * 1e-5
  long n_max = 0;              // 0: eight decay lengths at delta_min
  std::optional<long> reference;  // default: nonresonant_site(edge)
  double tol = 1e-10;
};

struct GreenScanRow {
  double lambda = 0.0;
  double delta = 0.0;     // |lambda - edge|
  double distance = 0.0;  // dist(lambda, E)
  long truncation = 0;
  double q52 = 0.0;  // max_n max(|G(n,n)|, |G(n,r)|) dist^{1/2}
  double q54 = 0.0;  // max_{n != r} |G^D(n,n)| / (|n - r| + 1)
  double q55 = 0.0;  // max_{n != r} |G^D(n,n)| delta^{1/2}
};

struct ConstantFit {
  double value = 0.0;  // maximum over the grid
  double slope = 0.0;  // least-squares slope of log q against log delta
  bool bounded = false;  // |slope| < 0.1
};

struct GreenScanReport {
  double edge = 0.0;
  int direction = 1;  // lambda = edge + direction * delta
  long reference = 0;
  long n_max = 0;
  std::vector<GreenScanRow> rows;
  ConstantFit c52, c54, c55;
  bool pointwise_dominated = false;  // min(C54 (|n-r|+1), C55 delta^{-1/2}) >= |G^D(n,n)|
  std::optional<double> dirichlet_eigenvalue;
};

GreenScanReport scan_green_bounds(const PeriodicBackground& bg, const GreenScanOptions& opts);

/// Log-log least-squares slope and the maximum of q over the grid.
ConstantFit fit_constant(const std::vector<double>& delta, const std::vector<double>& q);

}  // namespace gapcount
