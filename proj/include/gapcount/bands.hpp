#pragma once

// Floquet band structure of a periodic Jacobi background.
//
// With the one-period transfer matrix M(lambda), the discriminant
// Delta(lambda) = tr M(lambda) is a polynomial of degree p and the spectrum
// of the background is E = { lambda : |Delta(lambda)| <= 2 }.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gapcount/operators.hpp"

namespace gapcount {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept { return hi - lo; }
  bool contains_open(double x) const noexcept { return lo < x && x < hi; }
};

enum class EdgeSide { kLeft, kRight };

struct BandEdge {
  std::size_t band = 0;
  EdgeSide side = EdgeSide::kLeft;
  double lambda = 0.0;
  double slope = 0.0;  // Delta'(lambda)
};

/// A connected component of R \ E. Exterior components have an infinite end.
struct SpectralGap {
  std::size_t index = 0;  // 0 = below the spectrum, bands.size() = above it
  Interval range;
  bool exterior = false;
};

class BandSet {
 public:
  BandSet() = default;
  BandSet(std::vector<Interval> bands, std::vector<BandEdge> edges, std::vector<double> closed_gaps);

  const std::vector<Interval>& bands() const noexcept { return bands_; }
  const std::vector<BandEdge>& edges() const noexcept { return edges_; }
  /// Points where two bands touch (zero-width gaps); not reported as gaps.
  const std::vector<double>& closed_gaps() const noexcept { return closed_gaps_; }

  /// Open gaps between consecutive bands.
  std::vector<Interval> gaps() const;
  /// All components of R \ E: exterior below, interior gaps, exterior above.
  std::vector<SpectralGap> components() const;

  double min() const { return bands_.front().lo; }
  double max() const { return bands_.back().hi; }

  /// dist(lambda, E); zero on the bands.
  double distance(double lambda) const;
  /// Index into components() of the component containing lambda, if any.
  std::optional<std::size_t> component_of(double lambda) const;

 private:
  std::vector<Interval> bands_;
  std::vector<BandEdge> edges_;
  std::vector<double> closed_gaps_;
};

/// Transfer matrix over sites 0..p-1 acting on (u_0, u_{-1}) -> (u_p, u_{p-1}).
struct TransferMatrix {
  double m11, m12, m21, m22;
  double trace() const noexcept { return m11 + m22; }
};

TransferMatrix transfer_matrix(const PeriodicBackground& bg, double lambda);

double discriminant(const PeriodicBackground& bg, double lambda);

/// Delta(lambda) and Delta'(lambda).
std::pair<double, double> discriminant_with_slope(const PeriodicBackground& bg, double lambda);

/// Batched evaluation through the active SIMD kernel.
void discriminants(const PeriodicBackground& bg, std::span<const double> lambdas, std::span<double> out);

/// Modulus of the decaying Floquet multiplier (per period): |x| < 1 off the
/// bands, 1 on them. x + 1/x = Delta(lambda).
double floquet_decay(const PeriodicBackground& bg, double lambda);

/// Band edges to within tol by bisection on Delta -+ 2 over a coarse grid.
BandSet compute_bands(const PeriodicBackground& bg, double tol = 1e-12);

struct BandEdgeSolution {
  double edge = 0.0;
  std::vector<double> u;          // u_0 .. u_p, normalized to max |u_n| = 1
  double u_before = 0.0;          // u_{-1}, same normalization
  int floquet_multiplier = 1;     // u_{n+p} = multiplier * u_n
  std::vector<long> resonance_sites;  // n in [0, p) with u_n = 0

  bool is_resonance(long n, std::size_t period) const;
  /// u_n for any site by (anti)periodic extension.
  double at(long n) const;
};

/// Bounded solution of (J0 - edge) u = 0 at a band edge.
BandEdgeSolution band_edge_solution(const PeriodicBackground& bg, double edge, double tol = 1e-9,
                                    double resonance_tol = 1e-8);

}  // namespace gapcount
