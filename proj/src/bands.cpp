#include "gapcount/bands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gapcount/error.hpp"
#include "gapcount/kernels/kernels.hpp"

namespace gapcount {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

double disc_scalar(const PeriodicBackground& bg, double lambda) {
  double out;
  kernels::scalar::discriminants(bg.a(), bg.b(), std::span<const double>(&lambda, 1),
                                 std::span<double>(&out, 1));
  return out;
}

// Bisection for a sign change of f on [lo, hi].
template <class F>
double bisect(F&& f, double lo, double hi, double tol) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (sgn(flo) == sgn(fhi)) throw RootFindingError("bisection: no sign change on bracket", lo, hi);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (sgn(fm) == sgn(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct RootScan {
  std::vector<double> roots;  // with multiplicity
  std::vector<double> closed;
};

RootScan scan_roots(const PeriodicBackground& bg, double lo, double hi, std::size_t cells, double tol) {
  const double step = (hi - lo) / static_cast<double>(cells);
  std::vector<double> grid(cells + 1), vals(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) grid[i] = lo + step * static_cast<double>(i);
  grid[cells] = hi;
  discriminants(bg, grid, vals);

  RootScan out;
  std::vector<char> cell_has_root(cells, 0);
  for (double c : {2.0, -2.0}) {
    auto f = [&](double x) { return disc_scalar(bg, x) - c; };
    for (std::size_t i = 0; i <= cells; ++i) {
      const int si = sgn(vals[i] - c);
      if (si == 0) {
        const bool tangent = i > 0 && i < cells && sgn(vals[i - 1] - c) == sgn(vals[i + 1] - c) &&
                             sgn(vals[i - 1] - c) != 0;
        out.roots.push_back(grid[i]);
        if (tangent) {
          out.roots.push_back(grid[i]);
          out.closed.push_back(grid[i]);
        }
        if (i > 0) cell_has_root[i - 1] = 1;
        if (i < cells) cell_has_root[i] = 1;
        continue;
      }
      if (i < cells) {
        const int sj = sgn(vals[i + 1] - c);
        if (sj != 0 && si != sj) {
          out.roots.push_back(bisect(f, grid[i], grid[i + 1], tol));
          cell_has_root[i] = 1;
        }
      }
    }
  }

  // Two roots inside one cell leave no sign change at its ends; they straddle
  // an extremum of Delta with |Delta| >= 2.
  std::vector<double> slopes(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) slopes[i] = discriminant_with_slope(bg, grid[i]).second;
  auto dslope = [&](double x) { return discriminant_with_slope(bg, x).second; };
  for (std::size_t i = 0; i < cells; ++i) {
    if (cell_has_root[i]) continue;
    if (sgn(slopes[i]) * sgn(slopes[i + 1]) >= 0) continue;
    const double xs = bisect(dslope, grid[i], grid[i + 1], 0.0);
    const double v = disc_scalar(bg, xs);
    const double c = v > 0.0 ? 2.0 : -2.0;
    if (std::fabs(std::fabs(v) - 2.0) <= 64.0 * kEps * std::max(1.0, std::fabs(v))) {
      out.roots.push_back(xs);
      out.roots.push_back(xs);
      out.closed.push_back(xs);
    } else if (std::fabs(v) > 2.0 && sgn(vals[i] - c) != sgn(v - c) && sgn(vals[i + 1] - c) != sgn(v - c)) {
      auto f = [&](double x) { return disc_scalar(bg, x) - c; };
      out.roots.push_back(bisect(f, grid[i], xs, tol));
      out.roots.push_back(bisect(f, xs, grid[i + 1], tol));
    }
  }
  return out;
}

}  // namespace

BandSet::BandSet(std::vector<Interval> bands, std::vector<BandEdge> edges, std::vector<double> closed_gaps)
    : bands_(std::move(bands)), edges_(std::move(edges)), closed_gaps_(std::move(closed_gaps)) {}

std::vector<Interval> BandSet::gaps() const {
  std::vector<Interval> out;
  for (std::size_t j = 0; j + 1 < bands_.size(); ++j) out.push_back({bands_[j].hi, bands_[j + 1].lo});
  return out;
}

std::vector<SpectralGap> BandSet::components() const {
  std::vector<SpectralGap> out;
  if (bands_.empty()) return out;
  const double inf = std::numeric_limits<double>::infinity();
  out.push_back({0, {-inf, bands_.front().lo}, true});
  for (std::size_t j = 0; j + 1 < bands_.size(); ++j)
    out.push_back({j + 1, {bands_[j].hi, bands_[j + 1].lo}, false});
  out.push_back({bands_.size(), {bands_.back().hi, inf}, true});
  return out;
}

double BandSet::distance(double lambda) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& b : bands_) {
    if (lambda >= b.lo && lambda <= b.hi) return 0.0;
    d = std::min(d, lambda < b.lo ? b.lo - lambda : lambda - b.hi);
  }
  return d;
}

std::optional<std::size_t> BandSet::component_of(double lambda) const {
  for (const auto& c : components())
    if (c.range.contains_open(lambda)) return c.index;
  return std::nullopt;
}

TransferMatrix transfer_matrix(const PeriodicBackground& bg, double lambda) {
  const auto a = bg.a();
  const auto b = bg.b();
  const std::size_t p = bg.period();
  double u_cur = 1.0, u_prev = 0.0, v_cur = 0.0, v_prev = 1.0;
  for (std::size_t k = 0; k < p; ++k) {
    const double a_prev = a[(k + p - 1) % p];
    const double t = lambda - b[k];
    const double u_next = (t * u_cur - a_prev * u_prev) / a[k];
    const double v_next = (t * v_cur - a_prev * v_prev) / a[k];
    u_prev = u_cur;
    u_cur = u_next;
    v_prev = v_cur;
    v_cur = v_next;
  }
  return {u_cur, v_cur, u_prev, v_prev};
}

double discriminant(const PeriodicBackground& bg, double lambda) { return disc_scalar(bg, lambda); }

std::pair<double, double> discriminant_with_slope(const PeriodicBackground& bg, double lambda) {
  const auto a = bg.a();
  const auto b = bg.b();
  const std::size_t p = bg.period();
  // Forward-mode derivative carried alongside both canonical solutions.
  double u = 1.0, up = 0.0, du = 0.0, dup = 0.0;
  double v = 0.0, vp = 1.0, dv = 0.0, dvp = 0.0;
  for (std::size_t k = 0; k < p; ++k) {
    const double a_prev = a[(k + p - 1) % p];
    const double t = lambda - b[k];
    const double un = (t * u - a_prev * up) / a[k];
    const double dun = (u + t * du - a_prev * dup) / a[k];
    const double vn = (t * v - a_prev * vp) / a[k];
    const double dvn = (v + t * dv - a_prev * dvp) / a[k];
    up = u;
    u = un;
    dup = du;
    du = dun;
    vp = v;
    v = vn;
    dvp = dv;
    dv = dvn;
  }
  return {u + vp, du + dvp};
}

void discriminants(const PeriodicBackground& bg, std::span<const double> lambdas, std::span<double> out) {
  kernels::discriminants(bg.a(), bg.b(), lambdas, out);
}

double floquet_decay(const PeriodicBackground& bg, double lambda) {
  const double d = std::fabs(discriminant(bg, lambda));
  if (d <= 2.0) return 1.0;
  return 2.0 / (d + std::sqrt((d - 2.0) * (d + 2.0)));
}

BandSet compute_bands(const PeriodicBackground& bg, double tol) {
  if (!(tol > 0.0)) throw InputError("compute_bands: tol must be > 0");
  const auto a = bg.a();
  const auto b = bg.b();
  const std::size_t p = bg.period();
  const double amax = *std::max_element(a.begin(), a.end());
  const double lo = *std::min_element(b.begin(), b.end()) - 2.0 * amax - 1.0;
  const double hi = *std::max_element(b.begin(), b.end()) + 2.0 * amax + 1.0;

  RootScan scan;
  std::size_t cells = 1000;
  for (int refine = 0; refine <= 8; ++refine, cells *= 2) {
    scan = scan_roots(bg, lo, hi, cells, tol);
    if (scan.roots.size() == 2 * p) break;
  }
  if (scan.roots.size() != 2 * p)
    throw RootFindingError("compute_bands: found " + std::to_string(scan.roots.size()) + " of " +
                               std::to_string(2 * p) + " band edges",
                           lo, hi);
  std::sort(scan.roots.begin(), scan.roots.end());

  std::vector<Interval> raw;
  for (std::size_t j = 0; j < p; ++j) raw.push_back({scan.roots[2 * j], scan.roots[2 * j + 1]});
  std::vector<Interval> bands;
  std::vector<double> closed;
  for (const auto& band : raw) {
    if (!bands.empty() && band.lo - bands.back().hi <= tol) {
      closed.push_back(0.5 * (band.lo + bands.back().hi));
      bands.back().hi = band.hi;
    } else {
      bands.push_back(band);
    }
  }
  std::vector<BandEdge> edges;
  for (std::size_t j = 0; j < bands.size(); ++j) {
    edges.push_back({j, EdgeSide::kLeft, bands[j].lo, discriminant_with_slope(bg, bands[j].lo).second});
    edges.push_back({j, EdgeSide::kRight, bands[j].hi, discriminant_with_slope(bg, bands[j].hi).second});
  }
  return BandSet(std::move(bands), std::move(edges), std::move(closed));
}

bool BandEdgeSolution::is_resonance(long n, std::size_t period) const {
  const long r = static_cast<long>(period_index(n, period));
  return std::find(resonance_sites.begin(), resonance_sites.end(), r) != resonance_sites.end();
}

double BandEdgeSolution::at(long n) const {
  const long p = static_cast<long>(u.size()) - 1;
  long q = n / p;
  long r = n % p;
  if (r < 0) {
    r += p;
    q -= 1;
  }
  const double sign = (floquet_multiplier < 0 && (q % 2 != 0)) ? -1.0 : 1.0;
  return sign * u[static_cast<std::size_t>(r)];
}

BandEdgeSolution band_edge_solution(const PeriodicBackground& bg, double edge, double tol,
                                    double resonance_tol) {
  const auto [d, slope] = discriminant_with_slope(bg, edge);
  if (std::fabs(std::fabs(d) - 2.0) > 10.0 * tol * std::max(1.0, std::fabs(slope)) + 1e-12)
    throw InputError("band_edge_solution: lambda is not a band edge (|Delta| = " + std::to_string(std::fabs(d)) +
                     ")");
  const int m = d > 0.0 ? 1 : -1;
  const TransferMatrix t = transfer_matrix(bg, edge);
  // Null vector of M - m I from whichever row is better conditioned.
  double v0 = t.m12, v1 = static_cast<double>(m) - t.m11;
  const double w0 = static_cast<double>(m) - t.m22, w1 = t.m21;
  if (std::hypot(w0, w1) > std::hypot(v0, v1)) {
    v0 = w0;
    v1 = w1;
  }
  const double scale = std::max({1.0, std::fabs(t.m11), std::fabs(t.m12), std::fabs(t.m21), std::fabs(t.m22)});
  if (std::hypot(v0, v1) <= 1e-10 * scale)
    throw InputError("band_edge_solution: closed gap at lambda (transfer matrix is +-identity)");

  const std::size_t p = bg.period();
  const auto a = bg.a();
  const auto b = bg.b();
  BandEdgeSolution out;
  out.edge = edge;
  out.floquet_multiplier = m;
  out.u.resize(p + 1);
  out.u[0] = v0;
  for (std::size_t k = 0; k < p; ++k) {
    const double a_prev = a[(k + p - 1) % p];
    const double next = ((edge - b[k]) * out.u[k] - a_prev * (k == 0 ? v1 : out.u[k - 1])) / a[k];
    out.u[k + 1] = next;
  }
  double umax = 0.0;
  for (std::size_t k = 0; k < p; ++k) umax = std::max(umax, std::fabs(out.u[k]));
  double sign = 1.0;
  for (std::size_t k = 0; k < p; ++k) {
    if (std::fabs(out.u[k]) > resonance_tol * umax) {
      sign = out.u[k] > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  for (double& x : out.u) x *= sign / umax;
  out.u_before = v1 * sign / umax;
  for (std::size_t k = 0; k < p; ++k)
    if (std::fabs(out.u[k]) < resonance_tol) out.resonance_sites.push_back(static_cast<long>(k));
  return out;
}

}  // namespace gapcount
