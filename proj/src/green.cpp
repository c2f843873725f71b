#include "gapcount/green.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "gapcount/error.hpp"
#include "gapcount/parallel.hpp"
#include "gapcount/tridiagonal.hpp"

namespace gapcount {

namespace {

constexpr long kMaxSize = 50'000'000;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

long required_size(const PeriodicBackground& bg, const BandSet& bands, double lambda, double tol, long max_site) {
  if (!(tol > 0.0)) throw InputError("green: tol must be > 0");
  const double dist = bands.distance(lambda);
  if (dist <= tol) throw InputError("green: lambda = " + fmt(lambda) + " lies in the spectrum of the background");
  const double x = floquet_decay(bg, lambda);
  if (!(x < 1.0)) throw InputError("green: lambda = " + fmt(lambda) + " is not in a gap (|Delta| <= 2)");
  const auto p = static_cast<long>(bg.period());
  const double periods = std::ceil(std::log(tol * std::min(1.0, dist)) / std::log(x));
  if (!(periods < static_cast<double>(kMaxSize))) throw SizeError("green: decay too slow for tol", kMaxSize);
  const long n = std::max(4 * p * std::max(1L, static_cast<long>(periods)), 4 * std::abs(max_site) + 4);
  if (n > kMaxSize) throw SizeError("green: required window exceeds " + std::to_string(kMaxSize), n);
  return n;
}

void check_size(long size, long required, long max_site) {
  if (size / 4 < max_site)
    throw SizeError("green: sites must satisfy |n| <= N/4 (N = " + std::to_string(size) + ", |n| = " +
                        std::to_string(max_site) + ")",
                    required);
  if (size < required)
    throw SizeError("green: N = " + std::to_string(size) + " is too small for the requested tolerance", required);
}

long resolve_size(const PeriodicBackground& bg, const BandSet& bands, double lambda, long size, double tol,
                  long max_site) {
  const long required = required_size(bg, bands, lambda, tol, max_site);
  if (size == 0) return required;
  check_size(size, required, max_site);
  return size;
}

}  // namespace

const char* to_string(GreenMethod m) {
  switch (m) {
    case GreenMethod::kAuto: return "auto";
    case GreenMethod::kTruncatedSolve: return "truncated-solve";
    case GreenMethod::kFreeAnalytic: return "free-analytic";
  }
  return "?";
}

long green_required_size(const PeriodicBackground& bg, double lambda, double tol, long max_site) {
  return required_size(bg, compute_bands(bg), lambda, tol, max_site);
}

double free_green(double a, double b, long n, long m, double lambda) {
  if (!(a > 0.0)) throw InputError("free_green: a must be > 0");
  const double t = (lambda - b) / a;
  if (std::fabs(t) <= 2.0) throw InputError("free_green: lambda = " + fmt(lambda) + " lies in the band");
  const double root = std::sqrt((t - 2.0) * (t + 2.0));
  // Small root of x^2 - t x + 1 = 0, computed without cancellation.
  const double big = 0.5 * (t + std::copysign(root, t));
  const double x = 1.0 / big;
  const long k = std::labs(n - m);
  return std::pow(x, static_cast<double>(k)) / (a * (x - big));
}

double green_function(const PeriodicBackground& bg, long n, long m, double lambda, long size, double tol) {
  const BandSet bands = compute_bands(bg);
  const long max_site = std::max(std::labs(n), std::labs(m));
  const long N = resolve_size(bg, bands, lambda, size, tol, max_site);
  const TruncatedMatrix t = truncate(bg, Window::of_size(N));
  return resolvent_column(t.view(), lambda, t.index_of(m))[t.index_of(n)];
}

GreenEvaluation green_evaluate(const PeriodicBackground& bg, const std::vector<std::pair<long, long>>& pairs,
                               double lambda, long size, double tol, GreenMethod method) {
  GreenEvaluation ev;
  ev.lambda = lambda;
  ev.pairs = pairs;
  if (method == GreenMethod::kAuto)
    method = bg.period() == 1 ? GreenMethod::kFreeAnalytic : GreenMethod::kTruncatedSolve;
  ev.method = method;
  if (method == GreenMethod::kFreeAnalytic) {
    if (bg.period() != 1) throw InputError("green: the analytic method needs a period-1 background");
    for (const auto& [n, m] : pairs) ev.values.push_back(free_green(bg.a()[0], bg.b()[0], n, m, lambda));
    return ev;
  }
  const BandSet bands = compute_bands(bg);
  long max_site = 0;
  for (const auto& [n, m] : pairs) max_site = std::max({max_site, std::labs(n), std::labs(m)});
  ev.truncation = resolve_size(bg, bands, lambda, size, tol, max_site);
  const TruncatedMatrix t = truncate(bg, Window::of_size(ev.truncation));
  std::map<long, std::vector<double>> columns;
  for (const auto& [n, m] : pairs) {
    auto it = columns.find(m);
    if (it == columns.end()) it = columns.emplace(m, resolvent_column(t.view(), lambda, t.index_of(m))).first;
    ev.values.push_back(it->second[t.index_of(n)]);
  }
  return ev;
}

double dirichlet_green(const PeriodicBackground& bg, long n, long m, double lambda, long size, double tol,
                       long reference) {
  const BandSet bands = compute_bands(bg);
  const long max_site = std::max({std::labs(n), std::labs(m), std::labs(reference)});
  const long N = resolve_size(bg, bands, lambda, size, tol, max_site);
  const TruncatedMatrix t = truncate(bg, Window::of_size(N));
  const std::vector<double> col_r = resolvent_column(t.view(), lambda, t.index_of(reference));
  const double grr = col_r[t.index_of(reference)];
  if (std::fabs(grr) <= tol)
    throw ResonanceError("dirichlet_green: G(r, r) = " + fmt(grr) + " vanishes at the reference site " +
                         std::to_string(reference));
  const std::vector<double> col_m = resolvent_column(t.view(), lambda, t.index_of(m));
  return col_m[t.index_of(n)] - col_r[t.index_of(n)] * col_r[t.index_of(m)] / grr;
}

long nonresonant_site(const PeriodicBackground& bg, double edge) {
  const BandEdgeSolution sol = band_edge_solution(bg, edge);
  long best = 0;
  for (std::size_t k = 0; k < bg.period(); ++k)
    if (std::fabs(sol.u[k]) > std::fabs(sol.u[static_cast<std::size_t>(best)])) best = static_cast<long>(k);
  return best;
}

std::optional<double> dirichlet_gap_eigenvalue(const PeriodicBackground& bg, Interval gap, long reference,
                                               double tol) {
  if (!std::isfinite(gap.lo) || !std::isfinite(gap.hi) || !(gap.lo < gap.hi))
    throw InputError("dirichlet_gap_eigenvalue: needs a bounded gap");
  const double inset = 1e-6 * gap.width();
  auto g = [&](double l) { return green_function(bg, reference, reference, l, 0, tol); };
  const double lo = gap.lo + inset, hi = gap.hi - inset;
  const double glo = g(lo), ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo < 0.0) == (ghi < 0.0)) return std::nullopt;
  boost::uintmax_t iters = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      g, lo, hi, glo, ghi, boost::math::tools::eps_tolerance<double>(48), iters);
  return 0.5 * (bracket.first + bracket.second);
}

ConstantFit fit_constant(const std::vector<double>& delta, const std::vector<double>& q) {
  ConstantFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < delta.size() && i < q.size(); ++i) {
    fit.value = std::max(fit.value, q[i]);
    if (!(q[i] > 0.0) || !(delta[i] > 0.0)) continue;
    const double lx = std::log(delta[i]), ly = std::log(q[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++k;
  }
  if (k >= 2) {
    const double kk = static_cast<double>(k);
    const double den = kk * sxx - sx * sx;
    fit.slope = den != 0.0 ? (kk * sxy - sx * sy) / den : 0.0;
  }
  fit.bounded = k >= 2 && std::isfinite(fit.value) && std::fabs(fit.slope) < 0.1;
  return fit;
}

GreenScanReport scan_green_bounds(const PeriodicBackground& bg, const GreenScanOptions& opts) {
  if (opts.points < 2) throw InputError("green-scan: needs at least 2 grid points");
  if (!(opts.tol > 0.0)) throw InputError("green-scan: tol must be > 0");
  const BandSet bands = compute_bands(bg);
  const std::vector<SpectralGap> comps = bands.components();
  if (opts.component >= comps.size())
    throw InputError("green-scan: component index " + std::to_string(opts.component) + " out of range (" +
                     std::to_string(comps.size()) + " components)");
  const SpectralGap& comp = comps[opts.component];

  GreenScanReport rep;
  rep.direction = opts.edge == GapEdge::kLower ? 1 : -1;
  rep.edge = opts.edge == GapEdge::kLower ? comp.range.lo : comp.range.hi;
  if (!std::isfinite(rep.edge)) throw InputError("green-scan: the selected edge is at infinity");

  const double eps = opts.epsilon > 0.0 ? opts.epsilon : std::min(0.1, 0.25 * comp.range.width());
  const double dmin = opts.delta_min > 0.0 ? opts.delta_min : eps * 1e-5;
  if (!(dmin < eps)) throw InputError("green-scan: delta_min must be below epsilon");
  if (eps >= comp.range.width()) throw InputError("green-scan: epsilon reaches across the gap");

  rep.reference = opts.reference ? *opts.reference : nonresonant_site(bg, rep.edge);
  if (opts.n_max > 0) {
    rep.n_max = opts.n_max;
  } else {
    const double x = floquet_decay(bg, rep.edge + rep.direction * dmin);
    const double xi = static_cast<double>(bg.period()) / -std::log(x);
    rep.n_max = static_cast<long>(std::ceil(8.0 * xi)) + std::labs(rep.reference);
  }
  if (!comp.exterior) rep.dirichlet_eigenvalue = dirichlet_gap_eigenvalue(bg, comp.range, rep.reference, opts.tol);

  std::vector<double> deltas(opts.points);
  const double ratio = std::log(eps / dmin);
  for (std::size_t k = 0; k < opts.points; ++k)
    deltas[k] = dmin * std::exp(ratio * static_cast<double>(k) / static_cast<double>(opts.points - 1));

  const long r = rep.reference;
  const long n_max = rep.n_max;
  struct RowData {
    GreenScanRow row;
    std::vector<double> gd;  // |G^D(n,n)| for n = -n_max..n_max
  };
  std::vector<RowData> data = parallel_map(opts.points, [&](std::size_t k) {
    RowData d;
    GreenScanRow& row = d.row;
    row.delta = deltas[k];
    row.lambda = rep.edge + rep.direction * row.delta;
    row.distance = bands.distance(row.lambda);
    row.truncation = required_size(bg, bands, row.lambda, opts.tol, n_max + std::labs(r));
    const TruncatedMatrix t = truncate(bg, Window::of_size(row.truncation));
    const std::vector<double> diag = resolvent_diagonal(t.view(), row.lambda);
    const std::vector<double> col = resolvent_column(t.view(), row.lambda, t.index_of(r));
    const double grr = col[t.index_of(r)];
    if (std::fabs(grr) <= opts.tol)
      throw ResonanceError("green-scan: G(r, r) vanishes at lambda = " + fmt(row.lambda) + " for r = " +
                           std::to_string(r));
    const double sd = std::sqrt(row.distance), sdelta = std::sqrt(row.delta);
    d.gd.assign(static_cast<std::size_t>(2 * n_max + 1), 0.0);
    for (long n = -n_max; n <= n_max; ++n) {
      const double g = diag[t.index_of(n)];
      const double gr = col[t.index_of(n)];
      row.q52 = std::max(row.q52, std::max(std::fabs(g), std::fabs(gr)) * sd);
      if (n == r) continue;
      const double gd = std::fabs(g - gr * gr / grr);
      d.gd[static_cast<std::size_t>(n + n_max)] = gd;
      row.q54 = std::max(row.q54, gd / static_cast<double>(std::labs(n - r) + 1));
      row.q55 = std::max(row.q55, gd * sdelta);
    }
    return d;
  });

  std::vector<double> q52, q54, q55;
  for (const RowData& d : data) {
    rep.rows.push_back(d.row);
    q52.push_back(d.row.q52);
    q54.push_back(d.row.q54);
    q55.push_back(d.row.q55);
  }
  rep.c52 = fit_constant(deltas, q52);
  rep.c54 = fit_constant(deltas, q54);
  rep.c55 = fit_constant(deltas, q55);

  rep.pointwise_dominated = true;
  for (const RowData& d : data) {
    for (long n = -n_max; n <= n_max; ++n) {
      if (n == r) continue;
      const double bound = std::min(rep.c54.value * static_cast<double>(std::labs(n - r) + 1),
                                    rep.c55.value / std::sqrt(d.row.delta));
      if (d.gd[static_cast<std::size_t>(n + n_max)] > bound * (1.0 + 1e-12)) rep.pointwise_dominated = false;
    }
  }
  return rep;
}

}  // namespace gapcount
