#include "gapcount/inertia.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gapcount/dense.hpp"
#include "gapcount/error.hpp"
#include "gapcount/kernels/kernels.hpp"

namespace gapcount {

namespace {

struct Prepared {
  std::vector<double> off_sq;
  double pivmin;
};

Prepared prepare(TridiagonalView t) {
  Prepared p;
  p.off_sq.resize(t.off.size());
  double m = 1.0;
  for (std::size_t i = 0; i < t.off.size(); ++i) {
    p.off_sq[i] = t.off[i] * t.off[i];
    m = std::max(m, p.off_sq[i]);
  }
  p.pivmin = std::numeric_limits<double>::min() * m;
  return p;
}

void run_counts(TridiagonalView t, const Prepared& prep, std::span<const double> shifts,
                std::vector<std::int32_t>& counts, std::vector<std::uint8_t>& breakdown) {
  counts.resize(shifts.size());
  breakdown.resize(shifts.size());
  kernels::sturm_counts(kernels::SturmInput{t.diag, prep.off_sq, prep.pivmin}, shifts, counts, breakdown);
}

struct Endpoints {
  double lo, hi;  // effective shifts
  std::size_t below_lo, below_hi;
  bool lo_flag, hi_flag;
};

Endpoints resolve_endpoints(TridiagonalView t, const Prepared& prep, OpenInterval in, double tol) {
  const double shifts[6] = {in.lo - tol, in.lo, in.lo + tol, in.hi - tol, in.hi, in.hi + tol};
  std::vector<std::int32_t> c;
  std::vector<std::uint8_t> bd;
  run_counts(t, prep, shifts, c, bd);
  Endpoints e;
  e.lo = bd[1] ? in.lo + tol : in.lo;
  e.hi = bd[4] ? in.hi - tol : in.hi;
  e.below_lo = static_cast<std::size_t>(bd[1] ? c[2] : c[1]);
  e.below_hi = static_cast<std::size_t>(bd[4] ? c[3] : c[4]);
  e.lo_flag = bd[1] || c[2] > c[0];
  e.hi_flag = bd[4] || c[5] > c[3];
  if (e.below_hi < e.below_lo) e.below_hi = e.below_lo;
  return e;
}

}  // namespace

double default_tolerance(TridiagonalView t) { return std::max(1e-10 * gershgorin_radius(t), 1e-300); }

std::vector<BelowCount> count_below(TridiagonalView t, std::span<const double> shifts) {
  const Prepared prep = prepare(t);
  std::vector<std::int32_t> c;
  std::vector<std::uint8_t> bd;
  run_counts(t, prep, shifts, c, bd);
  std::vector<BelowCount> out(shifts.size());
  for (std::size_t k = 0; k < shifts.size(); ++k) out[k] = {static_cast<std::size_t>(c[k]), bd[k] != 0};
  return out;
}

std::size_t count_below(TridiagonalView t, double shift) {
  return count_below(t, std::span<const double>(&shift, 1)).front().count;
}

CountResult count_in_interval(TridiagonalView t, OpenInterval interval, double tol) {
  if (!(interval.lo < interval.hi)) throw InputError("count_in_interval: need lo < hi");
  if (!(tol >= 0.0)) throw InputError("count_in_interval: tol must be >= 0");
  const Prepared prep = prepare(t);
  const Endpoints e = resolve_endpoints(t, prep, interval, tol);
  return {interval, e.below_hi - e.below_lo, e.lo_flag, e.hi_flag};
}

std::vector<double> eigs_in_interval(TridiagonalView t, OpenInterval interval, double tol) {
  if (!(interval.lo < interval.hi)) throw InputError("eigs_in_interval: need lo < hi");
  if (!(tol > 0.0)) throw InputError("eigs_in_interval: tol must be > 0");
  const Prepared prep = prepare(t);
  const Endpoints e = resolve_endpoints(t, prep, interval, tol);
  const std::size_t k0 = e.below_lo;
  const std::size_t m = e.below_hi - e.below_lo;
  if (m == 0) return {};

  // Bracket j holds eigenvalue number k0 + j: below(lo_j) <= k0 + j < below(hi_j).
  std::vector<double> lo(m, e.lo), hi(m, e.hi);
  std::vector<double> mids;
  std::vector<std::int32_t> c;
  std::vector<std::uint8_t> bd;
  for (int iter = 0; iter < 256; ++iter) {
    mids.clear();
    for (std::size_t j = 0; j < m; ++j) {
      if (hi[j] - lo[j] <= tol) continue;
      const double mid = 0.5 * (lo[j] + hi[j]);
      if (mid <= lo[j] || mid >= hi[j]) continue;
      if (mids.empty() || mids.back() != mid) mids.push_back(mid);
    }
    if (mids.empty()) break;
    run_counts(t, prep, mids, c, bd);
    for (std::size_t s = 0; s < mids.size(); ++s) {
      const std::size_t below = static_cast<std::size_t>(c[s]);
      for (std::size_t j = 0; j < m; ++j) {
        if (mids[s] <= lo[j] || mids[s] >= hi[j]) continue;
        if (below > k0 + j)
          hi[j] = mids[s];
        else
          lo[j] = mids[s];
      }
    }
  }
  std::vector<double> out(m);
  for (std::size_t j = 0; j < m; ++j) out[j] = 0.5 * (lo[j] + hi[j]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> eigenvalues(TridiagonalView t, double tol) {
  if (t.size() == 0) return {};
  const auto [glo, ghi] = gershgorin_interval(t);
  const double pad = std::max({tol, 1e-12 * std::max(std::fabs(glo), std::fabs(ghi)), 1e-300}) + 1e-12;
  return eigs_in_interval(t, {glo - pad, ghi + pad}, tol);
}

std::size_t dense_count_ge(const Eigen::MatrixXd& s, double threshold, double slack) {
  require_symmetric(s, "dense_count_ge");
  if (s.rows() == 0) return 0;
  const Eigen::VectorXd ev = symmetric_eigenvalues(s);
  std::size_t n = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] >= threshold - slack) ++n;
  return n;
}

CountResult dense_count_in_interval(const Eigen::MatrixXd& s, OpenInterval interval, double tol) {
  require_symmetric(s, "dense_count_in_interval");
  if (s.rows() == 0) return {interval, 0, false, false};
  const SymTridiagonal t = tridiagonalize(s);
  return count_in_interval(t.view(), interval, tol);
}

}  // namespace gapcount
