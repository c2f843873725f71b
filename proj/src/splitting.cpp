#include "gapcount/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gapcount/error.hpp"
#include "gapcount/inertia.hpp"

namespace gapcount {

namespace {

double ulp(double x) {
  x = std::fabs(x);
  return std::nextafter(x, std::numeric_limits<double>::infinity()) - x;
}

}  // namespace

Eigen::MatrixXd SplitPerturbation::plus_dense() const {
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(plus.data(), static_cast<Eigen::Index>(plus.size()));
  return d.asDiagonal();
}

Eigen::MatrixXd SplitPerturbation::minus_dense() const {
  const auto n = static_cast<Eigen::Index>(minus_diag.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = minus_diag[static_cast<std::size_t>(i)];
    if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = minus_off[static_cast<std::size_t>(i)];
  }
  return m;
}

SplitPerturbation split(const Perturbation& pert, Window window) {
  if (window.empty()) throw InputError("split: empty window");
  const std::size_t n = window.size();
  SplitPerturbation s;
  s.window = window;
  s.plus.resize(n);
  s.minus_diag.resize(n);
  s.minus_off.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const long site = window.lo + static_cast<long>(i);
    const double db = pert.db(site);
    const double bond = std::fabs(pert.da(site - 1)) + std::fabs(pert.da(site));
    s.plus[i] = std::max(db, 0.0) + bond;
    s.minus_diag[i] = std::max(-db, 0.0) + bond;
    if (i + 1 < n) s.minus_off[i] = -pert.da(site);
  }
  return s;
}

SplitChecks check_split(const SplitPerturbation& s, const Perturbation& pert) {
  SplitChecks c;
  const std::size_t n = s.plus.size();
  for (std::size_t i = 0; i < n; ++i) {
    const long site = s.window.lo + static_cast<long>(i);
    const double err = std::fabs((s.plus[i] - s.minus_diag[i]) - pert.db(site));
    const double u = ulp(std::max(std::fabs(s.plus[i]), std::fabs(s.minus_diag[i])));
    c.max_reconstruction_ulps = std::max(c.max_reconstruction_ulps, u > 0.0 ? err / u : err);
    if (i + 1 < n) {
      const double e2 = std::fabs((0.0 - s.minus_off[i]) - pert.da(site));
      const double u2 = ulp(s.minus_off[i]);
      c.max_reconstruction_ulps = std::max(c.max_reconstruction_ulps, u2 > 0.0 ? e2 / u2 : e2);
    }
    c.trace_sum += s.plus[i] + s.minus_diag[i];
    c.window_weight += std::fabs(pert.db(site)) + std::fabs(pert.da(site));
  }
  // The bond entering the window from the left also loads its first site.
  if (n > 0) c.window_weight += std::fabs(pert.da(s.window.lo - 1));
  c.plus_min = n ? *std::min_element(s.plus.begin(), s.plus.end()) : 0.0;

  const SymTridiagonal minus = s.minus();
  c.minus_norm = gershgorin_radius(minus.view());
  if (n > 0) {
    const double tol = std::max(1e-14 * c.minus_norm, 1e-300);
    const auto [glo, ghi] = gershgorin_interval(minus.view());
    const std::vector<double> ev = eigs_in_interval(minus.view(), {glo - 1.0, glo + 1.0 + (ghi - glo)}, tol);
    c.minus_min_eigenvalue = ev.empty() ? 0.0 : ev.front();
  }
  const double plus_norm = n ? *std::max_element(s.plus.begin(), s.plus.end()) : 0.0;
  c.psd = c.plus_min >= -1e-12 * plus_norm && c.minus_min_eigenvalue >= -1e-12 * std::max(c.minus_norm, 1e-300);
  c.trace_bound = c.trace_sum <= 4.0 * c.window_weight;
  return c;
}

}  // namespace gapcount
