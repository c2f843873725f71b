#include "gapcount/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gapcount/error.hpp"

namespace gapcount {

double gershgorin_radius(TridiagonalView t) {
  const auto [lo, hi] = gershgorin_interval(t);
  return std::max(std::fabs(lo), std::fabs(hi));
}

std::pair<double, double> gershgorin_interval(TridiagonalView t) {
  const std::size_t n = t.size();
  if (n == 0) return {0.0, 0.0};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::fabs(t.off[i - 1]);
    if (i + 1 < n) r += std::fabs(t.off[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  return {lo, hi};
}

std::vector<double> solve_shifted(TridiagonalView t, double shift, std::span<const double> rhs) {
  const std::size_t n = t.size();
  if (rhs.size() != n) throw InputError("solve_shifted: right-hand side has wrong length");
  if (n == 0) return {};
  // Band LU with row interchanges (the layout of LAPACK dgtsv): row i keeps
  // its diagonal d, superdiagonal du, and a second superdiagonal du2 filled
  // in by interchanges.
  std::vector<double> dl(t.off.begin(), t.off.end());
  std::vector<double> d(n), du(t.off.begin(), t.off.end()), du2(n > 2 ? n - 2 : 0, 0.0);
  std::vector<double> x(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) d[i] = t.diag[i] - shift;

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::fabs(d[i]) >= std::fabs(dl[i])) {
      if (d[i] == 0.0) throw NumericalError("solve_shifted: singular shifted matrix");
      const double f = dl[i] / d[i];
      d[i + 1] -= f * du[i];
      x[i + 1] -= f * x[i];
      if (i + 2 < n) du2[i] = 0.0;
    } else {
      const double f = d[i] / dl[i];
      d[i] = dl[i];
      const double tmp = d[i + 1];
      d[i + 1] = du[i] - f * tmp;
      du[i] = tmp;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du2[i];
      }
      std::swap(x[i], x[i + 1]);
      x[i + 1] -= f * x[i];
    }
  }
  if (d[n - 1] == 0.0) throw NumericalError("solve_shifted: singular shifted matrix");

  x[n - 1] /= d[n - 1];
  if (n > 1) x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
  for (std::size_t k = n; k-- > 2;) {
    const std::size_t i = k - 2;
    x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
  }
  return x;
}

std::vector<double> resolvent_column(TridiagonalView t, double shift, std::size_t j) {
  std::vector<double> e(t.size(), 0.0);
  e.at(j) = 1.0;
  return solve_shifted(t, shift, e);
}

std::vector<double> resolvent_diagonal(TridiagonalView t, double shift) {
  const std::size_t n = t.size();
  std::vector<double> out(n);
  if (n == 0) return out;
  double scale = 1.0;
  for (double v : t.off) scale = std::max(scale, v * v);
  const double pivmin = std::numeric_limits<double>::min() * scale;
  auto clamp = [pivmin](double v) { return std::fabs(v) < pivmin ? -pivmin : v; };

  // fwd[i]: pivot of the leading block ending at i; bwd[i]: of the trailing
  // block starting at i. G(i,i) = 1 / (fwd[i] + bwd[i] - (d[i] - shift)).
  std::vector<double> fwd(n), bwd(n);
  fwd[0] = clamp(t.diag[0] - shift);
  for (std::size_t i = 1; i < n; ++i)
    fwd[i] = clamp((t.diag[i] - shift) - t.off[i - 1] * t.off[i - 1] / fwd[i - 1]);
  bwd[n - 1] = clamp(t.diag[n - 1] - shift);
  for (std::size_t k = n - 1; k-- > 0;)
    bwd[k] = clamp((t.diag[k] - shift) - t.off[k] * t.off[k] / bwd[k + 1]);
  for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 / (fwd[i] + bwd[i] - (t.diag[i] - shift));
  return out;
}

}  // namespace gapcount
