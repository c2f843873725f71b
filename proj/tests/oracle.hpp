#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's numerical code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix zeros(std::size_t n) { return Matrix(n, std::vector<double>(n, 0.0)); }

inline Matrix tridiagonal(const std::vector<double>& d, const std::vector<double>& e) {
  Matrix m = zeros(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m[i][i] = d[i];
  for (std::size_t i = 0; i + 1 < d.size(); ++i) m[i][i + 1] = m[i + 1][i] = e[i];
  return m;
}

/// Cyclic Jacobi rotations; returns the ascending eigenvalues.
inline std::vector<double> eigenvalues(Matrix a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        total += a[i][j] * a[i][j];
        if (i != j) off += a[i][j] * a[i][j];
      }
    if (off <= 1e-30 * std::max(total, 1e-300)) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline std::size_t count_in(const std::vector<double>& ev, double lo, double hi) {
  return static_cast<std::size_t>(std::count_if(ev.begin(), ev.end(), [&](double l) { return lo < l && l < hi; }));
}

/// Gauss-Jordan inverse with partial pivoting.
inline Matrix inverse(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv = zeros(n);
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    const double d = a[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] /= d;
      inv[c][k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0.0) continue;
      const double f = a[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

/// Trace of the product of one-period transfer matrices, multiplied out by hand.
inline double discriminant(const std::vector<double>& a, const std::vector<double>& b, double lambda) {
  const std::size_t p = a.size();
  // u_{n+1} = ((lambda - b_n) u_n - a_{n-1} u_{n-1}) / a_n, state (u_n, a_{n-1} u_{n-1})
  double m11 = 1, m12 = 0, m21 = 0, m22 = 1;
  for (std::size_t n = 0; n < p; ++n) {
    const double t11 = (lambda - b[n]) / a[n], t12 = -1.0 / a[n], t21 = a[n], t22 = 0.0;
    const double n11 = t11 * m11 + t12 * m21, n12 = t11 * m12 + t12 * m22;
    const double n21 = t21 * m11 + t22 * m21, n22 = t21 * m12 + t22 * m22;
    m11 = n11, m12 = n12, m21 = n21, m22 = n22;
  }
  return m11 + m22;
}

/// Free lattice resolvent (J - lambda)^{-1}(n, m) for |lambda| > 2 and a = 1, b = 0.
inline double free_resolvent(long n, long m, double lambda) {
  const double x = (lambda - std::copysign(std::sqrt(lambda * lambda - 4.0), lambda)) / 2.0;
  return std::pow(x, static_cast<double>(std::labs(n - m))) / (x - 1.0 / x);
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace oracle
