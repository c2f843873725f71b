#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gapcount {

/// Non-owning view of a real symmetric tridiagonal matrix.
struct TridiagonalView {
  std::span<const double> diag;
  std::span<const double> off;  // off[i] couples i and i+1

  std::size_t size() const noexcept { return diag.size(); }
};

/// Owning symmetric tridiagonal matrix. Off-diagonals may have any sign.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  TridiagonalView view() const noexcept { return {diag, off}; }
  std::size_t size() const noexcept { return diag.size(); }
};

/// Largest absolute row sum; bounds the spectral radius.
double gershgorin_radius(TridiagonalView t);

/// Lower and upper Gershgorin bounds of the spectrum.
std::pair<double, double> gershgorin_interval(TridiagonalView t);

/// Solves (T - shift) x = rhs by Gaussian elimination with partial pivoting.
/// Throws NumericalError if the shifted matrix is exactly singular.
std::vector<double> solve_shifted(TridiagonalView t, double shift, std::span<const double> rhs);

/// Column j of (T - shift)^{-1}.
std::vector<double> resolvent_column(TridiagonalView t, double shift, std::size_t j);

/// Diagonal of (T - shift)^{-1} in O(n) from forward and backward pivots.
std::vector<double> resolvent_diagonal(TridiagonalView t, double shift);

}  // namespace gapcount
