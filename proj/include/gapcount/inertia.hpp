#pragma once

// Eigenvalue counting by Sylvester inertia.
//
// For a symmetric tridiagonal T and a shift s, the number of negative pivots
// of T - s = L D L^T equals the number of eigenvalues of T below s. Interval
// counts are differences of two such counts; eigenvalues are located by
// bisection on the counts, many shifts per kernel call.

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "gapcount/tridiagonal.hpp"

namespace gapcount {

struct OpenInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct CountResult {
  OpenInterval interval;
  std::size_t count = 0;
  bool lo_flag = false;  // an eigenvalue lies within tol of lo
  bool hi_flag = false;  // an eigenvalue lies within tol of hi
};

struct BelowCount {
  std::size_t count = 0;
  bool breakdown = false;  // a pivot was clamped
};

/// 1e-10 times the Gershgorin radius (at least 1e-300).
double default_tolerance(TridiagonalView t);

/// Number of eigenvalues below each shift.
std::vector<BelowCount> count_below(TridiagonalView t, std::span<const double> shifts);
std::size_t count_below(TridiagonalView t, double shift);

/// Number of eigenvalues in the open interval. Endpoints that hit an exact
/// pivot breakdown are moved inward by tol and flagged.
CountResult count_in_interval(TridiagonalView t, OpenInterval interval, double tol);

/// Sorted eigenvalues in the open interval, each to within tol.
std::vector<double> eigs_in_interval(TridiagonalView t, OpenInterval interval, double tol);

/// All eigenvalues, each to within tol.
std::vector<double> eigenvalues(TridiagonalView t, double tol);

/// Number of eigenvalues of a dense symmetric matrix that are >= threshold - slack.
/// Throws InputError when s is not symmetric to 1e-12 relative.
std::size_t dense_count_ge(const Eigen::MatrixXd& s, double threshold, double slack = 0.0);

/// Inertia count of a dense symmetric matrix in an open interval
/// (Householder tridiagonalization followed by Sturm counts).
CountResult dense_count_in_interval(const Eigen::MatrixXd& s, OpenInterval interval, double tol);

}  // namespace gapcount
