#pragma once

// Dense symmetric helpers. Eigen's self-adjoint solver provides the full
// eigendecompositions; everything here is a thin layer on top of it.

#include <Eigen/Dense>
#include <string_view>

#include "gapcount/tridiagonal.hpp"

namespace gapcount {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
};

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& s);
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& s);

/// max |s - s^T| <= rel_tol * max(1, max |s|), else InputError naming `what`.
void require_symmetric(const Eigen::MatrixXd& s, std::string_view what, double rel_tol = 1e-12);

/// S (n x r) with B = S S^T, one column sqrt(l) v per eigenpair with
/// l > rel_threshold * ||B||. Negative round-off eigenvalues are dropped.
Eigen::MatrixXd psd_range_factor(const Eigen::MatrixXd& b, double rel_threshold = 1e-14);

/// Symmetric square root with eigenvalues clamped at zero.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& b);

/// Householder reduction to tridiagonal form (orthogonally similar).
SymTridiagonal tridiagonalize(const Eigen::MatrixXd& s);

Eigen::MatrixXd to_dense(TridiagonalView t);

/// Numerical rank: eigenvalues with |l| > rel_tol * max(1, ||s||).
Eigen::Index numerical_rank(const Eigen::MatrixXd& s, double rel_tol = 1e-10);

}  // namespace gapcount
