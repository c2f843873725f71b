#pragma once

// Birman-Schwinger kernels at energies in a spectral gap and the eigenvalue
// counting bounds built from them.
//
// For A self-adjoint with (x, y) free of spectrum, B >= 0 and e in (x, y):
//   e is an eigenvalue of A + mu B  <=>  1/mu is an eigenvalue of
//   K(e) = B^{1/2} (e - A)^{-1} B^{1/2},
// with equal multiplicities. Counting eigenvalues of K(e) that are >= 1
// bounds how many eigenvalues of A + B cross into (e, y).

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gapcount/bands.hpp"
#include "gapcount/inertia.hpp"
#include "gapcount/operators.hpp"
#include "gapcount/splitting.hpp"

namespace gapcount {

struct BSOperator {
  Eigen::MatrixXd kernel;            // B^{1/2} (e - A)^{-1} B^{1/2} on the support
  std::vector<std::size_t> support;  // rows of A where B is nonzero
  double energy = 0.0;
  double raw_asymmetry = 0.0;        // before symmetrization, relative
};

/// Diagonal B (weights per row of the tridiagonal A). Each support column
/// of the resolvent is one pivoted tridiagonal solve.
BSOperator bs_operator(TridiagonalView a, std::span<const double> b_diag, double e, double tol);

/// Dense A and dense positive semidefinite B.
BSOperator bs_operator(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double e, double tol);

struct Prop21Check {
  double mu = 0.0;
  std::size_t operator_multiplicity = 0;  // eigenvalues of A + mu B at e
  std::size_t kernel_multiplicity = 0;    // eigenvalues of K(e) at 1/mu
  double eigenvector_residual = 0.0;      // |(e - A)^{-1} B phi - phi / mu| / |phi / mu|
  bool consistent = true;
};

struct Prop21Report {
  double energy = 0.0;
  Eigen::VectorXd kernel_eigenvalues;
  std::vector<Prop21Check> checks;
  std::size_t violations = 0;
  std::size_t nontrivial = 0;  // grid points where e is an eigenvalue
  double max_eigenvector_residual = 0.0;
};

/// Checks the eigenvalue / kernel correspondence at every mu of the grid.
Prop21Report verify_prop21(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, Interval gap, double e,
                           std::span<const double> mu_grid, double tol);

enum class BoundVariant { kT11, kT31, kT32 };

std::string to_string(BoundVariant v);
BoundVariant parse_bound_variant(const std::string& name);

struct BoundTerm {
  std::string name;
  std::size_t value = 0;
};

struct BoundReport {
  BoundVariant variant = BoundVariant::kT11;
  std::size_t lhs = 0;
  std::size_t rhs = 0;
  std::vector<BoundTerm> terms;
  bool satisfied = false;
  OpenInterval target;  // interval whose eigenvalues are counted
  double x = 0.0, y = 0.0, e0 = 0.0, e1 = 0.0;
  std::optional<double> q;  // inf spec(A), lower-half semibounded variant only
};

/// Evaluates both sides of one counting bound for C = A + B_plus - B_minus.
///   T11: #(C in (e0,e1)) <= #(K_+(e0) >= 1) + #(B_- >= (y-x)/2)
///   T31: #(C in (e0,e1)) <= #(K_+(e0) >= 1)
///                           + #(B_-^{1/2} (A-q+1)^{-1} B_-^{1/2} >= (y-x)/(2(y-q+1)))
///   T32: #(C in (e1,e0)) <= #(B_-^{1/2} (A-e0)^{-1} B_-^{1/2} >= 1)
///                           + #(B_+^{1/2} (e1-A+B_-)^{-1} E_(-inf,x)(A-B_-) B_+^{1/2} >= 1)
/// with e1 = (x+y)/2. guard is the minimum admissible distance of e0 from spec(A).
BoundReport gap_bound(BoundVariant variant, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b_plus,
                      const Eigen::MatrixXd& b_minus, Interval gap, double e0, double guard);

/// Jacobi form: A is a truncated background, the perturbation is given split.
BoundReport gap_bound(BoundVariant variant, const TruncatedMatrix& a, const SplitPerturbation& split,
                      Interval gap, double e0, double guard);

/// Default e0 guard, 1e-6 (y - x).
double default_guard(Interval gap);

struct Decomposition {
  Eigen::MatrixXd d1, d2, d3;  // spectral pieces below e1, in (e1, y), at or above y
  Eigen::MatrixXd full;        // B_-^{1/2} (C_+ - e1)^{-1} B_-^{1/2} by a linear solve
  std::size_t n2 = 0;          // eigenvalues of C_+ in (e1, y)
  double d1_max_eigenvalue = 0.0;
  Eigen::Index d2_rank = 0;
  double d3_excess = 0.0;        // max eigenvalue of D3 - B_- / (y - e1)
  double completeness_error = 0.0;  // |D1 + D2 + D3 - full| / max(1, |full|)
  bool d1_nonpositive = false;
  bool d2_rank_ok = false;
  bool d3_dominated = false;
  bool complete = false;
};

Decomposition bs_decompose(const Eigen::MatrixXd& b_minus, const Eigen::MatrixXd& c_plus, double e1, double y,
                           double tol);

// Random instances with a prescribed gap, for verification campaigns.

struct InstanceOptions {
  std::size_t dim_min = 10;
  std::size_t dim_max = 200;
  Interval gap{-1.0, 1.0};
  std::optional<double> e0_fraction;  // position of e0 inside its half gap; random if unset
};

struct EngineeredInstance {
  std::uint64_t seed = 0;
  Eigen::MatrixXd a, b_plus, b_minus;
  Interval gap;
  double e0 = 0.0;
};

/// A = Q diag(spectrum) Q^T with the spectrum avoiding (x, y) and containing
/// x and y themselves, Q a seeded random orthogonal matrix; B_+ and B_- are
/// random positive semidefinite matrices of rank 1 to 6, so B_+ - B_- is indefinite.
EngineeredInstance make_instance(std::uint64_t seed, const InstanceOptions& opts, BoundVariant variant);

struct Prop21Instance {
  std::uint64_t seed = 0;
  Eigen::MatrixXd a, b;
  Interval gap;
  double e = 0.0;
  std::vector<double> mu_grid;  // random couplings plus 1/kappa for every kernel eigenvalue kappa
};

Prop21Instance make_prop21_instance(std::uint64_t seed, const InstanceOptions& opts, std::size_t random_mu);

}  // namespace gapcount
