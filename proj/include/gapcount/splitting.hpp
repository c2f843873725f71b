#pragma once

// Splitting of an indefinite Jacobi perturbation into two positive parts.
//
// Each bond (n, n+1) with coupling c = da_n is written as
//   [0 c; c 0] = |c| I - [|c| -c; -c |c|],
// and each diagonal entry as db_n = (db_n)_+ - (db_n)_-. Collecting terms
// gives dJ = plus - minus with plus diagonal and minus tridiagonal, both
// positive semidefinite for couplings of either sign.

#include <Eigen/Dense>
#include <vector>

#include "gapcount/operators.hpp"
#include "gapcount/tridiagonal.hpp"

namespace gapcount {

struct SplitPerturbation {
  Window window;
  std::vector<double> plus;        // (db_n)_+ + |da_{n-1}| + |da_n|
  std::vector<double> minus_diag;  // (db_n)_- + |da_{n-1}| + |da_n|
  std::vector<double> minus_off;   // -da_n for the bond (n, n+1) inside the window

  SymTridiagonal minus() const { return {minus_diag, minus_off}; }
  Eigen::MatrixXd plus_dense() const;
  Eigen::MatrixXd minus_dense() const;
};

/// Both neighbouring bonds contribute |da| to a site's diagonal weight, also
/// when the bond leaves the window.
SplitPerturbation split(const Perturbation& pert, Window window);

struct SplitChecks {
  double max_reconstruction_ulps = 0.0;  // |plus - minus - dJ| in ulps of the larger operand
  double plus_min = 0.0;
  double minus_min_eigenvalue = 0.0;
  double minus_norm = 0.0;
  bool psd = false;  // both min eigenvalues >= -1e-12 * norm
  double trace_sum = 0.0;    // tr(plus) + tr(minus)
  double window_weight = 0.0;  // |db_n| over the window plus |da_n| over bonds touching it
  bool trace_bound = false;    // trace_sum <= 4 * window_weight
};

SplitChecks check_split(const SplitPerturbation& s, const Perturbation& pert);

}  // namespace gapcount
