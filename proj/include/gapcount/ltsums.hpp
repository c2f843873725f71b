#pragma once

// Power sums sum_j dist(lambda_j, E)^alpha over the discrete eigenvalues of
// a truncated perturbed Jacobi matrix, the integration-by-parts identity
//   sum_j f(|lambda_j - l0|) = int_0^eps f'(s) #(J in (l0 + s, l0 + eps)) ds,
// and window-size convergence experiments for these sums.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gapcount/bands.hpp"
#include "gapcount/operators.hpp"

namespace gapcount {

struct ComponentEigenvalues {
  SpectralGap component;
  std::vector<double> eigenvalues;  // sorted, strictly inside the component
  std::vector<double> distances;    // dist(lambda, E)
};

struct PowerSum {
  double alpha = 0.0;
  double total = 0.0;
  std::vector<double> per_component;
};

struct GapReport {
  long size = 0;  // N
  Window window;
  BandSet bands;
  std::vector<ComponentEigenvalues> components;
  std::vector<PowerSum> power_sums;

  std::size_t count() const;
  double max_distance() const;
  /// Sum for alpha, which must be one of the requested exponents.
  const PowerSum& sum(double alpha) const;
};

struct GapSumOptions {
  double tol = 1e-10;         // eigenvalue accuracy; band edges are inset by 10 tol
  double support_tol = 0.1;   // N must be at least 4 R(support_tol)
};

/// Eigenvalues of the truncation to Window::of_size(N) in every component of
/// the complement of the bands, and their power sums.
GapReport gap_power_sum(const JacobiOperator& op, std::span<const double> alphas, long size,
                        const GapSumOptions& opts = {});
GapReport gap_power_sum(const JacobiOperator& op, double alpha, long size, const GapSumOptions& opts = {});

/// f(0) = 0 and f' > 0 on (0, eps). The power kind is f(s) = s^alpha.
struct SumFunction {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> fprime;
  std::optional<double> alpha;  // set for the power kind

  static SumFunction power(double alpha);
  static SumFunction explicit_function(std::string name, std::function<double(double)> f,
                                       std::function<double(double)> fprime);
};

struct SumIdentityResult {
  double lambda0 = 0.0;
  double epsilon = 0.0;  // signed; the interval runs from lambda0 towards lambda0 + epsilon
  std::vector<double> eigenvalues;
  double lhs = 0.0;             // sum_j f(|lambda_j - lambda0|)
  double rhs_exact = 0.0;       // breakpoint summation of the counting integral
  double rhs_quadrature = 0.0;  // numerical integration against inertia counts
  double quadrature_error = 0.0;  // estimate reported by the integrator
  double quadrature_tolerance = 0.0;
  double max_discrepancy = 0.0;  // max of |lhs - rhs_exact|, |rhs_exact - rhs_quadrature|
  bool exact_ok = false;         // |lhs - rhs_exact| <= 1e-10 (1 + |lhs|)
  bool quadrature_ok = false;    // |rhs_exact - rhs_quadrature| <= quadrature_tolerance
};

SumIdentityResult check_sum_identity(const JacobiOperator& op, double lambda0, double epsilon, const SumFunction& f,
                                     long size, double tol = 1e-10);

enum class LtVariant { kThm13, kThm14, kConjecture };

std::string to_string(LtVariant v);
LtVariant parse_lt_variant(const std::string& name);

/// Whether sum_n log(|n|+1)^{1+eps} (|da_n| + |db_n|) converges.
bool log_weighted_summable(const Perturbation& pert, double epsilon);

struct ConvergenceOptions {
  double alpha = 0.6;
  std::vector<long> schedule{100, 200, 400, 800};
  double tol = 1e-10;
  double support_tol = 0.1;
  double verdict_tol = 1e-6;   // last difference must fall below this
  double shrink = 1.5;         // required decrease factor of successive differences
  double log_epsilon = 0.25;   // exponent excess in the log-weighted hypothesis
  bool majorant = false;       // evaluate the near-edge trace majorant
};

struct ConvergenceRow {
  long size = 0;
  std::optional<std::size_t> component;  // nullopt: total over all components
  std::size_t count = 0;
  double power_sum = 0.0;
  std::optional<double> delta_prev;
  std::string verdict;  // total rows only
};

struct MajorantIntegral {
  double delta_min = 0.0;
  std::size_t nodes_per_decade = 0;
  double value = 0.0;       // int_{delta_min}^{eps} f'(d) |Tr(...)| dd
  double corrected = 0.0;   // plus the fitted power-law tail below delta_min
};

struct EdgeMajorant {
  double edge = 0.0;
  int direction = 1;
  long reference = 0;
  double epsilon = 0.0;
  std::vector<MajorantIntegral> integrals;
  double tail_exponent = 0.0;  // fitted beta in f'(d) |Tr| ~ c d^beta near the edge
  double trace_constant = 0.0;  // max_d |Tr| d^{1/2} / tr(plus)
  bool finite_looking = false;
};

struct MajorantReport {
  long radius = 0;        // sites |n| <= radius enter the trace
  double plus_trace = 0.0;
  std::vector<EdgeMajorant> edges;
  bool finite_looking = false;
};

struct ConvergenceTable {
  LtVariant variant = LtVariant::kThm13;
  double alpha = 0.0;
  std::vector<ConvergenceRow> rows;
  std::vector<double> totals;  // per schedule entry
  std::vector<double> trace_norms;     // partial sums over the window, per schedule entry
  std::vector<double> log_weighted;    // same with the log weight
  std::string verdict;
  std::optional<MajorantReport> majorant;
};

/// Three-point tail rule on successive totals: "stabilized" when the last
/// difference is below verdict_tol and at most the previous one divided by
/// shrink (differences at the round-off floor 1e-10 (1 + |s|) count as
/// shrinking), "slow" when the differences still decrease, "unstable"
/// otherwise, and "insufficient" with fewer than three sizes.
std::string convergence_verdict(const std::vector<double>& totals, double verdict_tol, double shrink);

ConvergenceTable convergence_experiment(LtVariant variant, const JacobiOperator& op, const ConvergenceOptions& opts);

/// Near-edge majorant int f'(d) |sum_n plus_n G^D(n, n; edge + dir d)| dd for
/// every finite edge of every component.
MajorantReport trace_majorant(const JacobiOperator& op, double alpha, long radius, double tol);

}  // namespace gapcount
