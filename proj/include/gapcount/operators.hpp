#pragma once

// Periodic Jacobi backgrounds, decaying perturbations and their Dirichlet
// truncations.
//
// The doubly infinite Jacobi matrix J acts on l^2(Z) by
//   (J u)_n = a_{n-1} u_{n-1} + b_n u_n + a_n u_{n+1},
// with a_n = a[n mod p] + da_n > 0 and b_n = b[n mod p] + db_n.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gapcount/tridiagonal.hpp"

namespace gapcount {

/// Closed integer interval of lattice sites [lo, hi].
struct Window {
  long lo = 0;
  long hi = 0;

  static Window symmetric(long half_width) { return {-half_width, half_width}; }
  /// Symmetric window [-size/2, size/2]; an odd size gives exactly size sites.
  static Window of_size(long size) { return symmetric(size / 2); }

  std::size_t size() const noexcept { return hi >= lo ? static_cast<std::size_t>(hi - lo + 1) : 0; }
  bool empty() const noexcept { return hi < lo; }
  bool contains(long n) const noexcept { return lo <= n && n <= hi; }
  bool operator==(const Window&) const = default;
};

/// Maps a site to its index within one period: ((n mod p) + p) mod p.
inline std::size_t period_index(long n, std::size_t p) {
  const long pp = static_cast<long>(p);
  return static_cast<std::size_t>(((n % pp) + pp) % pp);
}

class PeriodicBackground {
 public:
  /// One period of off-diagonals a (all > 0) and diagonals b.
  PeriodicBackground(std::vector<double> a, std::vector<double> b);

  /// a = 1, b = 0: spectrum [-2, 2].
  static PeriodicBackground free();

  std::size_t period() const noexcept { return a_.size(); }
  std::span<const double> a() const noexcept { return a_; }
  std::span<const double> b() const noexcept { return b_; }
  double a_at(long n) const noexcept { return a_[period_index(n, a_.size())]; }
  double b_at(long n) const noexcept { return b_[period_index(n, b_.size())]; }

 private:
  std::vector<double> a_;
  std::vector<double> b_;
};

enum class PerturbationKind { kExplicit, kPowerLaw, kLogWeight };

std::string to_string(PerturbationKind kind);

/// A decaying sequence
///   s * sigma(n) * (1 + |n|)^(-power) * log(2 + |n|)^(-log_power),
/// with sigma(n) = (-1)^n when alternating and 1 otherwise.
struct SequenceGenerator {
  double amplitude = 0.0;
  double power = 2.0;
  double log_power = 0.0;
  bool alternating = false;

  double operator()(long n) const noexcept;
  /// |value| at distance m = |n| from the origin; nonincreasing in m.
  double magnitude(double m) const noexcept;
  /// Whether sum_n |value(n)| converges.
  bool summable() const noexcept;
  /// Upper bound on sum_{|n| > radius} |value(n)|.
  double tail_bound(long radius) const;
};

struct SiteValue {
  double da = 0.0;
  double db = 0.0;
};

/// Description used to build a Perturbation (the config file maps onto it).
struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::kExplicit;
  std::map<long, SiteValue> sites;  // kExplicit
  SequenceGenerator da;             // generator kinds
  SequenceGenerator db;
  bool allow_non_summable = false;
};

class Perturbation {
 public:
  /// Identically zero.
  Perturbation();

  PerturbationKind kind() const noexcept { return spec_.kind; }
  const PerturbationSpec& spec() const noexcept { return spec_; }
  bool trace_class() const noexcept;

  double da(long n) const;
  double db(long n) const;
  SiteValue at(long n) const { return {da(n), db(n)}; }
  /// |da_n| + |db_n|.
  double weight(long n) const;

  /// Upper bound on sum_{|n| > radius} (|da_n| + |db_n|); exact for explicit maps.
  double tail(long radius) const;

  /// Smallest R with tail(R) < tau. Throws for non-summable kinds.
  long effective_radius(double tau) const;

  /// Largest |n| with a nonzero entry, or -1 if none (explicit kind only).
  long support_radius() const;

  friend Perturbation make_perturbation(const PerturbationSpec& spec);

 private:
  explicit Perturbation(PerturbationSpec spec);
  PerturbationSpec spec_;
};

/// Validates a spec and builds the perturbation. Generators whose trace norm
/// diverges are rejected with NonSummableError unless allow_non_summable.
Perturbation make_perturbation(const PerturbationSpec& spec);

struct PerturbationNorms {
  double trace_norm = 0.0;    // sum_{|n|<=R} |da_n| + |db_n|
  double log_weighted = 0.0;  // sum_{|n|<=R} log(|n|+1)^(1+eps) (|da_n| + |db_n|)
};

PerturbationNorms perturbation_norms(const Perturbation& pert, long radius, double epsilon);

/// J = J0 + dJ with every perturbed off-diagonal positive.
class JacobiOperator {
 public:
  JacobiOperator(PeriodicBackground background, Perturbation perturbation);

  const PeriodicBackground& background() const noexcept { return background_; }
  const Perturbation& perturbation() const noexcept { return perturbation_; }

  double a_at(long n) const { return background_.a_at(n) + perturbation_.da(n); }
  double b_at(long n) const { return background_.b_at(n) + perturbation_.db(n); }

 private:
  PeriodicBackground background_;
  Perturbation perturbation_;
};

/// Dirichlet section of J on a window; couplings leaving the window are dropped.
class TruncatedMatrix {
 public:
  TruncatedMatrix(Window window, std::vector<double> diag, std::vector<double> offdiag);

  const Window& window() const noexcept { return window_; }
  const std::vector<double>& diag() const noexcept { return diag_; }
  const std::vector<double>& offdiag() const noexcept { return offdiag_; }
  std::size_t size() const noexcept { return diag_.size(); }
  /// Row index of lattice site n.
  std::size_t index_of(long n) const { return static_cast<std::size_t>(n - window_.lo); }

  TridiagonalView view() const noexcept { return {diag_, offdiag_}; }

 private:
  Window window_;
  std::vector<double> diag_;
  std::vector<double> offdiag_;
};

TruncatedMatrix truncate(const JacobiOperator& op, Window window);
TruncatedMatrix truncate(const PeriodicBackground& bg, Window window);

}  // namespace gapcount
