#include "gapcount/operators.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <limits>

#include "gapcount/error.hpp"

namespace gapcount {

namespace {

constexpr long kMaxRadius = 1L << 50;

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void validate_generator(const SequenceGenerator& g, const char* name) {
  if (!std::isfinite(g.amplitude) || !std::isfinite(g.power) || !std::isfinite(g.log_power))
    throw InputError(std::string("perturbation generator ") + name + ": non-finite parameter");
  if (g.amplitude != 0.0 && g.power <= 0.0)
    throw InputError(std::string("perturbation generator ") + name + ": power must be > 0");
  if (g.log_power < 0.0)
    throw InputError(std::string("perturbation generator ") + name + ": log_power must be >= 0");
}

}  // namespace

PeriodicBackground::PeriodicBackground(std::vector<double> a, std::vector<double> b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (a_.empty()) throw InputError("background: period must be >= 1");
  if (a_.size() != b_.size()) throw InputError("background: a and b must both have length period");
  if (!all_finite(a_) || !all_finite(b_)) throw InputError("background: entries must be finite");
  for (double v : a_)
    if (!(v > 0.0)) throw InvalidOperatorError("background: off-diagonals a must be > 0");
}

PeriodicBackground PeriodicBackground::free() { return PeriodicBackground({1.0}, {0.0}); }

std::string to_string(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::kExplicit:
      return "explicit";
    case PerturbationKind::kPowerLaw:
      return "power";
    case PerturbationKind::kLogWeight:
      return "log";
  }
  return "unknown";
}

double SequenceGenerator::magnitude(double m) const noexcept {
  if (amplitude == 0.0) return 0.0;
  double v = std::fabs(amplitude) * std::pow(1.0 + m, -power);
  if (log_power != 0.0) v *= std::pow(std::log(2.0 + m), -log_power);
  return v;
}

double SequenceGenerator::operator()(long n) const noexcept {
  if (amplitude == 0.0) return 0.0;
  const double m = static_cast<double>(n < 0 ? -n : n);
  double v = amplitude * std::pow(1.0 + m, -power);
  if (log_power != 0.0) v *= std::pow(std::log(2.0 + m), -log_power);
  if (alternating && (n % 2 != 0)) v = -v;
  return v;
}

bool SequenceGenerator::summable() const noexcept {
  if (amplitude == 0.0) return true;
  return power > 1.0 || (power == 1.0 && log_power > 1.0);
}

double SequenceGenerator::tail_bound(long radius) const {
  if (amplitude == 0.0) return 0.0;
  if (!summable()) return std::numeric_limits<double>::infinity();
  // magnitude is convex and decreasing on [0, inf), so each term is bounded
  // by its integral over the unit cell centred on it.
  const double x0 = static_cast<double>(radius) + 0.5;
  const double s = std::fabs(amplitude);
  double one_sided;
  if (log_power == 0.0) {
    one_sided = s * std::pow(1.0 + x0, 1.0 - power) / (power - 1.0);
  } else {
    // x + 2 = e^t turns the integrand into e^{(1-q)t} (1 - e^{-t})^{-q} t^{-r}.
    const double q = power;
    const double r = log_power;
    auto f = [q, r](double t) {
      return std::exp((1.0 - q) * t) * std::pow(-std::expm1(-t), -q) * std::pow(t, -r);
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    one_sided = s * integrator.integrate(f, std::log(x0 + 2.0), std::numeric_limits<double>::infinity());
  }
  return 2.0 * one_sided;
}

Perturbation::Perturbation() = default;

Perturbation::Perturbation(PerturbationSpec spec) : spec_(std::move(spec)) {}

Perturbation make_perturbation(const PerturbationSpec& spec) {
  if (spec.kind == PerturbationKind::kExplicit) {
    for (const auto& [n, v] : spec.sites)
      if (!std::isfinite(v.da) || !std::isfinite(v.db))
        throw InputError("perturbation: non-finite value at site " + std::to_string(n));
    return Perturbation(spec);
  }
  validate_generator(spec.da, "da");
  validate_generator(spec.db, "db");
  if (spec.kind == PerturbationKind::kPowerLaw && (spec.da.log_power != 0.0 || spec.db.log_power != 0.0))
    throw InputError("perturbation: power kind takes no log_power; use kind = \"log\"");
  if (!(spec.da.summable() && spec.db.summable()) && !spec.allow_non_summable)
    throw NonSummableError(
        "perturbation: generator is not summable (sum |da_n| + |db_n| diverges); "
        "set allow_non_summable to accept it");
  PerturbationSpec copy = spec;
  copy.sites.clear();
  return Perturbation(std::move(copy));
}

bool Perturbation::trace_class() const noexcept {
  if (spec_.kind == PerturbationKind::kExplicit) return true;
  return spec_.da.summable() && spec_.db.summable();
}

double Perturbation::da(long n) const {
  if (spec_.kind == PerturbationKind::kExplicit) {
    auto it = spec_.sites.find(n);
    return it == spec_.sites.end() ? 0.0 : it->second.da;
  }
  return spec_.da(n);
}

double Perturbation::db(long n) const {
  if (spec_.kind == PerturbationKind::kExplicit) {
    auto it = spec_.sites.find(n);
    return it == spec_.sites.end() ? 0.0 : it->second.db;
  }
  return spec_.db(n);
}

double Perturbation::weight(long n) const { return std::fabs(da(n)) + std::fabs(db(n)); }

long Perturbation::support_radius() const {
  long r = -1;
  for (const auto& [n, v] : spec_.sites)
    if (v.da != 0.0 || v.db != 0.0) r = std::max(r, n < 0 ? -n : n);
  return r;
}

double Perturbation::tail(long radius) const {
  if (spec_.kind == PerturbationKind::kExplicit) {
    double t = 0.0;
    for (const auto& [n, v] : spec_.sites)
      if ((n < 0 ? -n : n) > radius) t += std::fabs(v.da) + std::fabs(v.db);
    return t;
  }
  return spec_.da.tail_bound(radius) + spec_.db.tail_bound(radius);
}

long Perturbation::effective_radius(double tau) const {
  if (!(tau > 0.0)) throw InputError("effective_radius: tolerance must be > 0");
  if (!trace_class()) throw NonSummableError("effective_radius: perturbation is not trace class");
  if (spec_.kind == PerturbationKind::kExplicit) {
    const long top = std::max(0L, support_radius());
    for (long r = 0; r <= top; ++r)
      if (tail(r) < tau) return r;
    return top;
  }
  if (tail(0) < tau) return 0;
  long hi = 1;
  while (!(tail(hi) < tau)) {
    if (hi >= kMaxRadius) throw NumericalError("effective_radius: tail does not fall below tolerance");
    hi *= 2;
  }
  long lo = hi / 2;  // tail(lo) >= tau
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (tail(mid) < tau)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

PerturbationNorms perturbation_norms(const Perturbation& pert, long radius, double epsilon) {
  PerturbationNorms out;
  if (radius < 0) throw InputError("perturbation_norms: radius must be >= 0");
  auto add = [&](long n) {
    const double w = pert.weight(n);
    if (w == 0.0) return;
    out.trace_norm += w;
    const double m = static_cast<double>(n < 0 ? -n : n);
    out.log_weighted += std::pow(std::log(m + 1.0), 1.0 + epsilon) * w;
  };
  if (pert.kind() == PerturbationKind::kExplicit) {
    for (const auto& [n, v] : pert.spec().sites)
      if ((n < 0 ? -n : n) <= radius) add(n);
    return out;
  }
  for (long n = -radius; n <= radius; ++n) add(n);
  return out;
}

JacobiOperator::JacobiOperator(PeriodicBackground background, Perturbation perturbation)
    : background_(std::move(background)), perturbation_(std::move(perturbation)) {
  auto check = [this](long n) {
    if (!(a_at(n) > 0.0))
      throw InvalidOperatorError("Jacobi operator: perturbed off-diagonal a_n + da_n <= 0 at site " +
                                 std::to_string(n));
  };
  if (perturbation_.kind() == PerturbationKind::kExplicit) {
    for (const auto& [n, v] : perturbation_.spec().sites) check(n);
    return;
  }
  const auto& g = perturbation_.spec().da;
  if (g.amplitude == 0.0) return;
  const auto a = background_.a();
  const double amin = *std::min_element(a.begin(), a.end());
  // Only sites with |da_n| >= min a can break positivity; |da_n| decreases in |n|.
  if (g.magnitude(0.0) < amin) return;
  long hi = 1;
  while (g.magnitude(static_cast<double>(hi)) >= amin) {
    if (hi > (1L << 26)) throw InputError("Jacobi operator: da decays too slowly to validate positivity");
    hi *= 2;
  }
  for (long n = -hi; n <= hi; ++n) check(n);
}

TruncatedMatrix::TruncatedMatrix(Window window, std::vector<double> diag, std::vector<double> offdiag)
    : window_(window), diag_(std::move(diag)), offdiag_(std::move(offdiag)) {
  if (window_.empty()) throw InputError("truncation: empty window");
  if (diag_.size() != window_.size() || offdiag_.size() + 1 != diag_.size())
    throw InputError("truncation: inconsistent sizes");
  for (std::size_t i = 0; i < offdiag_.size(); ++i)
    if (!(offdiag_[i] > 0.0))
      throw InvalidOperatorError("truncation: non-positive off-diagonal at site " +
                                 std::to_string(window_.lo + static_cast<long>(i)));
}

TruncatedMatrix truncate(const JacobiOperator& op, Window window) {
  if (window.empty()) throw InputError("truncate: empty window");
  const std::size_t n = window.size();
  std::vector<double> diag(n), off(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const long site = window.lo + static_cast<long>(i);
    diag[i] = op.background().b_at(site) + op.perturbation().db(site);
    if (i + 1 < n) off[i] = op.background().a_at(site) + op.perturbation().da(site);
  }
  return TruncatedMatrix(window, std::move(diag), std::move(off));
}

TruncatedMatrix truncate(const PeriodicBackground& bg, Window window) {
  return truncate(JacobiOperator(bg, Perturbation()), window);
}

}  // namespace gapcount
