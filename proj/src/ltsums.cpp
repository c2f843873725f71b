#include "gapcount/ltsums.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>

#include "gapcount/error.hpp"
#include "gapcount/green.hpp"
#include "gapcount/inertia.hpp"
#include "gapcount/parallel.hpp"
#include "gapcount/splitting.hpp"

namespace gapcount {

std::size_t GapReport::count() const {
  std::size_t n = 0;
  for (const auto& c : components) n += c.eigenvalues.size();
  return n;
}

double GapReport::max_distance() const {
  double m = 0.0;
  for (const auto& c : components)
    for (double d : c.distances) m = std::max(m, d);
  return m;
}

const PowerSum& GapReport::sum(double alpha) const {
  for (const auto& s : power_sums)
    if (s.alpha == alpha) return s;
  throw InputError("GapReport: no power sum for alpha = " + std::to_string(alpha));
}

GapReport gap_power_sum(const JacobiOperator& op, std::span<const double> alphas, long size,
                        const GapSumOptions& opts) {
  if (size <= 0) throw InputError("gap_power_sum: window size must be positive");
  if (!(opts.tol > 0.0)) throw InputError("gap_power_sum: tol must be > 0");
  for (double a : alphas)
    if (!(a > 0.0)) throw InputError("gap_power_sum: alpha must be > 0");
  const long radius = op.perturbation().effective_radius(opts.support_tol);
  if (size < 4 * radius)
    throw SizeError("gap_power_sum: N = " + std::to_string(size) + " is below 4 R = " + std::to_string(4 * radius),
                    4 * radius);

  GapReport rep;
  rep.size = size;
  rep.window = Window::of_size(size);
  rep.bands = compute_bands(op.background());
  const TruncatedMatrix t = truncate(op, rep.window);
  const auto [glo, ghi] = gershgorin_interval(t.view());
  const double inset = 10.0 * opts.tol;
  for (const SpectralGap& comp : rep.bands.components()) {
    ComponentEigenvalues ce;
    ce.component = comp;
    const double lo = std::isfinite(comp.range.lo) ? comp.range.lo + inset : std::min(glo, comp.range.hi) - 1.0;
    const double hi = std::isfinite(comp.range.hi) ? comp.range.hi - inset : std::max(ghi, comp.range.lo) + 1.0;
    if (lo < hi) ce.eigenvalues = eigs_in_interval(t.view(), {lo, hi}, opts.tol);
    for (double l : ce.eigenvalues) ce.distances.push_back(rep.bands.distance(l));
    rep.components.push_back(std::move(ce));
  }
  for (double a : alphas) {
    PowerSum ps;
    ps.alpha = a;
    for (const auto& ce : rep.components) {
      double s = 0.0;
      for (double d : ce.distances) s += std::pow(d, a);
      ps.per_component.push_back(s);
      ps.total += s;
    }
    rep.power_sums.push_back(std::move(ps));
  }
  return rep;
}

GapReport gap_power_sum(const JacobiOperator& op, double alpha, long size, const GapSumOptions& opts) {
  const double a[] = {alpha};
  return gap_power_sum(op, a, size, opts);
}

SumFunction SumFunction::power(double alpha) {
  if (!(alpha > 0.0)) throw InputError("power function needs alpha > 0");
  SumFunction f;
  f.name = "power";
  f.alpha = alpha;
  f.f = [alpha](double s) { return std::pow(s, alpha); };
  f.fprime = [alpha](double s) { return alpha * std::pow(s, alpha - 1.0); };
  return f;
}

SumFunction SumFunction::explicit_function(std::string name, std::function<double(double)> f,
                                           std::function<double(double)> fprime) {
  if (!f || !fprime) throw InputError("explicit function needs both f and f'");
  SumFunction s;
  s.name = std::move(name);
  s.f = std::move(f);
  s.fprime = std::move(fprime);
  return s;
}

SumIdentityResult check_sum_identity(const JacobiOperator& op, double lambda0, double epsilon, const SumFunction& f,
                                     long size, double tol) {
  if (epsilon == 0.0 || !std::isfinite(epsilon)) throw InputError("sum identity: epsilon must be finite and nonzero");
  if (!(tol > 0.0)) throw InputError("sum identity: tol must be > 0");
  const double len = std::fabs(epsilon);
  const int dir = epsilon > 0.0 ? 1 : -1;
  const double f0 = f.f(0.0);
  if (!(std::fabs(f0) <= 1e-14 * std::max(1.0, std::fabs(f.f(len)))))
    throw InputError("sum identity: f(0) must vanish");
  constexpr int kSamples = 64;
  for (int i = 1; i < kSamples; ++i) {
    const double s = len * static_cast<double>(i) / kSamples;
    if (!(f.fprime(s) > 0.0)) throw InputError("sum identity: f' is not positive on the interval");
  }

  SumIdentityResult r;
  r.lambda0 = lambda0;
  r.epsilon = epsilon;
  const TruncatedMatrix t = truncate(op, Window::of_size(size));
  const OpenInterval interval = dir > 0 ? OpenInterval{lambda0, lambda0 + len} : OpenInterval{lambda0 - len, lambda0};
  r.eigenvalues = eigs_in_interval(t.view(), interval, tol);

  std::vector<double> ts;
  for (double l : r.eigenvalues) ts.push_back(std::fabs(l - lambda0));
  std::sort(ts.begin(), ts.end());
  const std::size_t k = ts.size();
  for (double s : ts) r.lhs += f.f(s);
  // #(J in (l0 + s, l0 + eps)) equals k - j + 1 on (t_{j-1}, t_j).
  double fprev = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double fj = f.f(ts[j]);
    r.rhs_exact += static_cast<double>(k - j) * (fj - fprev);
    fprev = fj;
  }

  boost::math::quadrature::tanh_sinh<double> integrator;
  double a = 0.0;
  std::vector<double> cuts = ts;
  cuts.push_back(len);
  for (double b : cuts) {
    if (b > a) {
      const double mid = 0.5 * (a + b);
      const OpenInterval above =
          dir > 0 ? OpenInterval{lambda0 + mid, lambda0 + len} : OpenInterval{lambda0 - len, lambda0 - mid};
      const std::size_t count = count_in_interval(t.view(), above, tol).count;
      if (count > 0) {
        double err = 0.0;
        const double piece = integrator.integrate(f.fprime, a, b, 1e-12, &err);
        r.rhs_quadrature += static_cast<double>(count) * piece;
        r.quadrature_error += static_cast<double>(count) * err;
      }
    }
    a = b;
  }
  r.quadrature_tolerance = 1e-8 * (1.0 + std::fabs(r.lhs)) + 10.0 * r.quadrature_error;
  const double d_exact = std::fabs(r.lhs - r.rhs_exact);
  const double d_quad = std::fabs(r.rhs_exact - r.rhs_quadrature);
  r.max_discrepancy = std::max(d_exact, d_quad);
  r.exact_ok = d_exact <= 1e-10 * (1.0 + std::fabs(r.lhs));
  r.quadrature_ok = d_quad <= r.quadrature_tolerance;
  return r;
}

std::string to_string(LtVariant v) {
  switch (v) {
    case LtVariant::kThm13: return "thm13";
    case LtVariant::kThm14: return "thm14";
    case LtVariant::kConjecture: return "conjecture";
  }
  return "?";
}

LtVariant parse_lt_variant(const std::string& name) {
  if (name == "thm13") return LtVariant::kThm13;
  if (name == "thm14") return LtVariant::kThm14;
  if (name == "conjecture") return LtVariant::kConjecture;
  throw InputError("unknown ltsum variant '" + name + "' (expected thm13, thm14 or conjecture)");
}

bool log_weighted_summable(const Perturbation& pert, double epsilon) {
  if (pert.kind() == PerturbationKind::kExplicit) return true;
  auto ok = [epsilon](const SequenceGenerator& g) {
    if (g.amplitude == 0.0) return true;
    return g.power > 1.0 || (g.power == 1.0 && g.log_power - (1.0 + epsilon) > 1.0);
  };
  return ok(pert.spec().da) && ok(pert.spec().db);
}

std::string convergence_verdict(const std::vector<double>& totals, double verdict_tol, double shrink) {
  const std::size_t k = totals.size();
  if (k < 3) return "insufficient";
  const double last = std::fabs(totals[k - 1] - totals[k - 2]);
  const double before = std::fabs(totals[k - 2] - totals[k - 3]);
  const double floor = 1e-10 * (1.0 + std::fabs(totals[k - 1]));
  const bool shrinking = last <= std::max(before / shrink, floor);
  if (last < verdict_tol && shrinking) return "stabilized";
  if (last <= std::max(before, floor)) return "slow";
  return "unstable";
}

ConvergenceTable convergence_experiment(LtVariant variant, const JacobiOperator& op, const ConvergenceOptions& opts) {
  const Perturbation& pert = op.perturbation();
  switch (variant) {
    case LtVariant::kThm13:
      if (!pert.trace_class()) throw NonSummableError("thm13 needs a trace-class perturbation");
      if (!(opts.alpha > 0.5)) throw InputError("thm13 needs alpha > 1/2");
      break;
    case LtVariant::kThm14:
      if (!(opts.log_epsilon > 0.0)) throw InputError("thm14 needs a positive log exponent excess");
      if (!log_weighted_summable(pert, opts.log_epsilon))
        throw NonSummableError("thm14 needs sum log(|n|+1)^{1+eps} (|da_n| + |db_n|) < inf");
      if (!(opts.alpha >= 0.5)) throw InputError("thm14 needs alpha >= 1/2");
      break;
    case LtVariant::kConjecture:
      if (!pert.trace_class()) throw NonSummableError("conjecture runs need a trace-class perturbation");
      if (opts.alpha != 0.5) throw InputError("conjecture runs use alpha = 1/2");
      break;
  }
  if (opts.schedule.empty()) throw InputError("ltsum: empty schedule");
  for (std::size_t i = 1; i < opts.schedule.size(); ++i)
    if (opts.schedule[i] <= opts.schedule[i - 1]) throw InputError("ltsum: schedule must be increasing");

  GapSumOptions gopts;
  gopts.tol = opts.tol;
  gopts.support_tol = opts.support_tol;
  const std::vector<GapReport> reports = parallel_map(
      opts.schedule.size(), [&](std::size_t i) { return gap_power_sum(op, opts.alpha, opts.schedule[i], gopts); });

  ConvergenceTable table;
  table.variant = variant;
  table.alpha = opts.alpha;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const GapReport& rep = reports[i];
    const PowerSum& ps = rep.power_sums.front();
    for (std::size_t c = 0; c < rep.components.size(); ++c) {
      ConvergenceRow row;
      row.size = rep.size;
      row.component = c;
      row.count = rep.components[c].eigenvalues.size();
      row.power_sum = ps.per_component[c];
      if (i > 0) row.delta_prev = row.power_sum - reports[i - 1].power_sums.front().per_component[c];
      table.rows.push_back(row);
    }
    table.totals.push_back(ps.total);
    ConvergenceRow total;
    total.size = rep.size;
    total.count = rep.count();
    total.power_sum = ps.total;
    if (i > 0) total.delta_prev = ps.total - table.totals[i - 1];
    total.verdict = convergence_verdict(table.totals, opts.verdict_tol, opts.shrink);
    table.rows.push_back(total);
    const PerturbationNorms norms = perturbation_norms(pert, rep.window.hi, opts.log_epsilon);
    table.trace_norms.push_back(norms.trace_norm);
    table.log_weighted.push_back(norms.log_weighted);
  }
  table.verdict = convergence_verdict(table.totals, opts.verdict_tol, opts.shrink);
  if (opts.majorant) table.majorant = trace_majorant(op, opts.alpha, opts.schedule.back() / 2, opts.tol);
  return table;
}

namespace {

struct EdgeSpec {
  double edge;
  int direction;
  double epsilon;
};

// |sum_n plus_n G^D(n, n; edge + dir d)| over |n| <= radius.
double trace_integrand(const PeriodicBackground& bg, const std::vector<double>& plus,
                       long radius, const EdgeSpec& e, long ref, double d, double tol) {
  const double lambda = e.edge + e.direction * d;
  const long n_sites = std::max(radius, std::labs(ref));
  const long req = green_required_size(bg, lambda, tol, n_sites);
  const TruncatedMatrix t = truncate(bg, Window::of_size(req));
  const std::vector<double> diag = resolvent_diagonal(t.view(), lambda);
  const std::vector<double> col = resolvent_column(t.view(), lambda, t.index_of(ref));
  const double grr = col[t.index_of(ref)];
  if (std::fabs(grr) <= tol) throw ResonanceError("trace majorant: G(r, r) vanishes at the reference site");
  double s = 0.0;
  for (long n = -radius; n <= radius; ++n) {
    const double w = plus[static_cast<std::size_t>(n + radius)];
    if (w == 0.0 || n == ref) continue;
    const double gr = col[t.index_of(n)];
    s += w * (diag[t.index_of(n)] - gr * gr / grr);
  }
  return std::fabs(s);
}

// Least-squares fit log g = log c + beta log d.
std::pair<double, double> power_fit(const std::vector<double>& d, const std::vector<double>& g) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(g[i] > 0.0)) continue;
    const double x = std::log(d[i]), y = std::log(g[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++k;
  }
  if (k < 2) return {0.0, 0.0};
  const double kk = static_cast<double>(k);
  const double beta = (kk * sxy - sx * sy) / (kk * sxx - sx * sx);
  const double logc = (sy - beta * sx) / kk;
  return {std::exp(logc), beta};
}

}  // namespace

MajorantReport trace_majorant(const JacobiOperator& op, double alpha, long radius, double tol) {
  if (!(alpha > 0.0)) throw InputError("trace majorant: alpha must be > 0");
  if (radius < 1) throw InputError("trace majorant: radius must be >= 1");
  const PeriodicBackground& bg = op.background();
  const BandSet bands = compute_bands(bg);
  MajorantReport rep;
  rep.radius = radius;
  const SplitPerturbation sp = split(op.perturbation(), Window::symmetric(radius));
  for (double v : sp.plus) rep.plus_trace += v;

  std::vector<EdgeSpec> edges;
  for (const SpectralGap& c : bands.components()) {
    const double eps = std::min(0.1, 0.25 * c.range.width());
    if (std::isfinite(c.range.lo)) edges.push_back({c.range.lo, 1, eps});
    if (std::isfinite(c.range.hi)) edges.push_back({c.range.hi, -1, eps});
  }
  const double deltas_min[] = {1e-3, 1e-5, 1e-7};
  const std::size_t node_sets[] = {8, 16};
  auto fprime = [alpha](double d) { return alpha * std::pow(d, alpha - 1.0); };

  rep.finite_looking = true;
  for (const EdgeSpec& e : edges) {
    EdgeMajorant em;
    em.edge = e.edge;
    em.direction = e.direction;
    em.epsilon = e.epsilon;
    em.reference = nonresonant_site(bg, e.edge);
    auto g = [&](double d) {
      return fprime(d) * trace_integrand(bg, sp.plus, radius, e, em.reference, d, tol);
    };

    // Panels one decade wide in log d, from 1e-7 up to epsilon.
    std::vector<double> bounds{1e-7};
    while (bounds.back() * 10.0 < e.epsilon * (1.0 - 1e-12)) bounds.push_back(bounds.back() * 10.0);
    bounds.push_back(e.epsilon);
    const std::size_t panels = bounds.size() - 1;
    struct Task {
      std::size_t panel;
      std::size_t nodes;
    };
    std::vector<Task> tasks;
    for (std::size_t nodes : node_sets)
      for (std::size_t p = 0; p < panels; ++p) tasks.push_back({p, nodes});
    const std::vector<double> pieces = parallel_map(tasks.size(), [&](std::size_t i) {
      const Task& task = tasks[i];
      auto h = [&](double u) {
        const double d = std::exp(u);
        return g(d) * d;
      };
      const double ua = std::log(bounds[task.panel]), ub = std::log(bounds[task.panel + 1]);
      return task.nodes == 8 ? boost::math::quadrature::gauss<double, 8>::integrate(h, ua, ub)
                             : boost::math::quadrature::gauss<double, 16>::integrate(h, ua, ub);
    });

    // Power-law fit of the integrand over the decade above each lower limit.
    constexpr int kFitPoints = 9;
    std::vector<double> fit_d;
    for (double dm : deltas_min)
      for (int j = 0; j < kFitPoints; ++j) fit_d.push_back(dm * std::pow(10.0, static_cast<double>(j) / (kFitPoints - 1)));
    const std::vector<double> fit_g = parallel_map(fit_d.size(), [&](std::size_t i) { return g(fit_d[i]); });

    double worst_beta = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < std::size(deltas_min); ++m) {
      const double dm = deltas_min[m];
      if (!(dm < e.epsilon)) continue;
      const std::vector<double> ds(fit_d.begin() + static_cast<long>(m * kFitPoints),
                                   fit_d.begin() + static_cast<long>((m + 1) * kFitPoints));
      const std::vector<double> gs(fit_g.begin() + static_cast<long>(m * kFitPoints),
                                   fit_g.begin() + static_cast<long>((m + 1) * kFitPoints));
      const auto [c, beta] = power_fit(ds, gs);
      if (dm == 1e-7) em.tail_exponent = beta;
      worst_beta = std::min(worst_beta, beta);
      const double tail = beta > -1.0 ? c * std::pow(dm, beta + 1.0) / (beta + 1.0)
                                      : std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < std::size(node_sets); ++s) {
        MajorantIntegral mi;
        mi.delta_min = dm;
        mi.nodes_per_decade = node_sets[s];
        for (std::size_t p = 0; p < panels; ++p)
          if (bounds[p] >= dm * (1.0 - 1e-12)) mi.value += pieces[s * panels + p];
        mi.corrected = mi.value + tail;
        em.integrals.push_back(mi);
      }
    }
    for (std::size_t i = 0; i < fit_d.size(); ++i) {
      const double tr = fit_g[i] / fprime(fit_d[i]);
      if (rep.plus_trace > 0.0)
        em.trace_constant = std::max(em.trace_constant, tr * std::sqrt(fit_d[i]) / rep.plus_trace);
    }

    // Finite-looking: integrable power law near the edge, tail-corrected
    // values stable in the lower limit, and node refinement agreeing.
    auto find = [&](double dm, std::size_t nodes) -> const MajorantIntegral* {
      for (const auto& mi : em.integrals)
        if (mi.delta_min == dm && mi.nodes_per_decade == nodes) return &mi;
      return nullptr;
    };
    const MajorantIntegral* a16 = find(1e-7, 16);
    const MajorantIntegral* a8 = find(1e-7, 8);
    const MajorantIntegral* b16 = find(1e-5, 16);
    bool ok = worst_beta > -0.98 && a16 && a8 && b16;
    if (ok) {
      const double scale = std::max(std::fabs(a16->corrected), 1e-300);
      ok = std::fabs(a16->value - a8->value) <= 1e-6 * std::max(1.0, std::fabs(a16->value)) &&
           std::fabs(a16->corrected - b16->corrected) <= 0.05 * scale;
    }
    em.finite_looking = ok;
    rep.finite_looking = rep.finite_looking && ok;
    rep.edges.push_back(std::move(em));
  }
  return rep;
}

}  // namespace gapcount
