#include "gapcount/cli/runner.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "gapcount/bands.hpp"
#include "gapcount/birman_schwinger.hpp"
#include "gapcount/cli/verify.hpp"
#include "gapcount/dense.hpp"
#include "gapcount/error.hpp"
#include "gapcount/green.hpp"
#include "gapcount/inertia.hpp"
#include "gapcount/kernels/kernels.hpp"
#include "gapcount/operators.hpp"
#include "gapcount/splitting.hpp"

namespace gapcount::cli {

const char* version() { return GAPCOUNT_VERSION; }

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"bands", "count", "bs", "split", "green", "green-scan", "ltsum", "verify"};
  return names;
}

namespace {

using json = nlohmann::json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string section_of(const std::string& command) {
  return command == "green-scan" ? "green_scan" : command;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Emitter {
  std::string command;
  const ExperimentConfig& cfg;
  const RunOptions& opts;
  std::ostream& log;

  std::string format(const std::string& fallback) const {
    if (!opts.format.empty()) {
      if (opts.format != "csv" && opts.format != "json") throw InputError("format must be csv or json");
      return opts.format;
    }
    if (!opts.out.empty()) {
      const std::string ext = std::filesystem::path(opts.out).extension().string();
      if (ext == ".json") return "json";
      if (ext == ".csv") return "csv";
    }
    const std::string f = cfg.text("output.format", fallback);
    if (f != "csv" && f != "json") throw InputError("config key 'output.format' must be csv or json");
    return f;
  }

  std::string path(const std::string& fmt) const {
    if (!opts.out.empty()) return opts.out;
    return (command == "verify" ? std::string("report") : command) + "." + fmt;
  }

  json header() const {
    json h;
    h["tool"] = "gapcount";
    h["version"] = version();
    h["command"] = command;
    if (opts.timestamp) h["generated"] = utc_now();
    h["config"] = cfg.to_json();
    return h;
  }

  std::string csv_header() const {
    std::ostringstream os;
    os << "# gapcount " << version() << "\n";
    os << "# command: " << command << "\n";
    if (opts.timestamp) os << "# generated: " << utc_now() << "\n";
    os << "# config:\n";
    std::istringstream in(cfg.to_toml());
    for (std::string line; std::getline(in, line);) os << (line.empty() ? "#" : "#   " + line) << "\n";
    return os.str();
  }

  static void write(const std::string& p, const std::string& body) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot write output file '" + p + "'");
    f << body;
    if (!f) throw InputError("failed writing output file '" + p + "'");
  }

  std::string render_csv(const Table& t) const {
    std::ostringstream os;
    os << csv_header();
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& r : t.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << "\n";
    }
    return os.str();
  }

  std::string render_json(const json& payload) const {
    json doc;
    doc["header"] = header();
    doc["result"] = payload;
    return doc.dump(2) + "\n";
  }

  /// Writes either the table or the JSON payload; returns the path written.
  std::string emit(const json& payload, const Table& table, const std::string& fallback = "csv") const {
    const std::string fmt = format(fallback);
    const std::string p = path(fmt);
    write(p, fmt == "json" ? render_json(payload) : render_csv(table));
    log << "wrote " << p << "\n";
    return p;
  }

  void plan(const std::string& what) const {
    log << "dry run: " << command << "\n" << csv_header() << "plan: " << what << "\n";
  }
};

Window window_at(const ExperimentConfig& c, const std::string& path, long half) {
  if (!c.has(path)) return Window::symmetric(half);
  try {
    return Window::symmetric(c.integer(path));
  } catch (const InputError&) {
    return parse_window(c.text(path, ""));
  }
}

std::vector<std::pair<long, long>> pairs_at(const ExperimentConfig& c, const std::string& path) {
  if (!c.has(path)) throw InputError("missing config key '" + path + "'");
  try {
    return parse_pairs(c.text(path, ""));
  } catch (const InputError&) {
    const std::vector<long> flat = c.integers(path);
    if (flat.size() % 2 != 0) throw InputError("config key '" + path + "' must hold n,m pairs");
    std::vector<std::pair<long, long>> out;
    for (std::size_t i = 0; i < flat.size(); i += 2) out.emplace_back(flat[i], flat[i + 1]);
    return out;
  }
}

std::pair<long, long> seeds_at(const ExperimentConfig& c, const std::string& path) {
  if (!c.has(path)) return {0, 199};
  try {
    return parse_range(c.text(path, ""));
  } catch (const InputError&) {
    const std::vector<long> v = c.integers(path);
    if (v.size() != 2 || v[1] < v[0]) throw InputError("config key '" + path + "' must be [lo, hi]");
    return {v[0], v[1]};
  }
}

Interval pair_interval(const ExperimentConfig& c, const std::string& path) {
  const std::vector<double> v = c.numbers(path);
  if (v.size() != 2 || !(v[0] < v[1])) throw InputError("config key '" + path + "' must be [lo, hi] with lo < hi");
  return {v[0], v[1]};
}

JacobiOperator make_operator(const ExperimentConfig& c) {
  return JacobiOperator(c.background(), make_perturbation(c.perturbation()));
}

const SpectralGap& component_at(const std::vector<SpectralGap>& comps, long index, const std::string& path) {
  if (index < 0 || static_cast<std::size_t>(index) >= comps.size())
    throw InputError("config key '" + path + "' is out of range (" + std::to_string(comps.size()) + " components)");
  return comps[static_cast<std::size_t>(index)];
}

json interval_json(Interval i) { return json::array({i.lo, i.hi}); }

int cmd_bands(const Emitter& em) {
  const PeriodicBackground bg = em.cfg.background();
  const double tol = em.cfg.positive("bands.tol", 1e-12);
  if (em.opts.dry_run) {
    em.plan("Floquet discriminant roots of a period-" + std::to_string(bg.period()) + " background, tol " + num(tol));
    return 0;
  }
  const BandSet bands = compute_bands(bg, tol);
  Table t{{"band", "side", "lambda", "slope", "resonant_sites"}, {}};
  json edges = json::array();
  for (const BandEdge& e : bands.edges()) {
    std::string sites;
    json site_list = json::array();
    int multiplier = 0;
    try {
      const BandEdgeSolution sol = band_edge_solution(bg, e.lambda);
      multiplier = sol.floquet_multiplier;
      for (long s : sol.resonance_sites) {
        sites += (sites.empty() ? "" : ";") + std::to_string(s);
        site_list.push_back(s);
      }
    } catch (const NumericalError&) {
      // Edges where the transfer matrix is +-I have no distinguished solution.
    }
    const std::string side = e.side == EdgeSide::kLeft ? "left" : "right";
    t.rows.push_back({std::to_string(e.band), side, num(e.lambda), num(e.slope), sites});
    edges.push_back({{"band", e.band}, {"side", side}, {"lambda", e.lambda}, {"slope", e.slope},
                     {"floquet_multiplier", multiplier}, {"resonant_sites", site_list}});
  }
  json bands_j = json::array(), gaps_j = json::array();
  for (const Interval& b : bands.bands()) bands_j.push_back(interval_json(b));
  for (const Interval& g : bands.gaps()) gaps_j.push_back(interval_json(g));
  json payload{{"bands", bands_j}, {"gaps", gaps_j}, {"closed_gaps", bands.closed_gaps()}, {"edges", edges}};
  em.emit(payload, t);
  return 0;
}

int cmd_count(const Emitter& em) {
  const JacobiOperator op = make_operator(em.cfg);
  const Window w = window_at(em.cfg, "count.window", 1000);
  const Interval iv = pair_interval(em.cfg, "count.interval");
  if (em.opts.dry_run) {
    em.plan("inertia count in (" + num(iv.lo) + ", " + num(iv.hi) + ") on sites " + std::to_string(w.lo) + ".." +
            std::to_string(w.hi));
    return 0;
  }
  const TruncatedMatrix t = truncate(op, w);
  const double tol = em.cfg.has("count.tol") ? em.cfg.positive("count.tol", 1.0) : default_tolerance(t.view());
  const CountResult r = count_in_interval(t.view(), {iv.lo, iv.hi}, tol);
  const std::vector<double> eigs = eigs_in_interval(t.view(), {iv.lo, iv.hi}, tol);
  const BandSet bands = compute_bands(op.background());
  json ev = json::array();
  for (double l : eigs) ev.push_back({{"lambda", l}, {"distance", bands.distance(l)}});
  Table tab{{"window_lo", "window_hi", "lo", "hi", "count", "lo_flag", "hi_flag"},
            {{std::to_string(w.lo), std::to_string(w.hi), num(iv.lo), num(iv.hi), std::to_string(r.count),
              r.lo_flag ? "1" : "0", r.hi_flag ? "1" : "0"}}};
  json payload{{"window", {w.lo, w.hi}}, {"interval", {iv.lo, iv.hi}}, {"tol", tol},       {"count", r.count},
               {"lo_flag", r.lo_flag},   {"hi_flag", r.hi_flag},     {"eigenvalues", ev}};
  em.emit(payload, tab);
  return 0;
}

int cmd_bs(const Emitter& em) {
  const JacobiOperator op = make_operator(em.cfg);
  const Window w = window_at(em.cfg, "bs.window", 200);
  const bool has_energy = em.cfg.has("bs.energy");
  const bool has_lower = em.cfg.has("bs.e0");
  const bool has_upper = em.cfg.has("bs.e0_upper");
  if (!has_energy && !has_lower && !has_upper)
    throw InputError("missing config key 'bs.energy' (or 'bs.e0' / 'bs.e0_upper' for gap bounds)");
  const double tol = em.cfg.positive("bs.tol", 1e-8);
  const long gap_index = em.cfg.integer("bs.gap", 1);
  if (em.opts.dry_run) {
    em.plan("Birman-Schwinger kernel and gap bounds on sites " + std::to_string(w.lo) + ".." + std::to_string(w.hi));
    return 0;
  }
  const TruncatedMatrix a = truncate(op.background(), w);
  const SplitPerturbation sp = split(op.perturbation(), w);
  Table tab{{"record", "index", "value"}, {}};
  json payload;
  payload["window"] = {w.lo, w.hi};
  if (has_energy) {
    const double e = em.cfg.number("bs.energy");
    const BSOperator k = bs_operator(a.view(), sp.plus, e, tol);
    const Eigen::VectorXd kappa = symmetric_eigenvalues(k.kernel);
    json ks = json::array(), support = json::array();
    for (Eigen::Index i = 0; i < kappa.size(); ++i) {
      ks.push_back(kappa[i]);
      tab.rows.push_back({"kernel_eigenvalue", std::to_string(i), num(kappa[i])});
    }
    for (std::size_t s : k.support) support.push_back(w.lo + static_cast<long>(s));
    const std::size_t ge1 = k.kernel.size() ? dense_count_ge(k.kernel, 1.0, 1e-9) : 0;
    tab.rows.push_back({"kernel_count_ge_1", "", std::to_string(ge1)});
    payload["kernel"] = {{"energy", e}, {"support_sites", support}, {"eigenvalues", ks}, {"count_ge_1", ge1},
                         {"raw_asymmetry", k.raw_asymmetry}};
  }
  if (has_lower || has_upper) {
    const BandSet bands = compute_bands(op.background());
    const SpectralGap& g = component_at(bands.components(), gap_index, "bs.gap");
    if (g.exterior) throw InputError("config key 'bs.gap' must select an interior gap");
    const double guard = em.cfg.positive("bs.guard", default_guard(g.range));
    json reports = json::array();
    auto add = [&](BoundVariant v, double e0) {
      const BoundReport r = gap_bound(v, a, sp, g.range, e0, guard);
      const std::string name = to_string(v);
      tab.rows.push_back({name + ".lhs", "", std::to_string(r.lhs)});
      tab.rows.push_back({name + ".rhs", "", std::to_string(r.rhs)});
      for (const BoundTerm& term : r.terms) tab.rows.push_back({name + ".term", term.name, std::to_string(term.value)});
      tab.rows.push_back({name + ".satisfied", "", r.satisfied ? "1" : "0"});
      reports.push_back(to_json(r));
    };
    if (has_lower) {
      const double e0 = em.cfg.number("bs.e0");
      add(BoundVariant::kT11, e0);
      add(BoundVariant::kT31, e0);
    }
    if (has_upper) add(BoundVariant::kT32, em.cfg.number("bs.e0_upper"));
    payload["bounds"] = reports;
  }
  em.emit(payload, tab);
  return 0;
}

int cmd_split(const Emitter& em) {
  const Perturbation pert = make_perturbation(em.cfg.perturbation());
  const Window w = window_at(em.cfg, "split.window", 50);
  if (em.opts.dry_run) {
    em.plan("split of the perturbation on sites " + std::to_string(w.lo) + ".." + std::to_string(w.hi));
    return 0;
  }
  const SplitPerturbation sp = split(pert, w);
  const SplitChecks ch = check_split(sp, pert);
  Table tab{{"site", "da", "db", "plus", "minus_diag", "minus_off"}, {}};
  json sites = json::array();
  for (long n = w.lo; n <= w.hi; ++n) {
    const auto i = static_cast<std::size_t>(n - w.lo);
    const std::string off = i < sp.minus_off.size() ? num(sp.minus_off[i]) : "";
    tab.rows.push_back({std::to_string(n), num(pert.da(n)), num(pert.db(n)), num(sp.plus[i]), num(sp.minus_diag[i]), off});
    sites.push_back(n);
  }
  json checks{{"max_reconstruction_ulps", ch.max_reconstruction_ulps},
              {"plus_min", ch.plus_min},
              {"minus_min_eigenvalue", ch.minus_min_eigenvalue},
              {"minus_norm", ch.minus_norm},
              {"psd", ch.psd},
              {"trace_sum", ch.trace_sum},
              {"window_weight", ch.window_weight},
              {"trace_bound", ch.trace_bound}};
  json payload{{"window", {w.lo, w.hi}},        {"sites", sites},
               {"plus", sp.plus},               {"minus_diag", sp.minus_diag},
               {"minus_off", sp.minus_off},     {"checks", checks}};
  em.emit(payload, tab, "json");
  return 0;
}

GreenMethod parse_method(const std::string& m) {
  if (m == "auto") return GreenMethod::kAuto;
  if (m == "truncated-solve") return GreenMethod::kTruncatedSolve;
  if (m == "free-analytic") return GreenMethod::kFreeAnalytic;
  throw InputError("config key 'green.method' must be auto, truncated-solve or free-analytic");
}

int cmd_green(const Emitter& em) {
  const PeriodicBackground bg = em.cfg.background();
  const double lambda = em.cfg.number("green.lambda");
  const auto pairs = pairs_at(em.cfg, "green.pairs");
  const long size = em.cfg.integer("green.size", 0);
  const double tol = em.cfg.positive("green.tol", 1e-10);
  const GreenMethod method = parse_method(em.cfg.text("green.method", "auto"));
  const long ref = em.cfg.integer("green.reference", 0);
  const bool dirichlet = em.cfg.flag("green.dirichlet", true);
  if (size < 0) throw InputError("config key 'green.size' must be >= 0");
  if (em.opts.dry_run) {
    em.plan("Green's function at lambda = " + num(lambda) + " for " + std::to_string(pairs.size()) + " pairs");
    return 0;
  }
  std::vector<std::pair<long, long>> all = pairs;
  if (dirichlet) {
    all.emplace_back(ref, ref);
    for (const auto& [n, m] : pairs) {
      all.emplace_back(n, ref);
      all.emplace_back(ref, m);
    }
  }
  const GreenEvaluation ev = green_evaluate(bg, all, lambda, size, tol, method);
  std::map<std::pair<long, long>, double> value;
  for (std::size_t i = 0; i < ev.pairs.size(); ++i) value[ev.pairs[i]] = ev.values[i];
  double grr = 0.0;
  if (dirichlet) {
    grr = value.at({ref, ref});
    if (std::fabs(grr) <= tol)
      throw ResonanceError("green: G(r, r) = " + num(grr) + " vanishes at the reference site " + std::to_string(ref));
  }
  Table tab{{"n", "m", "G", "GD"}, {}};
  json rows = json::array();
  for (const auto& [n, m] : pairs) {
    const double g = value.at({n, m});
    json row{{"n", n}, {"m", m}, {"G", g}};
    std::string gd_s;
    if (dirichlet) {
      const double gd = g - value.at({n, ref}) * value.at({ref, m}) / grr;
      row["GD"] = gd;
      gd_s = num(gd);
    }
    tab.rows.push_back({std::to_string(n), std::to_string(m), num(g), gd_s});
    rows.push_back(row);
  }
  json payload{{"lambda", lambda},        {"method", to_string(ev.method)}, {"truncation", ev.truncation},
               {"reference", ref},         {"values", rows}};
  em.emit(payload, tab);
  return 0;
}

int cmd_green_scan(const Emitter& em) {
  const PeriodicBackground bg = em.cfg.background();
  GreenScanOptions o;
  const long comp = em.cfg.integer("green_scan.component", 1);
  if (comp < 0) throw InputError("config key 'green_scan.component' must be >= 0");
  o.component = static_cast<std::size_t>(comp);
  const std::string edge = em.cfg.text("green_scan.edge", "lower");
  if (edge != "lower" && edge != "upper") throw InputError("config key 'green_scan.edge' must be lower or upper");
  o.edge = edge == "lower" ? GapEdge::kLower : GapEdge::kUpper;
  const long points = em.cfg.integer("green_scan.points", 50);
  if (points < 2) throw InputError("config key 'green_scan.points' must be >= 2");
  o.points = static_cast<std::size_t>(points);
  o.epsilon = em.cfg.number("green_scan.epsilon", 0.0);
  o.delta_min = em.cfg.number("green_scan.delta_min", 0.0);
  o.n_max = em.cfg.integer("green_scan.n_max", 0);
  if (em.cfg.has("green_scan.reference")) o.reference = em.cfg.integer("green_scan.reference");
  o.tol = em.cfg.positive("green_scan.tol", 1e-10);
  if (em.opts.dry_run) {
    em.plan("near-edge Green's function scan, " + edge + " edge of component " + std::to_string(comp) + ", " +
            std::to_string(points) + " points");
    return 0;
  }
  const GreenScanReport r = scan_green_bounds(bg, o);
  Table tab{{"lambda", "delta", "dist", "N", "q52", "q54", "q55"}, {}};
  json rows = json::array();
  for (const GreenScanRow& row : r.rows) {
    tab.rows.push_back({num(row.lambda), num(row.delta), num(row.distance), std::to_string(row.truncation),
                        num(row.q52), num(row.q54), num(row.q55)});
    rows.push_back({{"lambda", row.lambda}, {"delta", row.delta}, {"dist", row.distance}, {"N", row.truncation},
                    {"q52", row.q52}, {"q54", row.q54}, {"q55", row.q55}});
  }
  auto fit = [](const ConstantFit& f) { return json{{"value", f.value}, {"slope", f.slope}, {"bounded", f.bounded}}; };
  json payload{{"edge", r.edge},
               {"direction", r.direction},
               {"reference", r.reference},
               {"n_max", r.n_max},
               {"rows", rows},
               {"c52", fit(r.c52)},
               {"c54", fit(r.c54)},
               {"c55", fit(r.c55)},
               {"pointwise_dominated", r.pointwise_dominated}};
  if (r.dirichlet_eigenvalue) payload["dirichlet_eigenvalue"] = *r.dirichlet_eigenvalue;
  em.emit(payload, tab);
  return 0;
}

ConvergenceOptions ltsum_options(const ExperimentConfig& c, LtVariant variant) {
  ConvergenceOptions o;
  o.alpha = c.positive("ltsum.alpha", variant == LtVariant::kThm13 ? 0.6 : 0.5);
  if (c.has("ltsum.schedule")) o.schedule = c.integers("ltsum.schedule");
  o.tol = c.positive("ltsum.tol", 1e-10);
  o.support_tol = c.positive("ltsum.support_tol", 0.1);
  o.verdict_tol = c.positive("ltsum.verdict_tol", 1e-6);
  o.shrink = c.positive("ltsum.shrink", 1.5);
  o.log_epsilon = c.positive("ltsum.log_epsilon", 0.25);
  o.majorant = c.flag("ltsum.majorant", variant == LtVariant::kThm13);
  return o;
}

json identity_json(const SumIdentityResult& r) {
  return json{{"lambda0", r.lambda0},
              {"epsilon", r.epsilon},
              {"count", r.eigenvalues.size()},
              {"lhs", r.lhs},
              {"rhs_exact", r.rhs_exact},
              {"rhs_quadrature", r.rhs_quadrature},
              {"quadrature_error", r.quadrature_error},
              {"quadrature_tolerance", r.quadrature_tolerance},
              {"max_discrepancy", r.max_discrepancy},
              {"exact_ok", r.exact_ok},
              {"quadrature_ok", r.quadrature_ok}};
}

json majorant_json(const MajorantReport& m) {
  json edges = json::array();
  for (const EdgeMajorant& e : m.edges) {
    json ints = json::array();
    for (const MajorantIntegral& i : e.integrals)
      ints.push_back({{"delta_min", i.delta_min}, {"nodes_per_decade", i.nodes_per_decade}, {"value", i.value},
                      {"corrected", i.corrected}});
    edges.push_back({{"edge", e.edge},
                     {"direction", e.direction},
                     {"reference", e.reference},
                     {"epsilon", e.epsilon},
                     {"integrals", ints},
                     {"tail_exponent", e.tail_exponent},
                     {"trace_constant", e.trace_constant},
                     {"finite_looking", e.finite_looking}});
  }
  return json{{"radius", m.radius}, {"plus_trace", m.plus_trace}, {"edges", edges}, {"finite_looking", m.finite_looking}};
}

int cmd_ltsum(const Emitter& em) {
  const JacobiOperator op = make_operator(em.cfg);
  const LtVariant variant = parse_lt_variant(em.cfg.text("ltsum.variant", "thm13"));
  const ConvergenceOptions o = ltsum_options(em.cfg, variant);
  const bool identity = em.cfg.flag("ltsum.identity", true);
  if (em.opts.dry_run) {
    std::string sched;
    for (long n : o.schedule) sched += (sched.empty() ? "" : ",") + std::to_string(n);
    em.plan(to_string(variant) + " power sums, alpha = " + num(o.alpha) + ", schedule " + sched);
    return 0;
  }
  const ConvergenceTable table = convergence_experiment(variant, op, o);
  Table tab{{"N", "gap_index", "count", "power_sum", "delta_prev", "verdict"}, {}};
  json rows = json::array();
  for (const ConvergenceRow& r : table.rows) {
    const std::string gi = r.component ? std::to_string(*r.component) : "all";
    const std::string dp = r.delta_prev ? num(*r.delta_prev) : "";
    tab.rows.push_back({std::to_string(r.size), gi, std::to_string(r.count), num(r.power_sum), dp, r.verdict});
    json row{{"N", r.size}, {"gap_index", gi}, {"count", r.count}, {"power_sum", r.power_sum}};
    row["delta_prev"] = r.delta_prev ? json(*r.delta_prev) : json(nullptr);
    if (!r.verdict.empty()) row["verdict"] = r.verdict;
    rows.push_back(row);
  }
  json payload{{"variant", to_string(variant)},
               {"alpha", table.alpha},
               {"rows", rows},
               {"totals", table.totals},
               {"trace_norms", table.trace_norms},
               {"log_weighted_norms", table.log_weighted},
               {"verdict", table.verdict}};
  if (table.majorant) payload["majorant"] = majorant_json(*table.majorant);
  if (identity) {
    json ids = json::array();
    for (const SumIdentityResult& r : sum_identity_checks(em.cfg)) ids.push_back(identity_json(r));
    payload["identity"] = ids;
  }
  const std::string fmt = em.format("csv");
  const std::string written = em.emit(payload, tab);
  if (fmt == "csv" && (identity || table.majorant)) {
    // Details that do not fit the table go next to it as JSON.
    const std::string side = std::filesystem::path(written).replace_extension(".json").string();
    Emitter::write(side, em.render_json(payload));
    em.log << "wrote " << side << "\n";
  }
  em.log << "verdict: " << table.verdict << "\n";
  return 0;
}

int cmd_verify(const Emitter& em) {
  const std::string variant = em.cfg.text("verify.variant", "t11");
  const auto [lo, hi] = seeds_at(em.cfg, "verify.seeds");
  InstanceOptions io;
  if (em.cfg.has("verify.dim_range")) {
    const std::vector<long> d = em.cfg.integers("verify.dim_range");
    if (d.size() != 2 || d[0] < 2 || d[1] < d[0]) throw InputError("config key 'verify.dim_range' must be [lo, hi] with 2 <= lo <= hi");
    io.dim_min = static_cast<std::size_t>(d[0]);
    io.dim_max = static_cast<std::size_t>(d[1]);
  }
  if (em.cfg.has("verify.gap")) io.gap = pair_interval(em.cfg, "verify.gap");
  if (em.cfg.has("verify.e0_fraction")) io.e0_fraction = em.cfg.number("verify.e0_fraction");
  std::optional<double> guard;
  if (em.cfg.has("verify.guard")) guard = em.cfg.positive("verify.guard", 1.0);
  const double tol = em.cfg.positive("verify.tol", 1e-8);
  const long random_mu = em.cfg.integer("verify.random_mu", 20);
  if (random_mu < 0) throw InputError("config key 'verify.random_mu' must be >= 0");
  const bool prop21 = variant == "prop21";
  const BoundVariant bv = prop21 ? BoundVariant::kT11 : parse_bound_variant(variant);
  if (em.opts.dry_run) {
    em.plan(variant + " campaign over seeds " + std::to_string(lo) + ".." + std::to_string(hi) + ", dimensions " +
            std::to_string(io.dim_min) + ".." + std::to_string(io.dim_max));
    return 0;
  }
  std::size_t violations = 0;
  json payload;
  Table tab;
  if (prop21) {
    const Prop21Campaign c = run_prop21_campaign(lo, hi, io, static_cast<std::size_t>(random_mu), tol);
    violations = c.violations;
    payload = to_json(c);
    tab.columns = {"seed", "dim", "grid_points", "nontrivial", "violations", "max_residual"};
    for (const auto& r : c.results)
      tab.rows.push_back({std::to_string(r.seed), std::to_string(r.dim), std::to_string(r.report.checks.size()),
                          std::to_string(r.report.nontrivial), std::to_string(r.report.violations),
                          num(r.report.max_eigenvector_residual)});
  } else {
    const BoundCampaign c = run_bound_campaign(bv, lo, hi, io, guard);
    violations = c.violations;
    payload = to_json(c);
    tab.columns = {"seed", "dim", "e0", "lhs", "rhs", "satisfied", "terms"};
    for (const auto& r : c.results) {
      std::string terms;
      for (const BoundTerm& t : r.report.terms)
        terms += (terms.empty() ? "" : ";") + t.name + "=" + std::to_string(t.value);
      tab.rows.push_back({std::to_string(r.seed), std::to_string(r.dim), num(r.report.e0), std::to_string(r.report.lhs),
                          std::to_string(r.report.rhs), r.report.satisfied ? "1" : "0", terms});
    }
  }
  em.emit(payload, tab, "json");
  em.log << variant << ": " << (hi - lo + 1) << " instances, " << violations << " violations\n";
  return violations > 0 ? 3 : 0;
}

}  // namespace

std::vector<SumIdentityResult> sum_identity_checks(const ExperimentConfig& cfg) {
  const JacobiOperator op = make_operator(cfg);
  const LtVariant variant = parse_lt_variant(cfg.text("ltsum.variant", "thm13"));
  const ConvergenceOptions o = ltsum_options(cfg, variant);
  const long size = o.schedule.empty() ? 400 : o.schedule.back();
  const SumFunction f = SumFunction::power(o.alpha);
  const double exterior_eps = cfg.positive("ltsum.identity_epsilon_exterior", 1.0);
  const BandSet bands = compute_bands(op.background());
  std::vector<SumIdentityResult> out;
  for (const SpectralGap& g : bands.components()) {
    const double eps = g.exterior ? exterior_eps : cfg.positive("ltsum.identity_epsilon", 0.25 * g.range.width());
    if (std::isfinite(g.range.lo)) out.push_back(check_sum_identity(op, g.range.lo, eps, f, size, o.tol));
    if (std::isfinite(g.range.hi)) out.push_back(check_sum_identity(op, g.range.hi, -eps, f, size, o.tol));
  }
  return out;
}

int run_subcommand(const std::string& command, const ExperimentConfig& cfg, const RunOptions& opts,
                   std::ostream& log) {
  const Emitter em{command, cfg, opts, log};
  if (command == "bands") return cmd_bands(em);
  if (command == "count") return cmd_count(em);
  if (command == "bs") return cmd_bs(em);
  if (command == "split") return cmd_split(em);
  if (command == "green") return cmd_green(em);
  if (command == "green-scan") return cmd_green_scan(em);
  if (command == "ltsum") return cmd_ltsum(em);
  if (command == "verify") return cmd_verify(em);
  throw InputError("unknown subcommand '" + command + "'");
}

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string format;
  bool dry_run = false;
  bool no_timestamp = false;
  std::optional<double> tol;
  std::string window;
  std::string interval;
  std::optional<double> alpha;
  std::string schedule;
  std::string variant;
  std::string seeds;
  std::string dim_range;
  std::optional<double> lambda;
  std::string pairs;
  std::string edge;
  std::optional<long> grid_points;
  std::optional<double> e0;
};

void apply_flags(const std::string& command, const Flags& f, ExperimentConfig& cfg) {
  const std::string s = section_of(command);
  if (f.tol) cfg.set(s + ".tol", *f.tol);
  if (!f.window.empty()) cfg.set(s + ".window", f.window);
  if (!f.interval.empty()) cfg.set("count.interval", parse_list(f.interval));
  if (f.alpha) cfg.set("ltsum.alpha", *f.alpha);
  if (!f.schedule.empty()) {
    std::vector<long> sched;
    for (double v : parse_list(f.schedule)) {
      if (v != std::floor(v)) throw InputError("--schedule entries must be integers");
      sched.push_back(static_cast<long>(v));
    }
    cfg.set("ltsum.schedule", sched);
  }
  if (!f.variant.empty()) cfg.set(command == "verify" ? "verify.variant" : "ltsum.variant", f.variant);
  if (!f.seeds.empty()) {
    parse_range(f.seeds);
    cfg.set("verify.seeds", f.seeds);
  }
  if (!f.dim_range.empty()) {
    std::vector<long> d;
    for (double v : parse_list(f.dim_range)) d.push_back(static_cast<long>(v));
    cfg.set("verify.dim_range", d);
  }
  if (f.lambda) cfg.set(command == "bs" ? "bs.energy" : "green.lambda", *f.lambda);
  if (!f.pairs.empty()) {
    parse_pairs(f.pairs);
    cfg.set("green.pairs", f.pairs);
  }
  if (!f.edge.empty()) cfg.set("green_scan.edge", f.edge);
  if (f.grid_points) cfg.set("green_scan.points", *f.grid_points);
  if (f.e0) cfg.set("bs.e0", *f.e0);
}

}  // namespace

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Eigenvalue counting in spectral gaps of perturbed Jacobi matrices"};
  app.set_version_flag("--version", std::string("gapcount ") + version());
  app.require_subcommand(1);
  Flags f;
  const std::map<std::string, std::string> help{
      {"bands", "band edges of the periodic background"},
      {"count", "inertia count of the truncated operator in an interval"},
      {"bs", "Birman-Schwinger kernel and gap counting bounds"},
      {"split", "positive/negative split of the perturbation"},
      {"green", "Green's function entries in a gap"},
      {"green-scan", "near-edge Green's function constants"},
      {"ltsum", "gap power sums over a window schedule"},
      {"verify", "seeded verification campaigns"}};
  for (const std::string& name : subcommands()) {
    CLI::App* s = app.add_subcommand(name, help.at(name));
    s->add_option("--config", f.config, "TOML configuration file");
    s->add_option("--out", f.out, "output file");
    s->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    s->add_flag("--dry-run", f.dry_run, "validate and print the plan only");
    s->add_flag("--no-timestamp", f.no_timestamp, "omit the generation time from headers");
    s->add_option("--tol", f.tol, "tolerance");
    if (name == "count" || name == "bs" || name == "split")
      s->add_option("--window", f.window, "sites lo..hi or half width h (use --window=-N..N)");
    if (name == "count") s->add_option("--interval", f.interval, "open interval a,b");
    if (name == "ltsum") {
      s->add_option("--alpha", f.alpha, "exponent");
      s->add_option("--schedule", f.schedule, "window sizes, comma-separated");
    }
    if (name == "ltsum" || name == "verify") s->add_option("--variant", f.variant, "experiment variant");
    if (name == "verify") {
      s->add_option("--seeds", f.seeds, "seed range a..b");
      s->add_option("--dim-range", f.dim_range, "dimension range lo,hi");
    }
    if (name == "green" || name == "bs") s->add_option("--lambda", f.lambda, "energy");
    if (name == "bs") s->add_option("--e0", f.e0, "gap bound energy in the lower half gap");
    if (name == "green") s->add_option("--pairs", f.pairs, "site pairs n,m;n,m");
    if (name == "green-scan") {
      s->add_option("--edge", f.edge, "lower or upper")->check(CLI::IsMember({"lower", "upper"}));
      s->add_option("--grid-points", f.grid_points, "grid size");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    ExperimentConfig cfg = f.config.empty() ? ExperimentConfig::from_string("", "<none>")
                                            : ExperimentConfig::from_file(f.config);
    apply_flags(command, f, cfg);
    RunOptions opts;
    opts.out = f.out;
    opts.format = f.format;
    opts.dry_run = f.dry_run;
    opts.timestamp = !f.no_timestamp;
    return run_subcommand(command, cfg, opts, out);
  } catch (const ResolventProximityError& e) {
    err << "numerical error (resolvent proximity): " << e.what() << "\n"
        << "  energy = " << num(e.energy()) << ", distance = " << num(e.distance()) << "\n";
    return 2;
  } catch (const RootFindingError& e) {
    err << "numerical error (root finding): " << e.what() << "\n"
        << "  bracket = [" << num(e.lo()) << ", " << num(e.hi()) << "]\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const SizeError& e) {
    err << "error: " << e.what() << " (suggested size " << e.suggested() << ")\n";
    return 1;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace gapcount::cli
