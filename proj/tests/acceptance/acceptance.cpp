// Standalone acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gapcount/bands.hpp"
#include "gapcount/birman_schwinger.hpp"
#include "gapcount/cli/config.hpp"
#include "gapcount/cli/runner.hpp"
#include "gapcount/cli/verify.hpp"
#include "gapcount/dense.hpp"
#include "gapcount/error.hpp"
#include "gapcount/green.hpp"
#include "gapcount/inertia.hpp"
#include "gapcount/ltsums.hpp"
#include "gapcount/splitting.hpp"

namespace fs = std::filesystem;
using namespace gapcount;
using namespace gapcount::cli;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<fs::path> shipped_configs() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(GAPCOUNT_CONFIG_DIR))
    if (e.path().extension() == ".toml") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

Outcome bound_campaign(BoundVariant v, double limit_s, double& elapsed_out, bool report_tight) {
  InstanceOptions opts;
  const auto t0 = std::chrono::steady_clock::now();
  const BoundCampaign c = run_bound_campaign(v, 0, 199, opts, std::nullopt);
  elapsed_out = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Outcome o;
  o.pass = c.violations == 0 && c.results.size() == 200 && elapsed_out < limit_s;
  o.detail = to_string(v) + ": " + std::to_string(c.results.size()) + " instances, " + std::to_string(c.violations) +
             " violations";
  if (report_tight) o.detail += ", " + std::to_string(c.tight) + " with rhs - lhs <= 1";
  return o;
}

Outcome criterion1() {
  InstanceOptions opts;
  opts.dim_min = 10;
  opts.dim_max = 100;
  const auto t0 = std::chrono::steady_clock::now();
  const Prop21Campaign c = run_prop21_campaign(0, 99, opts, 20, 1e-8);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Outcome o;
  o.pass = c.results.size() == 100 && c.violations == 0 && c.nontrivial > 0 && s < 60.0;
  o.detail = std::to_string(c.results.size()) + " instances, " + std::to_string(c.nontrivial) +
             " eigenvalue hits, " + std::to_string(c.violations) + " violations, " + fmt("%.1f s", s);
  return o;
}

Outcome criterion2() {
  double s = 0.0;
  Outcome o = bound_campaign(BoundVariant::kT11, 120.0, s, true);
  o.detail += fmt(", %.1f s", s);
  return o;
}

Outcome criterion3() {
  double s31 = 0.0, s32 = 0.0;
  const Outcome a = bound_campaign(BoundVariant::kT31, 120.0, s31, false);
  const Outcome b = bound_campaign(BoundVariant::kT32, 120.0, s32, false);
  return {a.pass && b.pass, a.detail + "; " + b.detail + fmt(", %.1f s", s31 + s32)};
}

Outcome criterion4() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_ulps = 0.0, worst_min = 0.0;
  bool ok = true;
  for (int k = 0; k < 50; ++k) {
    PerturbationSpec spec;
    const long radius = 3 + static_cast<long>(rng() % 20);
    for (long n = -radius; n <= radius; ++n) spec.sites[n] = {0.5 * u(rng), 2.0 * u(rng)};
    const Perturbation p = make_perturbation(spec);
    const SplitPerturbation s = split(p, Window::symmetric(radius + 2));
    const SplitChecks c = check_split(s, p);
    worst_ulps = std::max(worst_ulps, c.max_reconstruction_ulps);
    const double norm = std::max(1.0, c.minus_norm);
    worst_min = std::min(worst_min, std::min(c.plus_min, c.minus_min_eigenvalue) / norm);
    ok = ok && c.max_reconstruction_ulps <= 1.0 && c.plus_min >= -1e-12 * norm && c.minus_min_eigenvalue >= -1e-12 * norm;
  }
  return {ok, "50 perturbations, max " + fmt("%.0f", worst_ulps) + " ulp, min relative eigenvalue " +
                  fmt("%.2e", worst_min)};
}

Outcome criterion5() {
  const PeriodicBackground bg({1.0, 1.0}, {1.0, -1.0});
  const BandSet bands = compute_bands(bg);
  // Delta = lambda^2 - 3, so Delta = -2 at +-1 and Delta = 2 at +-sqrt(5).
  const double roots[] = {-std::sqrt(5.0), -1.0, 1.0, std::sqrt(5.0)};
  double err = 0.0;
  const auto& edges = bands.edges();
  bool ok = edges.size() == 4;
  for (std::size_t i = 0; ok && i < 4; ++i) err = std::max(err, std::fabs(edges[i].lambda - roots[i]));
  ok = ok && err <= 1e-8;
  const TruncatedMatrix t = truncate(bg, Window::symmetric(1000));
  const Eigen::VectorXd ev = symmetric_eigenvalues(to_dense(t.view()));
  std::size_t deep = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] > -1.0 + 1e-2 && ev[i] < 1.0 - 1e-2) ++deep;
  ok = ok && deep <= 2;
  return {ok, std::to_string(edges.size()) + " edges, max error " + fmt("%.1e", err) + "; N = " +
                  std::to_string(t.size()) + " has " + std::to_string(deep) + " eigenvalue(s) deeper than 1e-2 in the gap"};
}

Outcome criterion6() {
  PerturbationSpec spec;
  spec.sites[0] = {0.0, 1.5};
  const JacobiOperator op(PeriodicBackground::free(), make_perturbation(spec));
  const TruncatedMatrix t = truncate(op, Window::symmetric(1000));
  const std::vector<double> above = eigs_in_interval(t.view(), {2.0, 10.0}, 1e-12);
  bool ok = above.size() == 1 && std::fabs(above[0] - 2.5) <= 1e-6;
  const TruncatedMatrix a = truncate(op.background(), Window::symmetric(1000));
  const SplitPerturbation s = split(op.perturbation(), Window::symmetric(1000));
  const BSOperator k = bs_operator(a.view(), s.plus, 2.5, 1e-8);
  const Eigen::VectorXd kappa = symmetric_eigenvalues(k.kernel);
  double best = INFINITY;
  for (Eigen::Index i = 0; i < kappa.size(); ++i) best = std::min(best, std::fabs(kappa[i] - 1.0));
  ok = ok && best <= 1e-4;
  std::string detail = std::to_string(above.size()) + " eigenvalue(s) above 2";
  if (!above.empty()) detail += fmt(", at %.12f", above[0]);
  return {ok, detail + ", kernel eigenvalue error " + fmt("%.1e", best)};
}

Outcome criterion7() {
  const PeriodicBackground bg({1.0, 1.0}, {1.0, -1.0});
  GreenScanOptions o;
  o.component = 1;
  o.edge = GapEdge::kUpper;
  o.points = 50;
  const auto t0 = std::chrono::steady_clock::now();
  const GreenScanReport r = scan_green_bounds(bg, o);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double decades = std::log10(r.rows.back().delta / r.rows.front().delta);
  const bool ok = r.edge == 1.0 && r.rows.size() == 50 && decades >= 5.0 - 1e-9 && r.c52.bounded && r.c54.bounded &&
                  r.c55.bounded && s < 120.0;
  return {ok, "edge " + fmt("%g", r.edge) + ", " + fmt("%.1f", decades) + " decades, slopes " + fmt("%.4f", r.c52.slope) +
                  " / " + fmt("%.4f", r.c54.slope) + " / " + fmt("%.4f", r.c55.slope) + fmt(", %.1f s", s)};
}

Outcome criterion8() {
  bool ok = true;
  std::size_t checks = 0;
  double worst = 0.0;
  std::string failed;
  for (const fs::path& p : shipped_configs()) {
    const ExperimentConfig cfg = ExperimentConfig::from_file(p.string());
    for (const SumIdentityResult& r : sum_identity_checks(cfg)) {
      ++checks;
      worst = std::max(worst, std::fabs(r.lhs - r.rhs_exact) / (1.0 + std::fabs(r.lhs)));
      if (!r.exact_ok || !r.quadrature_ok) {
        ok = false;
        failed += " " + p.stem().string() + "@" + fmt("%g", r.lambda0);
      }
    }
  }
  ok = ok && checks > 0;
  return {ok, std::to_string(checks) + " checks over " + std::to_string(shipped_configs().size()) +
                  " configs, worst relative gap " + fmt("%.1e", worst) + (failed.empty() ? "" : ", failed:" + failed)};
}

Outcome criterion9() {
  const ExperimentConfig cfg = ExperimentConfig::from_file(std::string(GAPCOUNT_CONFIG_DIR) + "/p2_thm13.toml");
  const JacobiOperator op(cfg.background(), make_perturbation(cfg.perturbation()));
  ConvergenceOptions o;
  o.alpha = cfg.number("ltsum.alpha");
  o.schedule = cfg.integers("ltsum.schedule");
  o.majorant = cfg.flag("ltsum.majorant", false);
  const auto t0 = std::chrono::steady_clock::now();
  const ConvergenceTable t = convergence_experiment(LtVariant::kThm13, op, o);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool shrinking = true;
  std::string diffs;
  double prev = -1.0;
  for (std::size_t i = 1; i < t.totals.size(); ++i) {
    const double d = std::fabs(t.totals[i] - t.totals[i - 1]);
    diffs += (diffs.empty() ? "" : ", ") + fmt("%.2e", d);
    if (prev >= 0.0 && !(d <= prev / 1.5)) shrinking = false;
    prev = d;
  }
  const bool ok = t.verdict == "stabilized" && o.schedule.back() <= 800 && shrinking && s < 300.0;
  std::string detail = "verdict " + t.verdict + " at N = " + std::to_string(o.schedule.back()) + ", differences " + diffs;
  if (t.majorant) detail += t.majorant->finite_looking ? ", majorant finite-looking" : ", majorant not finite-looking";
  return {ok, detail + fmt(", %.1f s", s)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

Outcome criterion10() {
  const fs::path dir = fs::temp_directory_path() / ("gapcount_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::size_t compared = 0;
  std::string mismatched;
  std::ostringstream log;
  for (const fs::path& p : shipped_configs()) {
    ExperimentConfig cfg = ExperimentConfig::from_file(p.string());
    std::vector<std::string> commands{"bands"};
    for (const char* c : {"count", "bs", "split", "green", "green_scan", "ltsum"})
      if (cfg.has(c)) commands.push_back(std::string(c) == "green_scan" ? "green-scan" : c);
    if (p.stem() == "p2") {
      cfg.set("verify.seeds", std::string_view("0..19"));
      commands.push_back("verify");
    }
    for (const std::string& cmd : commands) {
      for (const char* fmt_name : {"csv", "json"}) {
        std::string bodies[2];
        for (int run = 0; run < 2; ++run) {
          const fs::path out = dir / (p.stem().string() + "_" + cmd + "_" + std::to_string(run) + "." + fmt_name);
          RunOptions opts;
          opts.out = out.string();
          opts.timestamp = false;
          run_subcommand(cmd, cfg, opts, log);
          bodies[run] = slurp(out);
          // ltsum writes its details next to a CSV table.
          const fs::path side = fs::path(out).replace_extension(".json");
          if (std::string(fmt_name) == "csv" && fs::exists(side)) bodies[run] += slurp(side);
        }
        ++compared;
        if (bodies[0] != bodies[1] || bodies[0].empty()) mismatched += " " + p.stem().string() + ":" + cmd + "." + fmt_name;
      }
    }
  }
  fs::remove_all(dir);
  return {mismatched.empty() && compared > 0,
          std::to_string(compared) + " output pairs compared" + (mismatched.empty() ? "" : ", differing:" + mismatched)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Birman-Schwinger equivalence on 100 engineered instances", criterion1},
      {"first counting bound on 200 instances with indefinite B", criterion2},
      {"semibounded and upper-half counting bounds on 200 instances each", criterion3},
      {"splitting reconstruction and positivity", criterion4},
      {"band structure of the period-two example", criterion5},
      {"impurity bound state at 2.5", criterion6},
      {"near-edge Green's function constants", criterion7},
      {"sum identity on every shipped config", criterion8},
      {"power sums stabilize for the trace-class example", criterion9},
      {"reproducible outputs", criterion10}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << "criterion " << (i + 1) << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << " ("
              << o.detail << ")" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
