#include "gapcount/cli/verify.hpp"

#include "gapcount/error.hpp"
#include "gapcount/parallel.hpp"

namespace gapcount::cli {

namespace {

std::size_t seed_count(long lo, long hi) {
  if (lo < 0 || hi < lo) throw InputError("seed range must satisfy 0 <= lo <= hi");
  return static_cast<std::size_t>(hi - lo + 1);
}

}  // namespace

BoundCampaign run_bound_campaign(BoundVariant variant, long seed_lo, long seed_hi, const InstanceOptions& opts,
                                 std::optional<double> guard) {
  BoundCampaign c;
  c.variant = variant;
  c.results = parallel_map(seed_count(seed_lo, seed_hi), [&](std::size_t i) {
    const auto seed = static_cast<std::uint64_t>(seed_lo) + i;
    const EngineeredInstance inst = make_instance(seed, opts, variant);
    BoundSeedResult r;
    r.seed = seed;
    r.dim = static_cast<std::size_t>(inst.a.rows());
    r.report = gap_bound(variant, inst.a, inst.b_plus, inst.b_minus, inst.gap, inst.e0,
                         guard ? *guard : default_guard(inst.gap));
    return r;
  });
  for (const auto& r : c.results) {
    if (!r.report.satisfied) ++c.violations;
    if (r.report.satisfied && r.report.rhs - r.report.lhs <= 1) ++c.tight;
  }
  return c;
}

Prop21Campaign run_prop21_campaign(long seed_lo, long seed_hi, const InstanceOptions& opts, std::size_t random_mu,
                                   double tol) {
  Prop21Campaign c;
  c.results = parallel_map(seed_count(seed_lo, seed_hi), [&](std::size_t i) {
    const auto seed = static_cast<std::uint64_t>(seed_lo) + i;
    const Prop21Instance inst = make_prop21_instance(seed, opts, random_mu);
    Prop21SeedResult r;
    r.seed = seed;
    r.dim = static_cast<std::size_t>(inst.a.rows());
    r.report = verify_prop21(inst.a, inst.b, inst.gap, inst.e, inst.mu_grid, tol);
    return r;
  });
  for (const auto& r : c.results) {
    c.violations += r.report.violations;
    c.nontrivial += r.report.nontrivial;
  }
  return c;
}

nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json j;
  j["variant"] = to_string(r.variant);
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  nlohmann::json terms = nlohmann::json::object();
  for (const auto& t : r.terms) terms[t.name] = t.value;
  j["terms"] = terms;
  j["satisfied"] = r.satisfied;
  j["x"] = r.x;
  j["y"] = r.y;
  j["e0"] = r.e0;
  j["e1"] = r.e1;
  j["target"] = {r.target.lo, r.target.hi};
  if (r.q) j["q"] = *r.q;
  return j;
}

nlohmann::json to_json(const BoundCampaign& c) {
  nlohmann::json j;
  j["variant"] = to_string(c.variant);
  j["instances"] = c.results.size();
  j["violations"] = c.violations;
  j["tight"] = c.tight;
  nlohmann::json seeds = nlohmann::json::array();
  for (const auto& r : c.results) {
    nlohmann::json s = to_json(r.report);
    s["seed"] = r.seed;
    s["dim"] = r.dim;
    seeds.push_back(std::move(s));
  }
  j["seeds"] = std::move(seeds);
  return j;
}

nlohmann::json to_json(const Prop21Campaign& c) {
  nlohmann::json j;
  j["variant"] = "prop21";
  j["instances"] = c.results.size();
  j["violations"] = c.violations;
  j["nontrivial"] = c.nontrivial;
  nlohmann::json seeds = nlohmann::json::array();
  for (const auto& r : c.results) {
    nlohmann::json s;
    s["seed"] = r.seed;
    s["dim"] = r.dim;
    s["energy"] = r.report.energy;
    s["grid_points"] = r.report.checks.size();
    s["nontrivial"] = r.report.nontrivial;
    s["violations"] = r.report.violations;
    s["max_eigenvector_residual"] = r.report.max_eigenvector_residual;
    seeds.push_back(std::move(s));
  }
  j["seeds"] = std::move(seeds);
  return j;
}

}  // namespace gapcount::cli
