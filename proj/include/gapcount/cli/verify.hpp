#pragma once

// Seeded verification campaigns over engineered random instances.

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <vector>

#include "gapcount/birman_schwinger.hpp"

namespace gapcount::cli {

struct BoundSeedResult {
  std::uint64_t seed = 0;
  std::size_t dim = 0;
  BoundReport report;
};

struct BoundCampaign {
  BoundVariant variant = BoundVariant::kT11;
  std::vector<BoundSeedResult> results;
  std::size_t violations = 0;
  std::size_t tight = 0;  // instances with rhs - lhs <= 1
};

/// One gap_bound evaluation per seed in [seed_lo, seed_hi].
BoundCampaign run_bound_campaign(BoundVariant variant, long seed_lo, long seed_hi, const InstanceOptions& opts,
                                 std::optional<double> guard);

struct Prop21SeedResult {
  std::uint64_t seed = 0;
  std::size_t dim = 0;
  Prop21Report report;
};

struct Prop21Campaign {
  std::vector<Prop21SeedResult> results;
  std::size_t violations = 0;
  std::size_t nontrivial = 0;  // grid points where e was an eigenvalue
};

Prop21Campaign run_prop21_campaign(long seed_lo, long seed_hi, const InstanceOptions& opts, std::size_t random_mu,
                                   double tol);

nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(const BoundCampaign& c);
nlohmann::json to_json(const Prop21Campaign& c);

}  // namespace gapcount::cli
