#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "fastrec/core.hpp"

namespace fastrec {

enum class Regime { VeryPopular, Popular, Ordinary, Unpopular };

Regime parse_regime(const std::string& name);  // throws DataError
std::string regime_name(Regime r);

/// Demand band |U_j|/c_j per regime, as a closed integer interval of demand
/// sizes for a service of capacity c.
struct DemandBand {
  int lo, hi;
};
DemandBand regime_band(Regime r, int capacity);

struct SyntheticSpec {
  Regime regime = Regime::Popular;
  int n_users = 800;
  int n_services = 50;
  int cap_lo = 50;
  int cap_hi = 100;
  int topn = 5;
  std::uint64_t seed = 0;
  // Extra low-rated services per user, available as fillers and for runs
  // with a larger N than the one the demand plan was built for.
  int extra_rated = 10;
};

struct Dataset {
  ServiceCatalog catalog;
  RatingMatrix ratings;
  OriginalLists lists;
};

/// Draws capacities, plans per-service demand-set sizes inside the regime
/// band, assigns users to demand sets, and synthesizes ratings so that the
/// rebuilt top-N windows match the plan exactly. Deterministic under seed.
Dataset generate_synthetic(const SyntheticSpec& spec);

/// CSV formats (all with a header row):
///   ratings:  user_id,service_id,rating
///   services: service_id,capacity
///   trace:    round,user_id
std::string format_services(const ServiceCatalog& catalog);
std::string format_ratings(const RatingMatrix& ratings,
                           const ServiceCatalog& catalog);

ServiceCatalog load_services(const std::filesystem::path& path);
RatingMatrix load_ratings(const std::filesystem::path& path,
                          const ServiceCatalog& catalog);
/// Rounds are 1-based in the file; returns per-round participant indices.
ParticipationTrace load_trace(const std::filesystem::path& path, int rounds,
                              const RatingMatrix& ratings);

/// Effective recommendation capacity: ceil(raw / conversion_rate),
/// rate in (0, 1].
int apply_conversion_rate(int raw_capacity, double conversion_rate);

/// FNV-1a over file bytes; dataset fingerprints in run manifests.
std::uint64_t fnv1a_file(const std::filesystem::path& path);

}  // namespace fastrec
