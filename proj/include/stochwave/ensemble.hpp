#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stochwave/diagnostics.hpp"
#include "stochwave/integrator.hpp"

namespace stochwave {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of path i; any subset of paths can be recomputed in isolation.
constexpr std::uint64_t path_seed(std::uint64_t master_seed, std::uint64_t i) {
  return mix64(master_seed ^ ((i + 1) * 0x9E3779B97F4A7C15ULL));
}

struct EnsembleSpec {
  std::size_t n_paths = 1;
  std::uint64_t master_seed = 0;
  /// 0 picks the hardware concurrency.
  unsigned max_workers = 0;
};

struct EnsembleResult {
  std::vector<PathRecord> records;
  EnsembleStats stats;
};

EnsembleResult run_ensemble(const Problem& problem, const TimeSpec& ts, const EnsembleSpec& es,
                            double lambda = 0.5);

struct ExplosionSummary {
  std::size_t n_blown = 0;
  std::optional<double> t_blow_min;
  std::optional<double> t_blow_median;
  std::optional<double> t_blow_max;
  double frac_blown_final = 0.0;
  std::optional<double> T0;
  double margin = 0.1;
  /// t_blow_max <= T0 (1 + margin); vacuously true with no blown path.
  bool within_bound = true;
};

ExplosionSummary explosion_summary(const std::vector<PathRecord>& records, const EnsembleStats& stats,
                                   std::optional<double> T0, double margin = 0.1);

}  // namespace stochwave
