#pragma once

#include <cstdint>
#include <optional>
#include <ostream>

#include "stochwave/config.hpp"
#include "stochwave/criteria.hpp"
#include "stochwave/csv.hpp"
#include "stochwave/ensemble.hpp"

namespace stochwave {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitConditionFailed = 2,
};

/// Largest noise covariance factorized by the CLI; bigger grids need
/// noise.coarse_noise_stride.
constexpr std::size_t kMaxNoiseNodes = 4096;

/// Noise factor for the clipped-mass report, or nothing when the noise grid
/// is empty or too large to factorize.
std::optional<NoiseFactor> report_noise_factor(const Config& cfg, const Grid& grid);

// Rendering is split from the commands so tests can compare bytes directly.
csv::Table report_csv(const ConditionReport& r);
std::string report_text(const ConditionReport& r, const Config& cfg);
csv::Table path_csv(const PathRecord& rec);
csv::Table ensemble_csv(const EnsembleStats& stats);
csv::Table paths_manifest_csv(const std::vector<PathRecord>& records);
csv::Table example_table_csv(const std::vector<TableRow>& rows);
std::string summary_text(const ExplosionSummary& s, const EnsembleStats& stats,
                         const ConditionReport& report);

/// Worker count after the STOCHWAVE_MAX_WORKERS environment override.
unsigned effective_workers(const Config& cfg);

int cmd_check(const Config& cfg, std::ostream& log);
int cmd_simulate(const Config& cfg, std::optional<std::uint64_t> seed, std::ostream& log);
int cmd_ensemble(const Config& cfg, std::ostream& log);
int cmd_reproduce_example(const Config& cfg, std::ostream& log);

}  // namespace stochwave
