#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "stochwave/criteria.hpp"
#include "stochwave/ensemble.hpp"
#include "stochwave/grid.hpp"
#include "stochwave/integrator.hpp"
#include "stochwave/model.hpp"
#include "stochwave/noise.hpp"

namespace stochwave {

enum class ModelKind { Example4, Custom1d };

/// Run configuration, read from a sectioned `key = value` text file:
///
///   [domain]  dim, lower, upper, nodes, truncation_L
///   [model]   kind (example4 | custom1d), c, alpha, a_f, p, beta, sigma0, nu
///   [noise]   kernel (dotprod | sqexp | zero), r0, rho, psd_clip_tol, coarse_noise_stride
///   [time]    dt | cfl_factor, t_max, record_every, blowup_threshold_ratio, scheme
///   [mc]      n_paths, master_seed, max_workers
///   [output]  directory
///
/// Per-axis values (lower, upper, nodes) are comma separated. Unknown
/// sections or keys are rejected.
struct Config {
  ModelKind kind = ModelKind::Custom1d;
  GridSpec grid;
  ModelSpec model;
  NoiseSpec noise;
  TimeSpec time;
  EnsembleSpec mc;
  std::filesystem::path output_dir = ".";
  /// Raw parameters of the half-plane example (example4 only).
  ExampleParams example;
};

using RawConfig = std::map<std::string, std::map<std::string, std::string>>;

RawConfig read_raw_config(std::istream& in);

/// Applies `section.key=value` overrides; the key must be a known one.
void apply_overrides(RawConfig& raw, const std::vector<std::string>& overrides);

Config build_config(const RawConfig& raw);

Config load_config(const std::filesystem::path& file, const std::vector<std::string>& overrides = {});
Config parse_config(const std::string& text, const std::vector<std::string>& overrides = {});

}  // namespace stochwave
