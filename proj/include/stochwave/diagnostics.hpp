#pragma once

#include <optional>
#include <vector>

#include "stochwave/grid.hpp"
#include "stochwave/integrator.hpp"
#include "stochwave/model.hpp"

namespace stochwave {

/// e(u; v) = c^2 |Du|^2 + alpha |u|^2 + |v|^2
double energy(const ModelSpec& m, const Field& u, const Field& v, const Grid& grid);

/// (F(u), 1) by the grid quadrature.
double F_integral(const ModelSpec& m, const Field& u, const Grid& grid);

/// |v|^2 - c^2 |Du|^2 - alpha |u|^2 + (u, f(u)); its ensemble mean is phi''.
double phi_second_derivative_integrand(const ModelSpec& m, const Field& u, const Field& v,
                                       const Grid& grid);

/// Monte Carlo estimates on the checkpoint axis. Paths leave the estimate at
/// their blow-up time and are counted in frac_blown from then on; the series
/// stop after the first checkpoint with no path alive.
struct EnsembleStats {
  std::vector<double> times;
  std::vector<std::optional<double>> phi;     // 1/2 mean |u_t|^2 over alive paths
  std::vector<double> phi_ci;                 // 95% half-width of phi
  std::vector<std::optional<double>> psi;     // phi^(-lambda) where phi > 0
  std::vector<double> frac_blown;
  std::vector<std::optional<double>> mean_energy;
  std::vector<std::optional<double>> mean_uv;  // estimates phi'
  std::vector<std::size_t> n_alive;
  std::size_t n_paths = 0;
  double lambda = 0.5;

  std::size_t size() const { return times.size(); }
};

/// `axis` lists the checkpoint times every path was scheduled to record; when
/// empty it is taken from the longest record.
EnsembleStats ensemble_stats(const std::vector<PathRecord>& records, std::vector<double> axis = {},
                             double lambda = 0.5);

/// Energy-identity residual normalized by e(u0; v0).
std::vector<double> energy_residual(const PathRecord& rec);

/// Last-two-point linear extrapolation of psi to zero. Advisory only.
std::optional<double> extrapolated_blowup_time(const EnsembleStats& stats);

}  // namespace stochwave
