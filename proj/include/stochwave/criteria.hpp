#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stochwave/grid.hpp"
#include "stochwave/model.hpp"
#include "stochwave/noise.hpp"

namespace stochwave {

/// How the initial-data integrals entering the explosion conditions were
/// evaluated.
enum class IntegralRoute {
  /// Grid quadrature of the sampled Dirichlet fields: the discrete problem
  /// that run_path integrates.
  Grid,
  /// Trapezoid rule of the continuum data on the closed box. Used for data
  /// that does not vanish on the boundary, where the Dirichlet restriction
  /// would add an O(1/h) boundary-layer gradient energy.
  Continuum,
};

const char* to_string(IntegralRoute r);

struct InitialIntegrals {
  double u0_v0 = 0.0;
  double u0_sq = 0.0;
  double v0_sq = 0.0;
  double grad_u0_sq = 0.0;
  double F_u0 = 0.0;
  double energy = 0.0;
  IntegralRoute route = IntegralRoute::Grid;
};

/// Continuum route for the decaying half-plane data, grid route otherwise.
InitialIntegrals initial_integrals(const ModelSpec& m, const Grid& grid);
InitialIntegrals initial_integrals(const ModelSpec& m, const Grid& grid, IntegralRoute route);

/// lhs > rhs with ties inside a few ulps reported as not satisfied.
bool strictly_greater(double lhs, double rhs);

struct ConditionReport {
  double b1_lhs = 0.0;  // (u0, v0)
  bool b1_pass = false;
  double b2_lhs = 0.0;  // (F(u0), 1)
  double b2_rhs = 0.0;  // (e(u0; v0) + noise budget) / 2
  bool b2_pass = false;
  /// (u, f(u)) / (F(u), 1) for the built-in family; 2p for monomials.
  std::optional<double> b3_factor;
  /// Minimum of the same ratio over the randomized probe fields.
  std::optional<double> b3_probe_min;
  /// (u, f(u)) >= 2 (F(u), 1), the factor the concavity bound consumes.
  bool b3_pass = false;
  /// (u, f(u)) >= (1/2) (F(u), 1), the weaker printed form.
  bool b3_pass_half = false;
  std::optional<double> T0;
  std::optional<double> lambda_min;
  std::optional<double> clipped_mass;
  double noise_budget = 0.0;
  InitialIntegrals integrals;
  std::size_t grid_nodes = 0;
  std::size_t noise_nodes = 0;

  bool all_pass() const { return b1_pass && b2_pass && b3_pass; }
};

struct CheckOptions {
  int probe_count = 100;
  std::uint64_t probe_seed = 0x5eed;
};

/// Evaluates the explosion conditions on the given data. `factor` supplies
/// the clipped mass of the noise covariance when it has been computed.
ConditionReport check_conditions(const ModelSpec& m, const Grid& grid, const NoiseSpec& ns,
                                 const NoiseFactor* factor = nullptr, CheckOptions opts = {});

/// Parameters of the half-plane example.
struct ExampleParams {
  double c = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  int p = 2;
  double r0 = 1.0;
  double sigma0 = 1.0;
  double rho = 1.0;
  double nu = 1.0;
  double a_f = 1.0;

  void validate() const;
};

/// Smallest nonlinearity amplitude for which the energy condition holds in
/// the half-plane example:
///   p (2p - 1) / beta^(2p) * (1 + (alpha + 2 c^2 / 3) beta^2 + r0 sigma0^2 pi^2 / (8 rho nu)).
double example_threshold(const ExampleParams& params);

struct ClosedForms {
  double u0_v0;
  double F_u0;
  double noise_budget;
  double v0_sq;
  double u0_sq;
  double grad_u0_sq;
  double energy;
};
ClosedForms example_closed_forms(const ExampleParams& params);

/// b2 evaluated from the closed forms: (F(u0), 1) > (e + budget) / 2.
bool example_b2_closed_form(const ExampleParams& params);

struct TableRow {
  std::string quantity;
  double closed_form;
  double quadrature;
  double rel_err;
};

/// Closed forms of the half-plane example next to their quadrature on the
/// given 2-D half-plane grid, plus rows for lambda_min and T0.
std::vector<TableRow> closed_form_table(const ExampleParams& params, const Grid& grid);

struct ThresholdSweepPoint {
  double factor;  // a_f / lambda_min
  bool b2_pass;
  bool above_threshold;
};

struct ThresholdConsistency {
  double lambda_min = 0.0;
  std::vector<ThresholdSweepPoint> sweep;
  bool consistent = false;
};

/// Sweeps a_f around lambda_min and checks a_f > lambda_min <=> b2 holds.
ThresholdConsistency consistency_check_b2_vs_threshold(
    const ExampleParams& params,
    const std::vector<double>& factors = {0.5, 0.9, 0.99, 0.999, 1.0, 1.001, 1.01, 1.1, 2.0});

/// Model and noise specs that realise the example parameters.
ModelSpec example_model(const ExampleParams& params);
NoiseSpec example_noise(const ExampleParams& params);

}  // namespace stochwave
