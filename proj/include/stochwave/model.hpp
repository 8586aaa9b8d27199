#pragma once

#include <utility>
#include <variant>

#include "stochwave/grid.hpp"

namespace stochwave {

struct ZeroNonlinearity {};

/// f(mu) = amplitude * mu^(2p-1), F(mu) = amplitude / (2p) * mu^(2p).
struct MonomialNonlinearity {
  double amplitude = 1.0;
  int p = 2;
};

using Nonlinearity = std::variant<ZeroNonlinearity, MonomialNonlinearity>;

struct ZeroNoiseAmplitude {};

/// sigma(mu, xi, x, t) = sigma0 * atan(1 + |xi|^2) * exp(-nu t).
struct ArctanNoiseAmplitude {
  double sigma0 = 1.0;
  double nu = 1.0;
};

using NoiseAmplitude = std::variant<ZeroNoiseAmplitude, ArctanNoiseAmplitude>;

/// g = beta / (1 + |x|^2), h = 1 / (1 + |x|^2) on the half-plane example.
struct DecayingInitialData {
  double beta = 1.0;
};

/// 1-D fundamental mode: g = beta * sin(pi s), h = sin(pi s) with s the
/// position rescaled to [0, 1] on the interval.
struct SineModeInitialData {
  double beta = 1.0;
};

struct FieldInitialData {
  Field g;
  Field h;
};

using InitialData = std::variant<DecayingInitialData, SineModeInitialData, FieldInitialData>;

struct ModelSpec {
  double c = 1.0;
  double alpha = 1.0;
  Nonlinearity nonlinearity = ZeroNonlinearity{};
  NoiseAmplitude sigma = ZeroNoiseAmplitude{};
  InitialData initial = DecayingInitialData{};

  void validate() const;
};

double f_eval(const ModelSpec& m, double mu);
double F_eval(const ModelSpec& m, double mu);

/// Noise amplitude at one node; depends on the gradient xi and on t only.
double sigma_eval(const ModelSpec& m, double mu, const Eigen::Ref<const Eigen::RowVectorXd>& xi,
                  const Point& x, double t);
double sigma_eval(const ModelSpec& m, double mu, double xi_sq, const Point& x, double t);

/// sup over (mu, xi) of sigma^2 at (x, t).
double q_envelope(const ModelSpec& m, const Point& x, double t);

/// Nonlinearity applied pointwise.
Field f_field(const ModelSpec& m, const Field& u);

/// Samples the initial displacement and velocity at the grid nodes.
std::pair<Field, Field> initial_fields(const ModelSpec& m, const Grid& grid);

/// Continuum initial profile and its gradient at an arbitrary point of the
/// closed domain. Available for the analytic initial-data kinds only.
struct InitialProfile {
  double g = 0.0;
  double h = 0.0;
  Point grad_g{0.0, 0.0};
};
bool has_analytic_initial_data(const ModelSpec& m);
InitialProfile initial_profile(const ModelSpec& m, const Grid& grid, const Point& x);

/// 2p for the monomial family; 0 for the zero nonlinearity.
int nonlinearity_degree(const ModelSpec& m);

}  // namespace stochwave
