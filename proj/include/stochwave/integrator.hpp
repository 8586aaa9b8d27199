#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stochwave/grid.hpp"
#include "stochwave/model.hpp"
#include "stochwave/noise.hpp"

namespace stochwave {

enum class Scheme {
  /// Drift-kick-drift split with the noise kick evaluated at the half-drift
  /// state before the increment is drawn.
  PositionVerlet,
  /// Explicit Euler-Maruyama on (u, v); reference scheme only.
  EulerMaruyama,
};

struct TimeSpec {
  /// Explicit step; when absent dt = cfl_factor * h_min / (c * sqrt(dim)).
  std::optional<double> dt;
  double cfl_factor = 0.5;
  double t_max = 1.0;
  int record_every = 1;
  double blowup_threshold_ratio = 1e6;
  Scheme scheme = Scheme::PositionVerlet;

  void validate() const;
};

/// Uniform step layout that lands exactly on t_max: steps = ceil(t_max / dt0)
/// and dt = t_max / steps, where dt0 is the requested or CFL step.
struct TimeGrid {
  double dt = 0.0;
  long steps = 0;

  double time(long step) const { return static_cast<double>(step) * dt; }
};

TimeGrid resolve_time(const TimeSpec& ts, const Grid& grid, double c);

/// Step indices written to a PathRecord when no blow-up occurs: 0, every
/// record_every-th step, and the final step.
std::vector<long> checkpoint_steps(const TimeGrid& tg, int record_every);

/// Immutable problem data shared read-only by every path worker.
class Problem {
 public:
  Problem(ModelSpec model, const GridSpec& grid, NoiseSpec noise);

  const ModelSpec& model() const { return model_; }
  const Grid& grid() const { return grid_; }
  const NoiseSpec& noise_spec() const { return noise_spec_; }
  const NoiseSource& noise() const { return noise_; }
  /// Variance per unit time of the noise at every solution node: r(x_i, x_i),
  /// or the repaired covariance diagonal when PSD clipping changed it.
  const Field& kernel_diagonal() const { return r_diag_; }
  /// True when the noise term is identically zero (zero kernel or sigma).
  bool deterministic() const { return deterministic_; }

 private:
  ModelSpec model_;
  Grid grid_;
  NoiseSpec noise_spec_;
  NoiseSource noise_;
  Field r_diag_;
  bool deterministic_ = true;
};

struct PathState {
  Field u;
  Field v;
  double t = 0.0;
  long step_index = 0;
  /// sum of (v_mid, f(u*)) dt
  double acc_f_work = 0.0;
  /// sum of trace_q(u*) dt
  double acc_trace = 0.0;
  /// sum of (v, sigma(u*) dW)
  double acc_mart = 0.0;
  bool blown_up = false;
  std::optional<double> t_blow;
  double u0_sq = 0.0;
};

PathState initial_state(const Problem& problem);

/// One step of the chosen scheme. Rejects a blown-up state. A step that
/// produces non-finite values returns a state flagged blown_up.
PathState step(PathState s, const Problem& problem, double dt, Rng& rng,
               Scheme scheme = Scheme::PositionVerlet);

/// Flags the state (and stamps t_blow) when |u|^2 / |u0|^2 >= threshold_ratio
/// or any value is non-finite. Returns the flag.
bool detect_blowup(PathState& s, const Grid& grid, double threshold_ratio);

struct PathRecord {
  std::vector<double> times;
  std::vector<double> l2_sq;
  std::vector<double> energy;
  /// e(t) - e(0) - 2 acc_f_work - acc_trace - 2 acc_mart, unnormalized
  std::vector<double> energy_residual;
  std::vector<double> max_abs_u;
  std::vector<double> uv;     // (u, v)
  std::vector<double> v_sq;   // |v|^2
  std::vector<double> phi_dd; // |v|^2 - c^2 |Du|^2 - alpha |u|^2 + (u, f(u))
  bool blown_up = false;
  std::optional<double> t_blow;
  std::uint64_t seed = 0;

  std::size_t size() const { return times.size(); }
};

PathRecord run_path(const Problem& problem, const TimeSpec& ts, std::uint64_t seed);

}  // namespace stochwave
