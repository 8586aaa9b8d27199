#include "stochwave/integrator.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "stochwave/diagnostics.hpp"

namespace stochwave {

void TimeSpec::validate() const {
  if (dt && !(*dt > 0.0)) throw ConfigError("time.dt must be positive");
  if (!dt && !(cfl_factor > 0.0 && cfl_factor <= 1.0)) throw ConfigError("time.cfl_factor must lie in (0, 1]");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("time.t_max must be positive");
  if (record_every < 1) throw ConfigError("time.record_every must be >= 1");
  if (!(blowup_threshold_ratio > 1.0)) throw ConfigError("time.blowup_threshold_ratio must exceed 1");
}

TimeGrid resolve_time(const TimeSpec& ts, const Grid& grid, double c) {
  ts.validate();
  const double dt0 = ts.dt ? *ts.dt : ts.cfl_factor * grid.min_spacing() / (c * std::sqrt(grid.dim()));
  TimeGrid tg;
  tg.steps = static_cast<long>(std::ceil(ts.t_max / dt0 * (1.0 - 1e-12)));
  if (tg.steps < 1) tg.steps = 1;
  tg.dt = ts.t_max / static_cast<double>(tg.steps);
  return tg;
}

std::vector<long> checkpoint_steps(const TimeGrid& tg, int record_every) {
  std::vector<long> out;
  for (long k = 0; k <= tg.steps; k += record_every) out.push_back(k);
  if (out.back() != tg.steps) out.push_back(tg.steps);
  return out;
}

Problem::Problem(ModelSpec model, const GridSpec& grid, NoiseSpec noise)
    : model_(std::move(model)), grid_(grid), noise_spec_(std::move(noise)) {
  model_.validate();
  noise_spec_.validate();
  const bool zero_sigma = std::holds_alternative<ZeroNoiseAmplitude>(model_.sigma) ||
                          std::get<ArctanNoiseAmplitude>(model_.sigma).sigma0 == 0.0;
  deterministic_ = zero_sigma || is_zero_kernel(noise_spec_.kernel);
  r_diag_ = grid_.sample([&](const Point& x) { return kernel_eval(noise_spec_.kernel, x, x); });
  if (deterministic_) return;
  noise_ = NoiseSource(noise_spec_, grid_);
  // The Ito correction must match the variance actually injected, which is the
  // repaired covariance when clipping removed mass from a non-PSD kernel.
  const Eigen::MatrixXd& rp = noise_.factor().repaired;
  const auto& inj = noise_.injection();
  for (Eigen::Index i = 0; i < r_diag_.size(); ++i) r_diag_[i] = rp(inj[i], inj[i]);
}

PathState initial_state(const Problem& problem) {
  PathState s;
  std::tie(s.u, s.v) = initial_fields(problem.model(), problem.grid());
  s.u0_sq = squared_norm(s.u, problem.grid());
  return s;
}

namespace {

// Per-node sigma and the trace term at state u, time t.
struct NoiseCoefficient {
  Field sigma;
  double trace = 0.0;
};

NoiseCoefficient noise_coefficient(const Problem& p, const Field& u, double t) {
  NoiseCoefficient out;
  const Grid& g = p.grid();
  const VectorField grads = pointwise_gradient(u, g);
  out.sigma.resize(u.size());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double s = sigma_eval(p.model(), u[i], grads.row(i).squaredNorm(), g.node(static_cast<std::size_t>(i)), t);
    out.sigma[i] = s;
    sum += p.kernel_diagonal()[i] * s * s;
  }
  out.trace = g.cell_volume() * sum;
  return out;
}

Field acceleration(const Problem& p, const Field& u, const Field& fu) {
  const ModelSpec& m = p.model();
  return m.c * m.c * laplacian(u, p.grid()) - m.alpha * u + fu;
}

}  // namespace

PathState step(PathState s, const Problem& problem, double dt, Rng& rng, Scheme scheme) {
  if (s.blown_up) throw std::logic_error("step: state has already blown up");
  const Grid& g = problem.grid();
  const double t = s.t;

  // Drift point where the noise coefficient and the force are evaluated.
  Field mid = scheme == Scheme::PositionVerlet ? Field(s.u + 0.5 * dt * s.v) : s.u;
  if (!mid.allFinite()) {
    s.u = std::move(mid);
    s.blown_up = true;
    s.t = t + dt;
    s.t_blow = s.t;
    ++s.step_index;
    return s;
  }

  const Field fu = f_field(problem.model(), mid);
  Field kick = dt * acceleration(problem, mid, fu);
  if (!problem.deterministic()) {
    // Coefficient first, increment second: the integrand never sees dW.
    const NoiseCoefficient coef = noise_coefficient(problem, mid, t);
    const Field dW = problem.noise().sample(dt, rng);
    const Field noise_kick = coef.sigma.cwiseProduct(dW);
    s.acc_mart += inner_product(s.v, noise_kick, g);
    s.acc_trace += coef.trace * dt;
    kick += noise_kick;
  }
  Field v_next = s.v + kick;
  s.acc_f_work += inner_product(0.5 * (s.v + v_next), fu, g) * dt;

  if (scheme == Scheme::PositionVerlet) {
    s.u = mid + 0.5 * dt * v_next;
  } else {
    s.u = s.u + dt * s.v;
  }
  s.v = std::move(v_next);
  s.t = t + dt;
  ++s.step_index;
  if (!s.u.allFinite() || !s.v.allFinite()) {
    s.blown_up = true;
    s.t_blow = s.t;
  }
  return s;
}

bool detect_blowup(PathState& s, const Grid& grid, double threshold_ratio) {
  if (s.blown_up) {
    if (!s.t_blow) s.t_blow = s.t;
    return true;
  }
  bool flag = !s.u.allFinite() || !s.v.allFinite();
  if (!flag && s.u0_sq > 0.0) flag = squared_norm(s.u, grid) >= threshold_ratio * s.u0_sq;
  if (flag) {
    s.blown_up = true;
    s.t_blow = s.t;
  }
  return flag;
}

namespace {

void append(PathRecord& rec, const PathState& s, const Problem& p, double e0) {
  const Grid& g = p.grid();
  const ModelSpec& m = p.model();
  rec.times.push_back(s.t);
  if (!s.u.allFinite() || !s.v.allFinite()) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    rec.l2_sq.push_back(inf);
    rec.energy.push_back(nan);
    rec.energy_residual.push_back(nan);
    rec.max_abs_u.push_back(inf);
    rec.uv.push_back(nan);
    rec.v_sq.push_back(nan);
    rec.phi_dd.push_back(nan);
    return;
  }
  const double e = energy(m, s.u, s.v, g);
  rec.l2_sq.push_back(squared_norm(s.u, g));
  rec.energy.push_back(e);
  rec.energy_residual.push_back(e - e0 - 2.0 * s.acc_f_work - s.acc_trace - 2.0 * s.acc_mart);
  rec.max_abs_u.push_back(s.u.size() ? s.u.cwiseAbs().maxCoeff() : 0.0);
  rec.uv.push_back(inner_product(s.u, s.v, g));
  rec.v_sq.push_back(squared_norm(s.v, g));
  rec.phi_dd.push_back(phi_second_derivative_integrand(m, s.u, s.v, g));
}

}  // namespace

PathRecord run_path(const Problem& problem, const TimeSpec& ts, std::uint64_t seed) {
  const TimeGrid tg = resolve_time(ts, problem.grid(), problem.model().c);
  Rng rng(seed);
  PathRecord rec;
  rec.seed = seed;
  PathState s = initial_state(problem);
  const double e0 = energy(problem.model(), s.u, s.v, problem.grid());
  append(rec, s, problem, e0);
  for (long k = 1; k <= tg.steps; ++k) {
    s = step(std::move(s), problem, tg.dt, rng, ts.scheme);
    s.t = tg.time(k);
    if (s.t_blow) s.t_blow = s.t;
    if (detect_blowup(s, problem.grid(), ts.blowup_threshold_ratio)) {
      append(rec, s, problem, e0);
      rec.blown_up = true;
      rec.t_blow = s.t_blow;
      break;
    }
    if (k % ts.record_every == 0 || k == tg.steps) append(rec, s, problem, e0);
  }
  return rec;
}

}  // namespace stochwave
