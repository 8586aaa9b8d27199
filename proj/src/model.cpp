#include "stochwave/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace stochwave {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double int_pow(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

}  // namespace

void ModelSpec::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("model.c must be positive");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("model.alpha must be non-negative");
  if (const auto* mono = std::get_if<MonomialNonlinearity>(&nonlinearity)) {
    if (!(mono->amplitude > 0.0)) throw ConfigError("model.a_f must be positive");
    if (mono->p < 2) throw ConfigError("model.p must be an integer >= 2");
  }
  if (const auto* s = std::get_if<ArctanNoiseAmplitude>(&sigma)) {
    if (!(s->sigma0 >= 0.0)) throw ConfigError("model.sigma0 must be non-negative");
    if (!(s->nu > 0.0)) throw ConfigError("model.nu must be positive");
  }
  if (const auto* d = std::get_if<DecayingInitialData>(&initial); d && !(d->beta > 0.0)) {
    throw ConfigError("model.beta must be positive");
  }
  if (const auto* d = std::get_if<SineModeInitialData>(&initial); d && !(d->beta > 0.0)) {
    throw ConfigError("model.beta must be positive");
  }
}

double f_eval(const ModelSpec& m, double mu) {
  return std::visit(overloaded{[](const ZeroNonlinearity&) { return 0.0; },
                               [mu](const MonomialNonlinearity& f) {
                                 return f.amplitude * int_pow(mu, 2 * f.p - 1);
                               }},
                    m.nonlinearity);
}

double F_eval(const ModelSpec& m, double mu) {
  return std::visit(overloaded{[](const ZeroNonlinearity&) { return 0.0; },
                               [mu](const MonomialNonlinearity& f) {
                                 return f.amplitude / (2.0 * f.p) * int_pow(mu, 2 * f.p);
                               }},
                    m.nonlinearity);
}

double sigma_eval(const ModelSpec& m, double /*mu*/, double xi_sq, const Point& /*x*/, double t) {
  if (const auto* s = std::get_if<ArctanNoiseAmplitude>(&m.sigma)) {
    if (s->sigma0 == 0.0) return 0.0;
    return s->sigma0 * std::atan(1.0 + xi_sq) * std::exp(-s->nu * t);
  }
  return 0.0;
}

double sigma_eval(const ModelSpec& m, double mu, const Eigen::Ref<const Eigen::RowVectorXd>& xi,
                  const Point& x, double t) {
  return sigma_eval(m, mu, xi.squaredNorm(), x, t);
}

double q_envelope(const ModelSpec& m, const Point& /*x*/, double t) {
  if (const auto* s = std::get_if<ArctanNoiseAmplitude>(&m.sigma)) {
    const double amp = s->sigma0 * std::numbers::pi / 2.0;
    return amp * amp * std::exp(-2.0 * s->nu * t);
  }
  return 0.0;
}

Field f_field(const ModelSpec& m, const Field& u) {
  if (std::holds_alternative<ZeroNonlinearity>(m.nonlinearity)) return Field::Zero(u.size());
  return u.unaryExpr([&m](double mu) { return f_eval(m, mu); });
}

int nonlinearity_degree(const ModelSpec& m) {
  if (const auto* mono = std::get_if<MonomialNonlinearity>(&m.nonlinearity)) return 2 * mono->p;
  return 0;
}

bool has_analytic_initial_data(const ModelSpec& m) {
  return !std::holds_alternative<FieldInitialData>(m.initial);
}

InitialProfile initial_profile(const ModelSpec& m, const Grid& grid, const Point& x) {
  InitialProfile out;
  if (const auto* d = std::get_if<DecayingInitialData>(&m.initial)) {
    const double w = 1.0 / (1.0 + x[0] * x[0] + x[1] * x[1]);
    out.g = d->beta * w;
    out.h = w;
    // grad (beta / (1 + |x|^2)) = -2 beta x / (1 + |x|^2)^2
    out.grad_g = {-2.0 * d->beta * x[0] * w * w, -2.0 * d->beta * x[1] * w * w};
    return out;
  }
  if (const auto* d = std::get_if<SineModeInitialData>(&m.initial)) {
    const Axis& axis = grid.spec().axes[0];
    const double len = axis.upper - axis.lower;
    const double s = (x[0] - axis.lower) / len;
    const double k = std::numbers::pi / len;
    out.g = d->beta * std::sin(std::numbers::pi * s);
    out.h = std::sin(std::numbers::pi * s);
    out.grad_g = {d->beta * k * std::cos(std::numbers::pi * s), 0.0};
    return out;
  }
  throw std::logic_error("initial_profile: sampled field data has no continuum profile");
}

std::pair<Field, Field> initial_fields(const ModelSpec& m, const Grid& grid) {
  if (const auto* d = std::get_if<FieldInitialData>(&m.initial)) {
    if (static_cast<std::size_t>(d->g.size()) != grid.size() ||
        static_cast<std::size_t>(d->h.size()) != grid.size()) {
      throw ConfigError("initial fields do not match the grid node count");
    }
    return {d->g, d->h};
  }
  if (std::holds_alternative<DecayingInitialData>(m.initial) && grid.dim() != 2) {
    throw ConfigError("the decaying half-plane initial data needs a 2-D grid");
  }
  if (std::holds_alternative<SineModeInitialData>(m.initial) && grid.dim() != 1) {
    throw ConfigError("the sine-mode initial data needs a 1-D grid");
  }
  Field g(static_cast<Eigen::Index>(grid.size()));
  Field h(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const InitialProfile p = initial_profile(m, grid, grid.node(i));
    g[static_cast<Eigen::Index>(i)] = p.g;
    h[static_cast<Eigen::Index>(i)] = p.h;
  }
  return {g, h};
}

}  // namespace stochwave
