#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stochwave/criteria.hpp"
#include "stochwave/diagnostics.hpp"

using namespace stochwave;
using std::numbers::pi;

namespace {

Field sine(const Grid& g, int k = 1) {
  return g.sample([k](const Point& x) { return std::sin(k * pi * x[0]); });
}

ModelSpec cubic(double a_f, Field g0, Field h0) {
  ModelSpec m;
  m.nonlinearity = MonomialNonlinearity{a_f, 2};
  m.initial = FieldInitialData{std::move(g0), std::move(h0)};
  return m;
}

PathRecord fake(std::vector<double> times, std::vector<double> l2, std::optional<double> t_blow = {}) {
  PathRecord r;
  r.times = std::move(times);
  r.l2_sq = std::move(l2);
  r.energy.assign(r.times.size(), 1.0);
  r.uv.assign(r.times.size(), 0.0);
  if (t_blow) {
    r.blown_up = true;
    r.t_blow = t_blow;
  }
  return r;
}

}  // namespace

TEST_CASE("energy") {
  const Grid g = build_grid(GridSpec::interval(0, 1, 40));
  const ModelSpec m = cubic(1.0, Field{}, Field{});
  const Field z = Field::Zero(40), v = sine(g, 2);
  CHECK(energy(m, z, z, g) == 0.0);
  CHECK(energy(m, z, v, g) == doctest::Approx(squared_norm(v, g)));
  ModelSpec m2 = m;
  m2.c = 1.5;
  m2.alpha = 0.3;
  const Field u = sine(g, 1) + 0.1 * sine(g, 3);
  CHECK(energy(m2, u, v, g) ==
        doctest::Approx(2.25 * gradient_sq_norm(u, g) + 0.3 * squared_norm(u, g) + squared_norm(v, g)));
  Field bad = u;
  bad[0] = INFINITY;
  CHECK_THROWS(energy(m2, bad, v, g));
}

TEST_CASE("half-plane energy and F integral") {
  // Continuum route (trapezoid on the closed box) reproduces the closed forms.
  ModelSpec m;
  m.nonlinearity = MonomialNonlinearity{1.0, 2};
  m.initial = DecayingInitialData{1.0};
  const Grid g = build_grid(GridSpec::half_plane(20.0, 200, 400));
  const InitialIntegrals c = initial_integrals(m, g, IntegralRoute::Continuum);
  CHECK(c.energy == doctest::Approx(pi / 2 * 8.0 / 3.0).epsilon(0.02));
  CHECK(c.F_u0 == doctest::Approx(pi / 24).epsilon(0.02));

  // The interior-node sum misses the x1 = 0 line at half weight:
  // (h/2) int F(g(0, x2)) dx2 = (h/2) (1/4) int (1+x2^2)^-4 dx2 = (h/2) (1/4) (5 pi/16).
  const auto [u, v] = initial_fields(m, g);
  const double gap = 0.5 * g.spacing(0) * 0.25 * 5.0 * pi / 16.0;
  CHECK(F_integral(m, u, g) + gap == doctest::Approx(pi / 24).epsilon(0.01));
}

TEST_CASE("F integral identities") {
  const Grid g = build_grid(GridSpec::interval(0, 2, 60));
  const Field u = g.sample([](const Point& x) { return 2.0 * std::sin(3 * x[0]) - 0.5; });
  for (int p : {2, 3, 5}) {
    ModelSpec m;
    m.nonlinearity = MonomialNonlinearity{0.7, p};
    CHECK(F_integral(m, Field::Zero(60), g) == 0.0);
    CHECK(F_integral(m, u, g) == doctest::Approx(inner_product(u, f_field(m, u), g) / (2 * p)).epsilon(1e-12));
  }
}

TEST_CASE("phi'' integrand") {
  const Grid g = build_grid(GridSpec::interval(0, 1, 30));
  const ModelSpec m = cubic(2.0, Field{}, Field{});
  const Field z = Field::Zero(30), v = sine(g);
  CHECK(phi_second_derivative_integrand(m, z, z, g) == 0.0);
  CHECK(phi_second_derivative_integrand(m, z, v, g) == doctest::Approx(squared_norm(v, g)));
}

TEST_CASE("deterministic phi' and phi'' against finite differences of |u|^2 / 2") {
  const int n = 63;
  const Grid g = build_grid(GridSpec::interval(0, 1, n));
  const Problem p(cubic(5.0, 1.5 * sine(g), 0.5 * sine(g)), g.spec(), NoiseSpec{});
  TimeSpec ts;
  ts.t_max = 0.4;
  ts.cfl_factor = 0.1;
  const PathRecord rec = run_path(p, ts, 0);
  REQUIRE_FALSE(rec.blown_up);
  double scale = 0.0;
  for (double x : rec.phi_dd) scale = std::max(scale, std::abs(x));
  for (std::size_t j = 1; j + 1 < rec.size(); ++j) {
    const double dt = rec.times[j + 1] - rec.times[j];
    const double d1 = (rec.l2_sq[j + 1] - rec.l2_sq[j - 1]) / (4.0 * dt);
    const double d2 = (rec.l2_sq[j + 1] - 2 * rec.l2_sq[j] + rec.l2_sq[j - 1]) / (2.0 * dt * dt);
    CHECK(std::abs(d1 - rec.uv[j]) <= 0.02 * std::abs(rec.uv[j]) + 1e-9);
    CHECK(std::abs(d2 - rec.phi_dd[j]) <= 0.02 * scale);
  }
  // Trapezoid integral of phi'' reproduces phi'(T) - phi'(0).
  double integral = 0.0;
  for (std::size_t j = 0; j + 1 < rec.size(); ++j) {
    integral += 0.5 * (rec.phi_dd[j] + rec.phi_dd[j + 1]) * (rec.times[j + 1] - rec.times[j]);
  }
  CHECK(integral == doctest::Approx(rec.uv.back() - rec.uv.front()).epsilon(0.02));
}

TEST_CASE("Cauchy-Schwarz guard on every recorded state") {
  const int n = 31;
  const Grid g = build_grid(GridSpec::interval(0, 1, n));
  ModelSpec m = cubic(1.0, sine(g) + 0.3 * sine(g, 2), sine(g, 3));
  m.sigma = ArctanNoiseAmplitude{1.0, 1.0};
  NoiseSpec ns;
  ns.kernel = SquaredExpKernel{1.0, 1.0};
  const Problem p(m, g.spec(), ns);
  TimeSpec ts;
  ts.t_max = 1.0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const PathRecord rec = run_path(p, ts, seed);
    for (std::size_t j = 0; j < rec.size(); ++j) {
      CHECK(rec.uv[j] * rec.uv[j] <= rec.l2_sq[j] * rec.v_sq[j] * (1 + 1e-12));
    }
  }
}

TEST_CASE("ensemble statistics: degenerate inputs") {
  CHECK_THROWS(ensemble_stats({}));
  CHECK_THROWS(ensemble_stats({fake({0, 1}, {1, 1}), fake({0, 2}, {1, 1})}));

  const EnsembleStats zero = ensemble_stats({fake({0, 1, 2}, {0, 0, 0}), fake({0, 1, 2}, {0, 0, 0})});
  for (std::size_t j = 0; j < zero.size(); ++j) {
    CHECK(*zero.phi[j] == 0.0);
    CHECK_FALSE(zero.psi[j]);
    CHECK(zero.frac_blown[j] == 0.0);
  }

  const EnsembleStats one = ensemble_stats({fake({0, 1}, {2.0, 8.0})});
  CHECK(*one.phi[1] == 4.0);
  CHECK(one.phi_ci[1] == 0.0);
  CHECK(*one.psi[1] == doctest::Approx(0.5));
  CHECK(*ensemble_stats({fake({0, 1}, {2.0, 8.0})}, {}, 1.0).psi[1] == doctest::Approx(0.25));
}

TEST_CASE("ensemble statistics: mean, CI and blown paths") {
  // Path b blows up at t = 2: it leaves the mean from t = 2 on.
  const PathRecord a = fake({0, 1, 2, 3}, {1, 2, 3, 4});
  const PathRecord b = fake({0, 1, 2}, {1, 4, 1e12}, 2.0);
  const PathRecord c = fake({0, 1, 2, 3}, {1, 6, 5, 8});
  const EnsembleStats s = ensemble_stats({a, b, c}, {0, 1, 2, 3});
  CHECK(*s.phi[1] == doctest::Approx(0.5 * 4.0));
  const double sd = 2.0;  // sample sd of {2, 4, 6}
  CHECK(s.phi_ci[1] == doctest::Approx(1.96 * 0.5 * sd / std::sqrt(3.0)));
  CHECK(*s.phi[2] == doctest::Approx(0.5 * 4.0));
  CHECK(s.n_alive[2] == 2);
  CHECK(s.frac_blown[1] == 0.0);
  CHECK(s.frac_blown[2] == doctest::Approx(1.0 / 3.0));
  CHECK(s.frac_blown[3] == doctest::Approx(1.0 / 3.0));

  // Series end after the first checkpoint with nobody alive.
  const EnsembleStats all = ensemble_stats({fake({0, 1}, {1, 1e13}, 1.0)}, {0, 1, 2});
  CHECK(all.size() == 2);
  CHECK(all.frac_blown.back() == 1.0);
  CHECK_FALSE(all.phi.back());
}

TEST_CASE("psi(0) from the half-plane data") {
  // psi(0) = (|u0|^2 / 2)^(-1/2) = sqrt(2)/|u0| whatever |u0| the quadrature gives.
  ModelSpec m;
  m.initial = DecayingInitialData{1.0};
  const Grid g = build_grid(GridSpec::half_plane(20.0, 200, 400));
  const auto [u, v] = initial_fields(m, g);
  const double l2 = squared_norm(u, g);
  const EnsembleStats s = ensemble_stats({fake({0.0}, {l2})});
  CHECK(*s.psi[0] == doctest::Approx(std::sqrt(2.0) / std::sqrt(l2)).epsilon(1e-14));
  const double l2c = initial_integrals(m, g, IntegralRoute::Continuum).u0_sq;
  CHECK(std::sqrt(2.0) / std::sqrt(l2c) == doctest::Approx(2.0 / std::sqrt(pi)).epsilon(0.02));
}

TEST_CASE("energy residual") {
  const int n = 63;
  const Grid g = build_grid(GridSpec::interval(0, 1, n));
  SUBCASE("linear deterministic") {
    // Fundamental mode at h = 1/128, as in the conservation test.
    const Grid g1 = build_grid(GridSpec::interval(0, 1, 127));
    ModelSpec m;
    m.initial = FieldInitialData{sine(g1), sine(g1)};
    const Problem p(m, g1.spec(), NoiseSpec{});
    TimeSpec ts;
    ts.t_max = 5.0;
    for (double r : energy_residual(run_path(p, ts, 0))) CHECK(std::abs(r) <= 1e-4);
  }
  SUBCASE("nonlinear deterministic: second order in dt") {
    const Problem p(cubic(3.0, sine(g), sine(g)), g.spec(), NoiseSpec{});
    const auto worst = [&](double cfl) {
      TimeSpec ts;
      ts.t_max = 1.0;
      ts.cfl_factor = cfl;
      double w = 0.0;
      for (double r : energy_residual(run_path(p, ts, 0))) w = std::max(w, std::abs(r));
      return w;
    };
    const double e1 = worst(0.5), e2 = worst(0.25);
    CHECK(e1 > 0.0);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
  }
}

TEST_CASE("advisory extrapolation") {
  EnsembleStats s;
  s.times = {0, 1, 2};
  s.psi = {1.0, 0.8, 0.6};
  CHECK(*extrapolated_blowup_time(s) == doctest::Approx(5.0));
  s.psi = {1.0, 1.0, 1.2};
  CHECK_FALSE(extrapolated_blowup_time(s));
}
