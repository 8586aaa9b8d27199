#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "stochwave/criteria.hpp"

using namespace stochwave;
using std::numbers::pi;

namespace {

ExampleParams unit_params(double a_f = 1.0) {
  ExampleParams p;
  p.a_f = a_f;
  return p;
}

// Amplitude at which (F(u0), 1) = (e + budget) / 2, solved from the closed
// forms of the half-plane integrals.
double threshold_oracle(const ExampleParams& q) {
  const double e = pi / 2 * (1 + (q.alpha + 2 * q.c * q.c / 3) * q.beta * q.beta);
  const double budget = q.r0 * q.sigma0 * q.sigma0 * std::pow(pi, 3) / (16 * q.rho * q.nu);
  const double F_per_amplitude = pi * std::pow(q.beta, 2 * q.p) / (4.0 * q.p * (2 * q.p - 1));
  return 0.5 * (e + budget) / F_per_amplitude;
}

ModelSpec sine_model(double beta, double a_f) {
  ModelSpec m;
  m.nonlinearity = MonomialNonlinearity{a_f, 2};
  m.initial = SineModeInitialData{beta};
  return m;
}

}  // namespace

TEST_CASE("threshold of the half-plane example") {
  CHECK(example_threshold(unit_params()) == doctest::Approx(16.0 + 3.0 * pi * pi / 4.0).epsilon(1e-14));
  CHECK(example_threshold(unit_params()) == doctest::Approx(23.4022).epsilon(1e-5));
  ExampleParams quiet = unit_params();
  quiet.sigma0 = 0.0;
  CHECK(example_threshold(quiet) == doctest::Approx(16.0).epsilon(1e-15));

  for (double beta : {0.5, 1.0, 2.0}) {
    for (int p : {2, 3}) {
      ExampleParams q = unit_params();
      q.beta = beta;
      q.p = p;
      q.c = 1.3;
      q.alpha = 0.4;
      q.r0 = 2.0;
      q.rho = 0.7;
      q.nu = 1.5;
      q.sigma0 = 0.6;
      CHECK(example_threshold(q) == doctest::Approx(threshold_oracle(q)).epsilon(1e-13));
    }
  }

  // Large beta: lambda_min beta^2 -> p (2p - 1) (alpha + 2c^2/3) for p = 2.
  ExampleParams big = unit_params();
  big.beta = 1e3;
  CHECK(example_threshold(big) * 1e6 == doctest::Approx(6.0 * (5.0 / 3.0)).epsilon(1e-5));
  ExampleParams b2 = big;
  b2.beta = 2e3;
  CHECK(example_threshold(b2) < example_threshold(big));
  ExampleParams loud = unit_params();
  loud.sigma0 = 2.0;
  CHECK(example_threshold(loud) > example_threshold(unit_params()));

  ExampleParams bad = unit_params();
  bad.beta = 0.0;
  CHECK_THROWS_AS(example_threshold(bad), ConfigError);
}

TEST_CASE("closed forms") {
  const ClosedForms cf = example_closed_forms(unit_params());
  CHECK(cf.u0_v0 == doctest::Approx(pi / 2));
  CHECK(cf.F_u0 == doctest::Approx(pi / 24));
  CHECK(cf.noise_budget == doctest::Approx(std::pow(pi, 3) / 16));
  CHECK(cf.v0_sq == doctest::Approx(pi / 2));
  CHECK(cf.u0_sq == doctest::Approx(pi / 2));
  CHECK(cf.grad_u0_sq == doctest::Approx(pi / 3));
  CHECK(cf.energy == doctest::Approx(pi / 2 * 8.0 / 3.0));

  ExampleParams q = unit_params(2.5);
  q.beta = 1.7;
  q.p = 3;
  const ClosedForms c3 = example_closed_forms(q);
  CHECK(c3.u0_v0 == doctest::Approx(0.5 * 1.7 * pi));
  CHECK(c3.u0_sq == doctest::Approx(1.7 * 1.7 * pi / 2));
  CHECK(c3.F_u0 == doctest::Approx(2.5 * pi * std::pow(1.7, 6) / (4 * 3 * 5)));
}

TEST_CASE("b2 flips at the threshold") {
  const double lam = example_threshold(unit_params());
  CHECK(example_b2_closed_form(unit_params(1.01 * lam)));
  CHECK_FALSE(example_b2_closed_form(unit_params(0.99 * lam)));
  CHECK_FALSE(example_b2_closed_form(unit_params(lam)));

  const ThresholdConsistency tc = consistency_check_b2_vs_threshold(unit_params());
  CHECK(tc.consistent);
  CHECK(tc.lambda_min == lam);
  for (const auto& pt : tc.sweep) {
    CHECK(pt.b2_pass == pt.above_threshold);
    if (pt.factor == 1.0) CHECK_FALSE(pt.b2_pass);
  }
}

TEST_CASE("strict comparison") {
  CHECK(strictly_greater(2.0, 1.0));
  CHECK_FALSE(strictly_greater(1.0, 1.0));
  CHECK_FALSE(strictly_greater(1.0, 2.0));
  CHECK_FALSE(strictly_greater(1.0 + 2 * std::numeric_limits<double>::epsilon(), 1.0));
  CHECK(strictly_greater(1.0 + 1e-12, 1.0));
}

TEST_CASE("closed-form table on the default half-plane grid") {
  const Grid g = build_grid(GridSpec::half_plane(20.0, 200, 400));
  const std::vector<TableRow> rows = closed_form_table(unit_params(), g);
  REQUIRE(rows.size() == 9);
  for (const TableRow& r : rows) {
    INFO(r.quantity);
    CHECK(r.rel_err <= 0.02);
    CHECK(r.rel_err == doctest::Approx(std::abs(r.quadrature - r.closed_form) / std::abs(r.closed_form)));
  }
  const auto row = [&](const std::string& q) {
    for (const TableRow& r : rows) {
      if (r.quantity == q) return r;
    }
    FAIL("missing row " << q);
    return rows.front();
  };
  CHECK(row("noise_budget").closed_form == doctest::Approx(std::pow(pi, 3) / 16));
  CHECK(row("T0").closed_form == 1.0);
  CHECK(row("lambda_min").closed_form == doctest::Approx(16.0 + 3.0 * pi * pi / 4.0));
  CHECK(row("F_u0").closed_form == doctest::Approx(pi / 24));

  ExampleParams q = unit_params();
  q.beta = 1.5;
  CHECK(closed_form_table(q, g).back().closed_form == doctest::Approx(1.5));
}

TEST_CASE("check_conditions on the half-plane example") {
  const Grid g = build_grid(GridSpec::half_plane(20.0, 200, 400));
  const ExampleParams q = unit_params(100.0);
  const ConditionReport r = check_conditions(example_model(q), g, example_noise(q));
  CHECK(r.integrals.route == IntegralRoute::Continuum);
  CHECK(r.b1_pass);
  CHECK(r.b2_pass);
  CHECK(r.b3_pass);
  CHECK(r.b3_pass_half);
  CHECK(r.all_pass());
  REQUIRE(r.T0);
  CHECK(*r.T0 == doctest::Approx(1.0).epsilon(0.02));
  REQUIRE(r.lambda_min);
  CHECK(*r.lambda_min == doctest::Approx(16.0 + 3.0 * pi * pi / 4.0));
  CHECK(*r.b3_factor == 4.0);
  CHECK_FALSE(r.clipped_mass);

  const ConditionReport weak = check_conditions(example_model(unit_params(1e-9)), g, example_noise(q));
  CHECK_FALSE(weak.b2_pass);
  CHECK(weak.b2_lhs < weak.b2_rhs);
  CHECK_FALSE(weak.all_pass());
}

TEST_CASE("flipped initial velocity fails b1") {
  const Grid g = build_grid(GridSpec::half_plane(10.0, 40, 80));
  ModelSpec m = example_model(unit_params(100.0));
  const auto [u0, v0] = initial_fields(m, g);
  m.initial = FieldInitialData{u0, -v0};
  const ConditionReport r = check_conditions(m, g, NoiseSpec{});
  CHECK(r.integrals.route == IntegralRoute::Grid);
  CHECK(r.b1_lhs < 0.0);
  CHECK_FALSE(r.b1_pass);
  CHECK_FALSE(r.T0);
  CHECK_FALSE(r.all_pass());
}

TEST_CASE("B3 factor and probes") {
  const Grid g = build_grid(GridSpec::interval(0, 1, 63));
  for (int p : {2, 3, 4}) {
    ModelSpec m = sine_model(1.0, 1.0);
    m.nonlinearity = MonomialNonlinearity{1.0, p};
    const ConditionReport r = check_conditions(m, g, NoiseSpec{});
    CHECK(*r.b3_factor == 2.0 * p);
    REQUIRE(r.b3_probe_min);
    CHECK(*r.b3_probe_min == doctest::Approx(2.0 * p).epsilon(1e-12));
    CHECK(r.b3_pass);
  }
  ModelSpec lin = sine_model(1.0, 1.0);
  lin.nonlinearity = ZeroNonlinearity{};
  const ConditionReport r0 = check_conditions(lin, g, NoiseSpec{});
  CHECK_FALSE(r0.b3_factor);
  CHECK(r0.b3_pass);
  CHECK_FALSE(r0.b2_pass);
}

TEST_CASE("T0 on discrete data and its scaling in beta") {
  const Grid g = build_grid(GridSpec::interval(0, 1, 127));
  const auto [u, v] = initial_fields(sine_model(1.0, 50.0), g);
  const ConditionReport r1 = check_conditions(sine_model(1.0, 50.0), g, NoiseSpec{});
  REQUIRE(r1.T0);
  CHECK(*r1.T0 == doctest::Approx(squared_norm(u, g) / inner_product(u, v, g)).epsilon(1e-14));
  for (double beta : {0.5, 2.0, 3.0}) {
    const ConditionReport rb = check_conditions(sine_model(beta, 50.0), g, NoiseSpec{});
    CHECK(*rb.T0 == doctest::Approx(beta * *r1.T0).epsilon(1e-13));
  }
  // e0 = |v0|^2 + alpha |u0|^2 + c^2 |Du0|^2 on the grid route.
  CHECK(r1.integrals.energy == doctest::Approx(0.5 + 0.5 + gradient_sq_norm(u, g)));
  CHECK(r1.all_pass());
}
