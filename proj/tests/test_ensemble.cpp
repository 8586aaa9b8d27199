#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stochwave/ensemble.hpp"

using namespace stochwave;

namespace {

Problem noisy_problem(double sigma0, double a_f = 1.0) {
  ModelSpec m;
  m.nonlinearity = MonomialNonlinearity{a_f, 2};
  m.sigma = ArctanNoiseAmplitude{sigma0, 1.0};
  m.initial = SineModeInitialData{1.0};
  NoiseSpec ns;
  ns.kernel = DotProductKernel{1.0, 1.0};
  return Problem(m, GridSpec::interval(0, 1, 31), ns);
}

TimeSpec short_run() {
  TimeSpec ts;
  ts.t_max = 0.5;
  ts.record_every = 4;
  return ts;
}

bool same(const PathRecord& a, const PathRecord& b) {
  return a.times == b.times && a.l2_sq == b.l2_sq && a.energy == b.energy &&
         a.energy_residual == b.energy_residual && a.max_abs_u == b.max_abs_u && a.seed == b.seed &&
         a.blown_up == b.blown_up && a.t_blow == b.t_blow;
}

}  // namespace

TEST_CASE("seed mixing is SplitMix64") {
  // Reference values of the SplitMix64 generator seeded with 0: its outputs are
  // mix64(k * golden) for k = 1, 2, ...
  CHECK(mix64(0x9E3779B97F4A7C15ULL) == 0xE220A8397B1DCDAFULL);
  CHECK(mix64(2 * 0x9E3779B97F4A7C15ULL) == 0x6E789E6AA1B965F4ULL);
  CHECK(path_seed(0, 0) == 0xE220A8397B1DCDAFULL);
  CHECK(path_seed(0, 1) == 0x6E789E6AA1B965F4ULL);
  CHECK(path_seed(5, 3) == mix64(5 ^ (4 * 0x9E3779B97F4A7C15ULL)));
  static_assert(path_seed(1, 0) != path_seed(1, 1));
}

TEST_CASE("paths are pure functions of their seeds, any worker count") {
  const Problem p = noisy_problem(0.5);
  EnsembleSpec es;
  es.n_paths = 6;
  es.master_seed = 99;
  es.max_workers = 1;
  const EnsembleResult a = run_ensemble(p, short_run(), es);
  es.max_workers = 8;
  const EnsembleResult b = run_ensemble(p, short_run(), es);
  REQUIRE(a.records.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(same(a.records[i], b.records[i]));
    CHECK(a.records[i].seed == path_seed(99, i));
    CHECK(same(a.records[i], run_path(p, short_run(), path_seed(99, i))));
  }
  CHECK(a.stats.phi == b.stats.phi);
  CHECK(a.stats.phi_ci == b.stats.phi_ci);
}

TEST_CASE("single path and zero noise") {
  const Problem p = noisy_problem(0.0);
  EnsembleSpec es;
  es.n_paths = 1;
  const EnsembleResult one = run_ensemble(p, short_run(), es);
  for (std::size_t j = 0; j < one.stats.size(); ++j) {
    CHECK(*one.stats.phi[j] == 0.5 * one.records[0].l2_sq[j]);
    CHECK(one.stats.phi_ci[j] == 0.0);
  }
  es.n_paths = 4;
  const EnsembleResult four = run_ensemble(p, short_run(), es);
  for (std::size_t i = 1; i < 4; ++i) CHECK(four.records[i].l2_sq == four.records[0].l2_sq);
  for (double ci : four.stats.phi_ci) CHECK(ci == 0.0);

  es.n_paths = 0;
  CHECK_THROWS(run_ensemble(p, short_run(), es));
}

TEST_CASE("CI shrinks like 1/sqrt(M)") {
  const Problem p = noisy_problem(1.0);
  EnsembleSpec es;
  es.master_seed = 5;
  es.n_paths = 32;
  const EnsembleResult a = run_ensemble(p, short_run(), es);
  es.master_seed = 6;
  es.n_paths = 64;
  const EnsembleResult b = run_ensemble(p, short_run(), es);
  const double ratio = a.stats.phi_ci.back() / b.stats.phi_ci.back();
  CHECK(ratio == doctest::Approx(std::sqrt(2.0)).epsilon(0.25));
}

TEST_CASE("explosion summary") {
  const Problem quiet = noisy_problem(0.0);
  EnsembleSpec es;
  es.n_paths = 2;
  const EnsembleResult none = run_ensemble(quiet, short_run(), es);
  const ExplosionSummary s0 = explosion_summary(none.records, none.stats, 1.0);
  CHECK(s0.n_blown == 0);
  CHECK_FALSE(s0.t_blow_max);
  CHECK(s0.within_bound);

  const Problem boom = noisy_problem(0.2, 50.0);
  TimeSpec ts = short_run();
  ts.t_max = 1.5;
  es.n_paths = 5;
  const EnsembleResult all = run_ensemble(boom, ts, es);
  const ExplosionSummary s = explosion_summary(all.records, all.stats, 1.0);
  CHECK(s.n_blown == 5);
  CHECK(s.frac_blown_final == 1.0);
  REQUIRE(s.t_blow_median);
  CHECK(*s.t_blow_min <= *s.t_blow_median);
  CHECK(*s.t_blow_median <= *s.t_blow_max);
  CHECK(s.within_bound == (*s.t_blow_max <= 1.1));
  const ExplosionSummary tight = explosion_summary(all.records, all.stats, 0.5 * *s.t_blow_max, 0.0);
  CHECK_FALSE(tight.within_bound);
}
