#include "stochwave/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <sstream>

namespace stochwave {

namespace {

std::string opt_text(const std::optional<double>& v) { return v ? csv::format(*v) : std::string("absent"); }

std::string aligned(const std::vector<std::pair<std::string, std::string>>& items) {
  std::size_t width = 0;
  for (const auto& [k, v] : items) width = std::max(width, k.size());
  std::ostringstream out;
  for (const auto& [k, v] : items) out << std::left << std::setw(static_cast<int>(width)) << k << " : " << v << '\n';
  return out.str();
}

Problem make_problem(const Config& cfg) {
  const Grid grid(cfg.grid);
  const bool deterministic =
      cfg.model.sigma.index() == 0 || std::get<ArctanNoiseAmplitude>(cfg.model.sigma).sigma0 == 0.0;
  if (!deterministic && noise_node_count(cfg.noise, grid) > kMaxNoiseNodes) {
    throw ConfigError("noise grid has " + std::to_string(noise_node_count(cfg.noise, grid)) +
                      " nodes (limit " + std::to_string(kMaxNoiseNodes) +
                      "); raise noise.coarse_noise_stride");
  }
  return Problem(cfg.model, cfg.grid, cfg.noise);
}

}  // namespace

std::optional<NoiseFactor> report_noise_factor(const Config& cfg, const Grid& grid) {
  const std::size_t n = noise_node_count(cfg.noise, grid);
  if (n == 0 || n > kMaxNoiseNodes) return std::nullopt;
  NoiseSource source(cfg.noise, grid);
  return source.factor();
}

csv::Table report_csv(const ConditionReport& r) {
  csv::Table t;
  t.header = {"b1_lhs", "b1_pass", "b2_lhs", "b2_rhs", "b2_pass", "b3_factor",
              "b3_pass", "T0", "lambda_min", "clipped_mass"};
  t.rows.push_back({csv::format(r.b1_lhs), csv::format(r.b1_pass), csv::format(r.b2_lhs),
                    csv::format(r.b2_rhs), csv::format(r.b2_pass), csv::format(r.b3_factor),
                    csv::format(r.b3_pass), csv::format(r.T0), csv::format(r.lambda_min),
                    csv::format(r.clipped_mass)});
  return t;
}

std::string report_text(const ConditionReport& r, const Config& cfg) {
  const auto pass = [](bool b) { return std::string(b ? "pass" : "FAIL"); };
  std::vector<std::pair<std::string, std::string>> items = {
      {"model", cfg.kind == ModelKind::Example4 ? "example4" : "custom1d"},
      {"integrals", to_string(r.integrals.route)},
      {"grid_nodes", std::to_string(r.grid_nodes)},
      {"noise_nodes", std::to_string(r.noise_nodes)},
      {"u0_v0", csv::format(r.integrals.u0_v0)},
      {"u0_sq", csv::format(r.integrals.u0_sq)},
      {"v0_sq", csv::format(r.integrals.v0_sq)},
      {"grad_u0_sq", csv::format(r.integrals.grad_u0_sq)},
      {"energy0", csv::format(r.integrals.energy)},
      {"noise_budget", csv::format(r.noise_budget)},
      {"b1_lhs", csv::format(r.b1_lhs)},
      {"b1", pass(r.b1_pass)},
      {"b2_lhs", csv::format(r.b2_lhs)},
      {"b2_rhs", csv::format(r.b2_rhs)},
      {"b2", pass(r.b2_pass)},
      {"b3_factor", opt_text(r.b3_factor)},
      {"b3_probe_min", opt_text(r.b3_probe_min)},
      {"b3 (factor 2)", pass(r.b3_pass)},
      {"b3 (factor 1/2)", pass(r.b3_pass_half)},
      {"T0", opt_text(r.T0)},
      {"lambda_min", opt_text(r.lambda_min)},
      {"clipped_mass", opt_text(r.clipped_mass)},
      {"all_conditions", pass(r.all_pass())},
  };
  if (r.clipped_mass && *r.clipped_mass > kClippedMassFlag) {
    items.emplace_back("warning", "clipped_mass exceeds 0.05; the repaired covariance is visibly distorted");
  }
  return aligned(items);
}

csv::Table path_csv(const PathRecord& rec) {
  csv::Table t;
  t.header = {"t", "l2_sq", "energy", "energy_residual", "max_abs_u", "blown_up"};
  for (std::size_t j = 0; j < rec.size(); ++j) {
    const bool last = j + 1 == rec.size();
    t.rows.push_back({csv::format(rec.times[j]), csv::format(rec.l2_sq[j]), csv::format(rec.energy[j]),
                      csv::format(rec.energy_residual[j]), csv::format(rec.max_abs_u[j]),
                      csv::format(last && rec.blown_up)});
  }
  return t;
}

csv::Table ensemble_csv(const EnsembleStats& s) {
  csv::Table t;
  t.header = {"t", "phi", "phi_ci", "psi", "frac_blown", "n_alive", "mean_energy"};
  for (std::size_t j = 0; j < s.size(); ++j) {
    t.rows.push_back({csv::format(s.times[j]), csv::format(s.phi[j]), csv::format(s.phi_ci[j]),
                      csv::format(s.psi[j]), csv::format(s.frac_blown[j]), std::to_string(s.n_alive[j]),
                      csv::format(s.mean_energy[j])});
  }
  return t;
}

csv::Table paths_manifest_csv(const std::vector<PathRecord>& records) {
  csv::Table t;
  t.header = {"path", "seed", "blown_up", "t_blow"};
  for (std::size_t i = 0; i < records.size(); ++i) {
    t.rows.push_back({std::to_string(i), std::to_string(records[i].seed), csv::format(records[i].blown_up),
                      csv::format(records[i].t_blow)});
  }
  return t;
}

csv::Table example_table_csv(const std::vector<TableRow>& rows) {
  csv::Table t;
  t.header = {"quantity", "closed_form", "quadrature", "rel_err"};
  for (const TableRow& r : rows) {
    t.rows.push_back({r.quantity, csv::format(r.closed_form), csv::format(r.quadrature), csv::format(r.rel_err)});
  }
  return t;
}

std::string summary_text(const ExplosionSummary& s, const EnsembleStats& stats, const ConditionReport& report) {
  std::optional<double> psi0;
  if (!stats.psi.empty()) psi0 = stats.psi.front();
  std::optional<double> psi0_expected;
  if (report.integrals.u0_sq > 0.0) psi0_expected = std::sqrt(2.0) / std::sqrt(report.integrals.u0_sq);
  return aligned({
      {"n_paths", std::to_string(stats.n_paths)},
      {"T0", opt_text(s.T0)},
      {"margin", csv::format(s.margin)},
      {"n_blown", std::to_string(s.n_blown)},
      {"frac_blown_final", csv::format(s.frac_blown_final)},
      {"t_blow_min", opt_text(s.t_blow_min)},
      {"t_blow_median", opt_text(s.t_blow_median)},
      {"t_blow_max", opt_text(s.t_blow_max)},
      {"t_blow_max_within_bound", s.within_bound ? "true" : "false"},
      {"psi0", opt_text(psi0)},
      {"psi0_expected", opt_text(psi0_expected)},
      {"extrapolated_blowup_time", opt_text(extrapolated_blowup_time(stats)) + " (advisory)"},
      {"conditions", report.all_pass() ? "pass" : "FAIL"},
  });
}

unsigned effective_workers(const Config& cfg) {
  if (const char* env = std::getenv("STOCHWAVE_MAX_WORKERS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 0) throw ConfigError("STOCHWAVE_MAX_WORKERS must be a non-negative integer");
    return static_cast<unsigned>(v);
  }
  return cfg.mc.max_workers;
}

int cmd_check(const Config& cfg, std::ostream& log) {
  const Grid grid(cfg.grid);
  const std::optional<NoiseFactor> factor = report_noise_factor(cfg, grid);
  const ConditionReport r = check_conditions(cfg.model, grid, cfg.noise, factor ? &*factor : nullptr);
  const std::string text = report_text(r, cfg);
  csv::OutputSet out(cfg.output_dir);
  out.add("report.txt", text);
  out.add("report.csv", report_csv(r).str());
  out.commit();
  log << text;
  return r.all_pass() ? kExitOk : kExitConditionFailed;
}

int cmd_simulate(const Config& cfg, std::optional<std::uint64_t> seed, std::ostream& log) {
  const Problem problem = make_problem(cfg);
  const std::uint64_t s = seed.value_or(cfg.mc.master_seed);
  const PathRecord rec = run_path(problem, cfg.time, s);
  csv::OutputSet out(cfg.output_dir);
  const std::string name = "path_" + std::to_string(s) + ".csv";
  out.add(name, path_csv(rec).str());
  out.commit();
  log << "wrote " << (cfg.output_dir / name).string() << " (" << rec.size() << " rows"
      << (rec.blown_up ? ", blown up at t = " + csv::format(*rec.t_blow) : std::string()) << ")\n";
  return kExitOk;
}

int cmd_ensemble(const Config& cfg, std::ostream& log) {
  const Problem problem = make_problem(cfg);
  EnsembleSpec es = cfg.mc;
  es.max_workers = effective_workers(cfg);
  const EnsembleResult res = run_ensemble(problem, cfg.time, es);
  const NoiseFactor* factor = problem.deterministic() || problem.noise().is_zero() ? nullptr : &problem.noise().factor();
  const ConditionReport report = check_conditions(cfg.model, problem.grid(), cfg.noise, factor);
  const ExplosionSummary summary = explosion_summary(res.records, res.stats, report.T0);
  const std::string text = summary_text(summary, res.stats, report);
  csv::OutputSet out(cfg.output_dir);
  out.add("ensemble.csv", ensemble_csv(res.stats).str());
  out.add("paths.csv", paths_manifest_csv(res.records).str());
  out.add("summary.txt", text);
  out.commit();
  log << text;
  return kExitOk;
}

int cmd_reproduce_example(const Config& cfg, std::ostream& log) {
  if (cfg.kind != ModelKind::Example4) throw ConfigError("reproduce-example needs model.kind = example4");
  if (!std::holds_alternative<DotProductKernel>(cfg.noise.kernel)) {
    throw ConfigError("reproduce-example needs noise.kernel = dotprod");
  }
  const Grid grid(cfg.grid);
  const std::vector<TableRow> rows = closed_form_table(cfg.example, grid);
  csv::OutputSet out(cfg.output_dir);
  const csv::Table table = example_table_csv(rows);
  out.add("example_table.csv", table.str());
  out.commit();
  std::vector<std::pair<std::string, std::string>> items;
  for (const TableRow& r : rows) {
    items.emplace_back(r.quantity, csv::format(r.closed_form) + "  quad " + csv::format(r.quadrature) +
                                       "  rel_err " + csv::format(r.rel_err));
  }
  log << aligned(items);
  return kExitOk;
}

}  // namespace stochwave
