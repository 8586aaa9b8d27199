// Python bindings for the main operations. Fields cross as numpy vectors.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "stochwave/commands.hpp"
#include "stochwave/config.hpp"
#include "stochwave/criteria.hpp"
#include "stochwave/ensemble.hpp"
#include "stochwave/grid.hpp"

namespace py = pybind11;
using namespace stochwave;

namespace {

py::dict record_dict(const PathRecord& r) {
  py::dict d;
  d["seed"] = r.seed;
  d["t"] = r.times;
  d["l2_sq"] = r.l2_sq;
  d["energy"] = r.energy;
  d["energy_residual"] = r.energy_residual;
  d["max_abs_u"] = r.max_abs_u;
  d["blown_up"] = r.blown_up;
  d["t_blow"] = r.t_blow;
  return d;
}

py::dict report_dict(const ConditionReport& r) {
  py::dict d;
  d["b1_lhs"] = r.b1_lhs;
  d["b1_pass"] = r.b1_pass;
  d["b2_lhs"] = r.b2_lhs;
  d["b2_rhs"] = r.b2_rhs;
  d["b2_pass"] = r.b2_pass;
  d["b3_factor"] = r.b3_factor;
  d["b3_pass"] = r.b3_pass;
  d["T0"] = r.T0;
  d["lambda_min"] = r.lambda_min;
  d["clipped_mass"] = r.clipped_mass;
  d["noise_budget"] = r.noise_budget;
  d["all_pass"] = r.all_pass();
  return d;
}

ExampleParams example_params(const py::kwargs& kw) {
  ExampleParams p;
  for (const auto& [key, value] : kw) {
    const auto k = key.cast<std::string>();
    if (k == "c") p.c = value.cast<double>();
    else if (k == "alpha") p.alpha = value.cast<double>();
    else if (k == "beta") p.beta = value.cast<double>();
    else if (k == "p") p.p = value.cast<int>();
    else if (k == "r0") p.r0 = value.cast<double>();
    else if (k == "sigma0") p.sigma0 = value.cast<double>();
    else if (k == "rho") p.rho = value.cast<double>();
    else if (k == "nu") p.nu = value.cast<double>();
    else if (k == "a_f") p.a_f = value.cast<double>();
    else throw py::key_error("unknown example parameter: " + k);
  }
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stochastic wave equation simulator and blow-up criteria";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<Grid>(m, "Grid")
      .def_property_readonly("dim", &Grid::dim)
      .def_property_readonly("size", &Grid::size)
      .def_property_readonly("cell_volume", &Grid::cell_volume)
      .def("spacing", &Grid::spacing)
      .def("nodes", [](const Grid& g) {
        Eigen::MatrixXd out(static_cast<Eigen::Index>(g.size()), g.dim());
        for (std::size_t i = 0; i < g.size(); ++i) {
          const Point x = g.node(i);
          for (int a = 0; a < g.dim(); ++a) out(static_cast<Eigen::Index>(i), a) = x[static_cast<std::size_t>(a)];
        }
        return out;
      });

  m.def("interval_grid", [](double lower, double upper, int nodes) { return build_grid(GridSpec::interval(lower, upper, nodes)); },
        py::arg("lower"), py::arg("upper"), py::arg("nodes"));
  m.def("half_plane_grid", [](double L, int nodes_x1, int nodes_x2) { return build_grid(GridSpec::half_plane(L, nodes_x1, nodes_x2)); },
        py::arg("L"), py::arg("nodes_x1"), py::arg("nodes_x2"));
  m.def("inner_product", &inner_product);
  m.def("squared_norm", &squared_norm);
  m.def("laplacian", &laplacian);
  m.def("gradient_sq_norm", &gradient_sq_norm);

  py::class_<Config>(m, "Config")
      .def_property_readonly("grid", [](const Config& c) { return build_grid(c.grid); })
      .def_property("output_dir", [](const Config& c) { return c.output_dir; },
                    [](Config& c, const std::filesystem::path& p) { c.output_dir = p; });
  m.def("load_config", &load_config, py::arg("path"), py::arg("overrides") = std::vector<std::string>{});
  m.def("parse_config", &parse_config, py::arg("text"), py::arg("overrides") = std::vector<std::string>{});

  m.def("check_conditions", [](const Config& cfg) {
    const Grid grid(cfg.grid);
    const std::optional<NoiseFactor> f = report_noise_factor(cfg, grid);
    return report_dict(check_conditions(cfg.model, grid, cfg.noise, f ? &*f : nullptr));
  });
  m.def("run_path", [](const Config& cfg, std::optional<std::uint64_t> seed) {
    py::gil_scoped_release release;
    const Problem problem(cfg.model, cfg.grid, cfg.noise);
    PathRecord rec = run_path(problem, cfg.time, seed.value_or(cfg.mc.master_seed));
    py::gil_scoped_acquire acquire;
    return record_dict(rec);
  }, py::arg("config"), py::arg("seed") = py::none());
  m.def("run_ensemble", [](const Config& cfg) {
    EnsembleResult res;
    {
      py::gil_scoped_release release;
      const Problem problem(cfg.model, cfg.grid, cfg.noise);
      EnsembleSpec es = cfg.mc;
      es.max_workers = effective_workers(cfg);
      res = run_ensemble(problem, cfg.time, es);
    }
    py::dict d;
    d["t"] = res.stats.times;
    d["phi"] = res.stats.phi;
    d["phi_ci"] = res.stats.phi_ci;
    d["psi"] = res.stats.psi;
    d["frac_blown"] = res.stats.frac_blown;
    py::list paths;
    for (const PathRecord& r : res.records) paths.append(record_dict(r));
    d["paths"] = paths;
    return d;
  });

  m.def("example_threshold", [](const py::kwargs& kw) { return example_threshold(example_params(kw)); });
  m.def("closed_form_table", [](const Grid& grid, const py::kwargs& kw) {
    py::list out;
    for (const TableRow& r : closed_form_table(example_params(kw), grid)) {
      py::dict d;
      d["quantity"] = r.quantity;
      d["closed_form"] = r.closed_form;
      d["quadrature"] = r.quadrature;
      d["rel_err"] = r.rel_err;
      out.append(d);
    }
    return out;
  });

  m.def("mix64", &mix64);
  m.def("path_seed", &path_seed, py::arg("master_seed"), py::arg("index"));

  // The CLI commands, returning (exit code, log text).
  const auto wrap = [](int (*fn)(const Config&, std::ostream&)) {
    return [fn](const Config& cfg) {
      std::ostringstream log;
      const int rc = fn(cfg, log);
      return py::make_tuple(rc, log.str());
    };
  };
  m.def("cmd_check", wrap(&cmd_check));
  m.def("cmd_ensemble", wrap(&cmd_ensemble));
  m.def("cmd_reproduce_example", wrap(&cmd_reproduce_example));
}
