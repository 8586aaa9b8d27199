#include "stochwave/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace stochwave {

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"domain", {"dim", "lower", "upper", "nodes", "truncation_L"}},
      {"model", {"kind", "c", "alpha", "a_f", "p", "beta", "sigma0", "nu"}},
      {"noise", {"kernel", "r0", "rho", "psd_clip_tol", "coarse_noise_stride"}},
      {"time", {"dt", "cfl_factor", "t_max", "record_every", "blowup_threshold_ratio", "scheme"}},
      {"mc", {"n_paths", "master_seed", "max_workers"}},
      {"output", {"directory"}},
  };
  return keys;
}

void require_known(const std::string& section, const std::string& key) {
  const auto& keys = known_keys();
  const auto it = keys.find(section);
  if (it == keys.end()) throw ConfigError("unknown config section [" + section + "]");
  if (!it->second.contains(key)) throw ConfigError("unknown config key " + section + "." + key);
}

class Reader {
 public:
  explicit Reader(const RawConfig& raw) : raw_(raw) {}

  bool has(const std::string& section, const std::string& key) const {
    const auto s = raw_.find(section);
    return s != raw_.end() && s->second.contains(key);
  }

  const std::string& text(const std::string& section, const std::string& key) const {
    if (!has(section, key)) throw ConfigError("missing required config key " + section + "." + key);
    return raw_.at(section).at(key);
  }

  std::string text_or(const std::string& section, const std::string& key, std::string fallback) const {
    return has(section, key) ? text(section, key) : fallback;
  }

  double number(const std::string& section, const std::string& key) const {
    return parse_double(text(section, key), section + "." + key);
  }

  double number_or(const std::string& section, const std::string& key, double fallback) const {
    return has(section, key) ? number(section, key) : fallback;
  }

  long integer(const std::string& section, const std::string& key) const {
    return parse_integer(text(section, key), section + "." + key);
  }

  long integer_or(const std::string& section, const std::string& key, long fallback) const {
    return has(section, key) ? integer(section, key) : fallback;
  }

  std::uint64_t unsigned_or(const std::string& section, const std::string& key, std::uint64_t fallback) const {
    if (!has(section, key)) return fallback;
    const std::string& s = text(section, key);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError(section + "." + key + ": expected a non-negative integer, got '" + s + "'");
    }
    return v;
  }

  std::vector<double> numbers(const std::string& section, const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(text(section, key));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(trimmed(item), section + "." + key));
    return out;
  }

  static double parse_double(const std::string& s, const std::string& name) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(name + ": expected a number, got '" + s + "'");
    }
  }

  static long parse_integer(const std::string& s, const std::string& name) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError(name + ": expected an integer, got '" + s + "'");
    }
    return v;
  }

  static std::string trimmed(std::string s) {
    boost::algorithm::trim(s);
    return s;
  }

 private:
  const RawConfig& raw_;
};

GridSpec build_grid_spec(const Reader& r, ModelKind kind) {
  const bool example4 = kind == ModelKind::Example4;
  const long dim = r.integer_or("domain", "dim", example4 ? 2 : 1);
  if (dim != 1 && dim != 2) throw ConfigError("domain.dim must be 1 or 2");
  if (example4 && dim != 2) throw ConfigError("domain.dim must be 2 for model.kind = example4");
  if (kind == ModelKind::Custom1d && dim != 1) throw ConfigError("domain.dim must be 1 for model.kind = custom1d");

  std::vector<double> nodes_in;
  if (r.has("domain", "nodes")) {
    nodes_in = r.numbers("domain", "nodes");
  } else {
    nodes_in = example4 ? std::vector<double>{200, 400} : std::vector<double>{127};
  }
  if (nodes_in.size() != static_cast<std::size_t>(dim)) {
    throw ConfigError("domain.nodes needs one entry per axis");
  }
  std::vector<int> nodes;
  for (double n : nodes_in) {
    if (n != std::floor(n) || n < 3) throw ConfigError("domain.nodes entries must be integers >= 3");
    nodes.push_back(static_cast<int>(n));
  }

  const bool truncated = r.has("domain", "truncation_L") || (example4 && !r.has("domain", "lower"));
  if (truncated) {
    if (dim != 2) throw ConfigError("domain.truncation_L applies to 2-D half-plane domains only");
    if (r.has("domain", "lower") || r.has("domain", "upper")) {
      throw ConfigError("domain.truncation_L cannot be combined with domain.lower / domain.upper");
    }
    const double L = r.number_or("domain", "truncation_L", 20.0);
    if (!(L > 0.0)) throw ConfigError("domain.truncation_L must be positive");
    return GridSpec::half_plane(L, nodes[0], nodes[1]);
  }
  std::vector<double> lower = r.has("domain", "lower") ? r.numbers("domain", "lower") : std::vector<double>(dim, 0.0);
  std::vector<double> upper = r.has("domain", "upper") ? r.numbers("domain", "upper") : std::vector<double>(dim, 1.0);
  if (lower.size() != static_cast<std::size_t>(dim)) throw ConfigError("domain.lower needs one entry per axis");
  if (upper.size() != static_cast<std::size_t>(dim)) throw ConfigError("domain.upper needs one entry per axis");
  GridSpec spec;
  spec.dim = static_cast<int>(dim);
  for (long a = 0; a < dim; ++a) {
    if (!(upper[a] > lower[a])) throw ConfigError("domain.upper must exceed domain.lower on every axis");
    spec.axes.push_back(Axis{lower[a], upper[a], nodes[a]});
  }
  return spec;
}

}  // namespace

RawConfig read_raw_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax error: ") + e.message() + " (line " +
                      std::to_string(e.line()) + ")");
  }
  RawConfig raw;
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) throw ConfigError("config key '" + section + "' must appear inside a [section]");
    if (!known_keys().contains(section)) throw ConfigError("unknown config section [" + section + "]");
    for (const auto& [key, value] : body) {
      require_known(section, key);
      raw[section][key] = Reader::trimmed(value.get_value<std::string>());
    }
  }
  return raw;
}

void apply_overrides(RawConfig& raw, const std::vector<std::string>& overrides) {
  for (const std::string& item : overrides) {
    const auto eq = item.find('=');
    const auto dot = item.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      throw ConfigError("override '" + item + "' must look like section.key=value");
    }
    const std::string section = Reader::trimmed(item.substr(0, dot));
    const std::string key = Reader::trimmed(item.substr(dot + 1, eq - dot - 1));
    require_known(section, key);
    raw[section][key] = Reader::trimmed(item.substr(eq + 1));
  }
}

Config build_config(const RawConfig& raw) {
  const Reader r(raw);
  Config cfg;

  const std::string kind = r.text("model", "kind");
  if (kind == "example4") {
    cfg.kind = ModelKind::Example4;
  } else if (kind == "custom1d") {
    cfg.kind = ModelKind::Custom1d;
  } else {
    throw ConfigError("model.kind must be example4 or custom1d, got '" + kind + "'");
  }

  ModelSpec& m = cfg.model;
  m.c = r.number("model", "c");
  m.alpha = r.number("model", "alpha");
  const double a_f = r.number("model", "a_f");
  const long p = r.integer("model", "p");
  const double beta = r.number("model", "beta");
  const double sigma0 = r.number_or("model", "sigma0", 0.0);
  const double nu = r.number_or("model", "nu", 1.0);
  if (a_f < 0.0) throw ConfigError("model.a_f must be non-negative (0 selects the zero nonlinearity)");
  if (p < 2) throw ConfigError("model.p must be an integer >= 2");
  if (!(beta > 0.0)) throw ConfigError("model.beta must be positive");
  if (sigma0 < 0.0) throw ConfigError("model.sigma0 must be non-negative");
  if (!(nu > 0.0)) throw ConfigError("model.nu must be positive");
  if (a_f > 0.0) {
    m.nonlinearity = MonomialNonlinearity{a_f, static_cast<int>(p)};
  } else {
    m.nonlinearity = ZeroNonlinearity{};
  }
  m.sigma = ArctanNoiseAmplitude{sigma0, nu};
  if (cfg.kind == ModelKind::Example4) {
    m.initial = DecayingInitialData{beta};
  } else {
    m.initial = SineModeInitialData{beta};
  }
  m.validate();

  cfg.grid = build_grid_spec(r, cfg.kind);

  const std::string kernel = r.text_or("noise", "kernel", "dotprod");
  const double r0 = r.number_or("noise", "r0", 1.0);
  const double rho = r.number_or("noise", "rho", 1.0);
  if (kernel == "dotprod") {
    cfg.noise.kernel = DotProductKernel{r0, rho};
  } else if (kernel == "sqexp") {
    cfg.noise.kernel = SquaredExpKernel{r0, rho};
  } else if (kernel == "zero") {
    cfg.noise.kernel = ZeroKernel{};
  } else {
    throw ConfigError("noise.kernel must be dotprod, sqexp or zero, got '" + kernel + "'");
  }
  cfg.noise.psd_clip_tol = r.number_or("noise", "psd_clip_tol", 1e-8);
  cfg.noise.coarse_stride = static_cast<int>(r.integer_or("noise", "coarse_noise_stride", 1));
  cfg.noise.validate();

  TimeSpec& ts = cfg.time;
  if (r.has("time", "dt") && r.has("time", "cfl_factor")) {
    throw ConfigError("time.dt and time.cfl_factor are mutually exclusive");
  }
  if (r.has("time", "dt")) ts.dt = r.number("time", "dt");
  ts.cfl_factor = r.number_or("time", "cfl_factor", 0.5);
  ts.t_max = r.number_or("time", "t_max", 1.0);
  ts.record_every = static_cast<int>(r.integer_or("time", "record_every", 1));
  ts.blowup_threshold_ratio = r.number_or("time", "blowup_threshold_ratio", 1e6);
  const std::string scheme = r.text_or("time", "scheme", "verlet");
  if (scheme == "verlet") {
    ts.scheme = Scheme::PositionVerlet;
  } else if (scheme == "euler_maruyama") {
    ts.scheme = Scheme::EulerMaruyama;
  } else {
    throw ConfigError("time.scheme must be verlet or euler_maruyama, got '" + scheme + "'");
  }
  ts.validate();

  const long n_paths = r.integer_or("mc", "n_paths", 1);
  if (n_paths < 1) throw ConfigError("mc.n_paths must be >= 1");
  cfg.mc.n_paths = static_cast<std::size_t>(n_paths);
  cfg.mc.master_seed = r.unsigned_or("mc", "master_seed", 0);
  const long workers = r.integer_or("mc", "max_workers", 0);
  if (workers < 0) throw ConfigError("mc.max_workers must be >= 0");
  cfg.mc.max_workers = static_cast<unsigned>(workers);

  cfg.output_dir = r.text_or("output", "directory", ".");

  ExampleParams& ex = cfg.example;
  ex.c = m.c;
  ex.alpha = m.alpha;
  ex.beta = beta;
  ex.p = static_cast<int>(p);
  ex.a_f = a_f;
  ex.sigma0 = sigma0;
  ex.nu = nu;
  ex.r0 = r0;
  ex.rho = rho;
  return cfg;
}

Config parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  std::istringstream in(text);
  RawConfig raw = read_raw_config(in);
  apply_overrides(raw, overrides);
  return build_config(raw);
}

Config load_config(const std::filesystem::path& file, const std::vector<std::string>& overrides) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file " + file.string());
  RawConfig raw = read_raw_config(in);
  apply_overrides(raw, overrides);
  return build_config(raw);
}

}  // namespace stochwave
