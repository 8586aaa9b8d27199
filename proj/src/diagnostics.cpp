#include "stochwave/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stochwave {

double energy(const ModelSpec& m, const Field& u, const Field& v, const Grid& grid) {
  require_finite(u, "energy");
  require_finite(v, "energy");
  return m.c * m.c * gradient_sq_norm(u, grid) + m.alpha * squared_norm(u, grid) + squared_norm(v, grid);
}

double F_integral(const ModelSpec& m, const Field& u, const Grid& grid) {
  require_finite(u, "F_integral");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) sum += F_eval(m, u[i]);
  return grid.cell_volume() * sum;
}

double phi_second_derivative_integrand(const ModelSpec& m, const Field& u, const Field& v,
                                       const Grid& grid) {
  require_finite(u, "phi_second_derivative_integrand");
  require_finite(v, "phi_second_derivative_integrand");
  return squared_norm(v, grid) - m.c * m.c * gradient_sq_norm(u, grid) - m.alpha * squared_norm(u, grid) +
         inner_product(u, f_field(m, u), grid);
}

namespace {

// Number of leading entries of rec that are regular checkpoints, i.e. taken
// strictly before the path blew up.
std::size_t checkpoint_entries(const PathRecord& rec) {
  if (!rec.blown_up) return rec.size();
  return rec.size() == 0 ? 0 : rec.size() - 1;
}

}  // namespace

EnsembleStats ensemble_stats(const std::vector<PathRecord>& records, std::vector<double> axis,
                             double lambda) {
  if (records.empty()) throw std::invalid_argument("ensemble_stats: no paths");
  if (axis.empty()) {
    for (const PathRecord& rec : records) {
      const std::size_t n = checkpoint_entries(rec);
      if (n > axis.size()) axis.assign(rec.times.begin(), rec.times.begin() + static_cast<long>(n));
    }
  }
  for (const PathRecord& rec : records) {
    const std::size_t n = std::min(checkpoint_entries(rec), axis.size());
    for (std::size_t j = 0; j < n; ++j) {
      if (rec.times[j] != axis[j]) throw std::invalid_argument("ensemble_stats: mismatched time axes");
    }
    if (checkpoint_entries(rec) > axis.size()) {
      throw std::invalid_argument("ensemble_stats: record is longer than the checkpoint axis");
    }
  }

  EnsembleStats out;
  out.n_paths = records.size();
  out.lambda = lambda;
  const auto M = static_cast<double>(records.size());
  for (std::size_t j = 0; j < axis.size(); ++j) {
    const double t = axis[j];
    std::size_t alive = 0;
    std::size_t blown = 0;
    double sum = 0.0;
    double sum_e = 0.0;
    double sum_uv = 0.0;
    for (const PathRecord& rec : records) {
      if (rec.blown_up && rec.t_blow && *rec.t_blow <= t) {
        ++blown;
        continue;
      }
      if (j >= checkpoint_entries(rec)) {
        throw std::invalid_argument("ensemble_stats: a live path is missing a checkpoint");
      }
      ++alive;
      sum += rec.l2_sq[j];
      sum_e += rec.energy[j];
      sum_uv += rec.uv[j];
    }
    out.times.push_back(t);
    out.n_alive.push_back(alive);
    out.frac_blown.push_back(static_cast<double>(blown) / M);
    if (alive == 0) {
      out.phi.emplace_back();
      out.phi_ci.push_back(0.0);
      out.psi.emplace_back();
      out.mean_energy.emplace_back();
      out.mean_uv.emplace_back();
      break;
    }
    const double n = static_cast<double>(alive);
    const double mean = sum / n;
    double ci = 0.0;
    if (alive > 1) {
      double ss = 0.0;
      for (const PathRecord& rec : records) {
        if (rec.blown_up && rec.t_blow && *rec.t_blow <= t) continue;
        const double d = rec.l2_sq[j] - mean;
        ss += d * d;
      }
      ci = 1.96 * 0.5 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    const double phi = 0.5 * mean;
    out.phi.emplace_back(phi);
    out.phi_ci.push_back(ci);
    if (phi > 0.0) {
      out.psi.emplace_back(std::pow(phi, -lambda));
    } else {
      out.psi.emplace_back();
    }
    out.mean_energy.emplace_back(sum_e / n);
    out.mean_uv.emplace_back(sum_uv / n);
  }
  return out;
}

std::vector<double> energy_residual(const PathRecord& rec) {
  std::vector<double> out;
  if (rec.size() == 0) return out;
  const double e0 = rec.energy.front();
  out.reserve(rec.size());
  for (double r : rec.energy_residual) out.push_back(e0 > 0.0 ? r / e0 : r);
  return out;
}

std::optional<double> extrapolated_blowup_time(const EnsembleStats& stats) {
  std::vector<std::size_t> defined;
  for (std::size_t j = 0; j < stats.size(); ++j) {
    if (stats.psi[j]) defined.push_back(j);
  }
  if (defined.size() < 2) return std::nullopt;
  const std::size_t a = defined[defined.size() - 2];
  const std::size_t b = defined.back();
  const double slope = (*stats.psi[b] - *stats.psi[a]) / (stats.times[b] - stats.times[a]);
  if (!(slope < 0.0)) return std::nullopt;
  return stats.times[b] - *stats.psi[b] / slope;
}

}  // namespace stochwave
