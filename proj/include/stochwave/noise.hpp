#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "stochwave/grid.hpp"
#include "stochwave/model.hpp"

namespace stochwave {

using Rng = std::mt19937_64;

struct ZeroKernel {};

/// r(x, y) = r0 * exp(-rho * (x . y)); not guaranteed PSD on a node set.
struct DotProductKernel {
  double r0 = 1.0;
  double rho = 1.0;
};

/// r(x, y) = r0 * exp(-rho * |x - y|^2).
struct SquaredExpKernel {
  double r0 = 1.0;
  double rho = 1.0;
};

using Kernel = std::variant<ZeroKernel, DotProductKernel, SquaredExpKernel>;

struct NoiseSpec {
  Kernel kernel = ZeroKernel{};
  /// Eigenvalues with |lambda| <= tol * max|lambda| are treated as round-off.
  double psd_clip_tol = 1e-8;
  /// Noise nodes are every stride-th solution node per axis (block centres);
  /// 1 samples on the solution grid itself.
  int coarse_stride = 1;

  void validate() const;
};

double kernel_eval(const Kernel& k, const Point& x, const Point& y);
bool is_zero_kernel(const Kernel& k);

Eigen::MatrixXd covariance_matrix(const NoiseSpec& ns, const std::vector<Point>& nodes);
Eigen::MatrixXd covariance_matrix(const NoiseSpec& ns, const Grid& grid);

/// Lower-triangular B with B B^T = R+, the PSD projection of R.
struct NoiseFactor {
  Eigen::MatrixXd factor;
  Eigen::MatrixXd repaired;
  /// Sum of clipped negative eigenvalues over trace(R); 0 if trace(R) == 0.
  double clipped_mass = 0.0;
  /// clipped_mass > 0.05: sampling is well defined but visibly distorted.
  bool flagged = false;
  std::size_t node_count = 0;
};

constexpr double kClippedMassFlag = 0.05;

NoiseFactor psd_repair_and_factor(const Eigen::MatrixXd& R, double tol = 1e-8);

/// B z sqrt(dt) with z standard normal draws from rng. dt == 0 returns zeros
/// without touching rng.
Field sample_increment(const NoiseFactor& nf, double dt, Rng& rng);

/// Covariance factor on the (possibly coarsened) noise node set plus the
/// nearest-node injection map onto the solution grid.
class NoiseSource {
 public:
  NoiseSource() = default;
  NoiseSource(const NoiseSpec& ns, const Grid& grid);

  const NoiseFactor& factor() const { return factor_; }
  const std::vector<Point>& noise_nodes() const { return noise_nodes_; }
  const std::vector<std::size_t>& injection() const { return injection_; }
  bool is_zero() const { return zero_; }
  bool coarse() const { return coarse_; }

  /// Increment on the solution grid.
  Field sample(double dt, Rng& rng) const;

 private:
  NoiseFactor factor_;
  std::vector<Point> noise_nodes_;
  std::vector<std::size_t> injection_;
  bool zero_ = true;
  bool coarse_ = false;
};

/// Noise node count a NoiseSource would factorize for this spec and grid.
std::size_t noise_node_count(const NoiseSpec& ns, const Grid& grid);

/// Trace of the noise covariance operator at state u:
///   cell_volume * sum_i r(x_i, x_i) sigma(u_i, grad_i, x_i, t)^2.
double trace_q(const ModelSpec& m, const Field& u, const VectorField& grads, double t,
               const Grid& grid, const NoiseSpec& ns);

/// Total energy the noise may inject: integral over time and space of
/// r(x, x) q(x, t).
struct NoiseBudget {
  /// Exact half-plane value; only for the dot-product kernel with the arctan
  /// amplitude on a 2-D grid.
  std::optional<double> closed_form;
  /// Trapezoid rule in space on the grid's closed box, exact time integral.
  double quadrature = 0.0;

  double value() const { return closed_form ? *closed_form : quadrature; }
};

NoiseBudget noise_budget(const ModelSpec& m, const NoiseSpec& ns, const Grid& grid);

}  // namespace stochwave
