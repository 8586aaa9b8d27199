#include "stochwave/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace stochwave {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double dot(const Point& x, const Point& y) { return x[0] * y[0] + x[1] * y[1]; }

double dist_sq(const Point& x, const Point& y) {
  const double a = x[0] - y[0];
  const double b = x[1] - y[1];
  return a * a + b * b;
}

// Block centre of block m when an axis of n nodes is cut into blocks of s.
int block_centre(int m, int s, int n) { return std::min(m * s + s / 2, n - 1); }
int block_count(int s, int n) { return (n + s - 1) / s; }

}  // namespace

void NoiseSpec::validate() const {
  std::visit(overloaded{[](const ZeroKernel&) {},
                        [](const auto& k) {
                          if (!(k.r0 > 0.0)) throw ConfigError("noise.r0 must be positive");
                          if (!(k.rho > 0.0)) throw ConfigError("noise.rho must be positive");
                        }},
             kernel);
  if (!(psd_clip_tol >= 0.0)) throw ConfigError("noise.psd_clip_tol must be non-negative");
  if (coarse_stride < 1) throw ConfigError("noise.coarse_noise_stride must be >= 1");
}

double kernel_eval(const Kernel& k, const Point& x, const Point& y) {
  return std::visit(
      overloaded{[](const ZeroKernel&) { return 0.0; },
                 [&](const DotProductKernel& d) { return d.r0 * std::exp(-d.rho * dot(x, y)); },
                 [&](const SquaredExpKernel& s) { return s.r0 * std::exp(-s.rho * dist_sq(x, y)); }},
      k);
}

bool is_zero_kernel(const Kernel& k) { return std::holds_alternative<ZeroKernel>(k); }

Eigen::MatrixXd covariance_matrix(const NoiseSpec& ns, const std::vector<Point>& nodes) {
  const auto n = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd R(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double r = kernel_eval(ns.kernel, nodes[static_cast<std::size_t>(i)],
                                   nodes[static_cast<std::size_t>(j)]);
      R(i, j) = r;
      R(j, i) = r;
    }
  }
  return R;
}

Eigen::MatrixXd covariance_matrix(const NoiseSpec& ns, const Grid& grid) {
  std::vector<Point> nodes(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) nodes[i] = grid.node(i);
  return covariance_matrix(ns, nodes);
}

NoiseFactor psd_repair_and_factor(const Eigen::MatrixXd& R, double tol) {
  if (R.rows() != R.cols()) throw std::invalid_argument("psd_repair_and_factor: matrix not square");
  if (!R.allFinite()) throw std::invalid_argument("psd_repair_and_factor: non-finite entries");
  const double scale = std::max(1.0, R.cwiseAbs().maxCoeff());
  if ((R - R.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("psd_repair_and_factor: matrix not symmetric");
  }
  const auto n = R.rows();
  NoiseFactor out;
  out.node_count = static_cast<std::size_t>(n);
  if (n == 0) return out;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(R);
  if (eig.info() != Eigen::Success) throw std::runtime_error("psd_repair_and_factor: eigensolver failed");
  Eigen::VectorXd lambda = eig.eigenvalues();
  const double lmax = lambda.cwiseAbs().maxCoeff();
  const double cutoff = tol * lmax;
  double clipped = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lambda[i] < 0.0) {
      if (-lambda[i] > cutoff) clipped += -lambda[i];
      lambda[i] = 0.0;
    }
  }
  const double trace = R.trace();
  out.clipped_mass = trace > 0.0 ? clipped / trace : 0.0;
  out.flagged = out.clipped_mass > kClippedMassFlag;

  const Eigen::MatrixXd& V = eig.eigenvectors();
  out.repaired = V * lambda.asDiagonal() * V.transpose();

  // R+ = V L V^T = (sqrt(L) V^T)^T (sqrt(L) V^T). With sqrt(L) V^T = Q U, the
  // triangular U satisfies U^T U = R+, so B = U^T is lower triangular even
  // when R+ is singular.
  const Eigen::MatrixXd root = lambda.cwiseSqrt().asDiagonal() * V.transpose();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(root);
  Eigen::MatrixXd U = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (U(i, i) < 0.0) U.row(i) *= -1.0;
  }
  out.factor = U.transpose();
  return out;
}

Field sample_increment(const NoiseFactor& nf, double dt, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(nf.node_count);
  if (dt < 0.0) throw std::invalid_argument("sample_increment: dt must be non-negative");
  if (dt == 0.0) return Field::Zero(n);
  std::normal_distribution<double> normal(0.0, 1.0);
  Field z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = normal(rng);
  Field out = nf.factor.triangularView<Eigen::Lower>() * z;
  return std::sqrt(dt) * out;
}

std::size_t noise_node_count(const NoiseSpec& ns, const Grid& grid) {
  if (is_zero_kernel(ns.kernel)) return 0;
  const int s = ns.coarse_stride;
  std::size_t count = static_cast<std::size_t>(block_count(s, grid.nodes(0)));
  if (grid.dim() == 2) count *= static_cast<std::size_t>(block_count(s, grid.nodes(1)));
  return count;
}

NoiseSource::NoiseSource(const NoiseSpec& ns, const Grid& grid) {
  ns.validate();
  zero_ = is_zero_kernel(ns.kernel);
  if (zero_) return;
  const int s = ns.coarse_stride;
  coarse_ = s > 1;
  injection_.resize(grid.size());
  if (grid.dim() == 1) {
    const int n = grid.nodes(0);
    const int blocks = block_count(s, n);
    for (int m = 0; m < blocks; ++m) noise_nodes_.push_back(grid.node(grid.index(block_centre(m, s, n))));
    for (int i = 0; i < n; ++i) injection_[grid.index(i)] = static_cast<std::size_t>(i / s);
  } else {
    const int n0 = grid.nodes(0);
    const int n1 = grid.nodes(1);
    const int b0 = block_count(s, n0);
    const int b1 = block_count(s, n1);
    for (int m0 = 0; m0 < b0; ++m0) {
      for (int m1 = 0; m1 < b1; ++m1) {
        noise_nodes_.push_back(grid.node(grid.index(block_centre(m0, s, n0), block_centre(m1, s, n1))));
      }
    }
    for (int i0 = 0; i0 < n0; ++i0) {
      for (int i1 = 0; i1 < n1; ++i1) {
        injection_[grid.index(i0, i1)] = static_cast<std::size_t>((i0 / s) * b1 + i1 / s);
      }
    }
  }
  factor_ = psd_repair_and_factor(covariance_matrix(ns, noise_nodes_), ns.psd_clip_tol);
}

Field NoiseSource::sample(double dt, Rng& rng) const {
  if (zero_) return Field::Zero(static_cast<Eigen::Index>(injection_.size()));
  const Field w = sample_increment(factor_, dt, rng);
  if (!coarse_) return w;
  Field out(static_cast<Eigen::Index>(injection_.size()));
  for (std::size_t i = 0; i < injection_.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = w[static_cast<Eigen::Index>(injection_[i])];
  }
  return out;
}

double trace_q(const ModelSpec& m, const Field& u, const VectorField& grads, double t,
               const Grid& grid, const NoiseSpec& ns) {
  if (is_zero_kernel(ns.kernel) || std::holds_alternative<ZeroNoiseAmplitude>(m.sigma)) return 0.0;
  require_finite(u, "trace_q");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const Point x = grid.node(static_cast<std::size_t>(i));
    const double s = sigma_eval(m, u[i], grads.row(i).squaredNorm(), x, t);
    sum += kernel_eval(ns.kernel, x, x) * s * s;
  }
  return grid.cell_volume() * sum;
}

NoiseBudget noise_budget(const ModelSpec& m, const NoiseSpec& ns, const Grid& grid) {
  NoiseBudget out;
  const auto* amp = std::get_if<ArctanNoiseAmplitude>(&m.sigma);
  if (amp == nullptr || is_zero_kernel(ns.kernel) || amp->sigma0 == 0.0) {
    if (std::holds_alternative<DotProductKernel>(ns.kernel) && grid.dim() == 2) out.closed_form = 0.0;
    return out;
  }
  if (!(amp->nu > 0.0)) throw ConfigError("noise budget diverges: the amplitude envelope must decay (nu > 0)");
  // q(x, t) = q0 exp(-2 nu t) for the arctan amplitude, so the time integral
  // is q0 / (2 nu) exactly.
  const double q0 = q_envelope(m, Point{0.0, 0.0}, 0.0);
  const double time_factor = q0 / (2.0 * amp->nu);
  const double space = integrate_closed(grid, [&](const Point& x) { return kernel_eval(ns.kernel, x, x); });
  out.quadrature = space * time_factor;
  if (const auto* d = std::get_if<DotProductKernel>(&ns.kernel); d && grid.dim() == 2) {
    // integral over {x1 > 0} of exp(-rho |x|^2) = pi / (2 rho)
    out.closed_form = d->r0 * amp->sigma0 * amp->sigma0 * std::pow(std::numbers::pi, 3) /
                      (16.0 * d->rho * amp->nu);
  }
  return out;
}

}  // namespace stochwave
