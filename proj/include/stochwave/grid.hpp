#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace stochwave {

/// Nodal values on the interior nodes of a Grid, in row-major node order.
using Field = Eigen::VectorXd;

/// One gradient vector per node (rows), one column per spatial axis.
using VectorField = Eigen::MatrixXd;

/// Position in R^d; unused trailing coordinates are zero.
using Point = std::array<double, 2>;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Axis {
  double lower = 0.0;
  double upper = 1.0;
  int nodes = 3;  // interior nodes
};

struct GridSpec {
  int dim = 1;
  std::vector<Axis> axes;

  static GridSpec interval(double lower, double upper, int nodes);
  static GridSpec rectangle(Axis x, Axis y);
  /// [0, L] x [-L, L]: the truncated half-plane {x1 > 0}.
  static GridSpec half_plane(double L, int nodes_x1, int nodes_x2);
};

/// Uniform vertex-centred grid with homogeneous Dirichlet data on every face.
///
/// Interior node i along an axis sits at lower + (i + 1) * h with
/// h = (upper - lower) / (nodes + 1); boundary nodes are implicit zeros.
/// Multi-dimensional nodes are enumerated row-major (last axis fastest).
class Grid {
 public:
  explicit Grid(GridSpec spec);

  int dim() const { return spec_.dim; }
  std::size_t size() const { return size_; }
  const GridSpec& spec() const { return spec_; }

  double spacing(int axis) const { return spacing_[static_cast<std::size_t>(axis)]; }
  double min_spacing() const;
  int nodes(int axis) const { return spec_.axes[static_cast<std::size_t>(axis)].nodes; }

  /// Quadrature weight of every interior node (cell length or area).
  double cell_volume() const { return cell_volume_; }

  Point node(std::size_t index) const;
  std::size_t index(int i0, int i1 = 0) const;

  Field sample(const std::function<double(const Point&)>& fn) const;

  bool same_shape(const Grid& other) const;

 private:
  GridSpec spec_;
  std::array<double, 2> spacing_{0.0, 0.0};
  double cell_volume_ = 0.0;
  std::size_t size_ = 0;
};

Grid build_grid(const GridSpec& spec);

/// Midpoint quadrature of the product a*b over the domain.
double inner_product(const Field& a, const Field& b, const Grid& grid);
double squared_norm(const Field& a, const Grid& grid);

/// Three-point (1-D) / five-point (2-D) Laplacian with zero Dirichlet ghosts.
Field laplacian(const Field& u, const Grid& grid);

/// Squared L2 norm of the discrete gradient, summed over every grid edge,
/// including the edges that connect a face-adjacent node to its Dirichlet
/// ghost on both sides of each axis. With this convention
/// inner_product(-laplacian(u), u) == gradient_sq_norm(u).
double gradient_sq_norm(const Field& u, const Grid& grid);

/// Forward-difference gradient at each interior node; the neighbour past the
/// upper face is the Dirichlet ghost. The lower-face edges are not attached to
/// any node, see lower_face_gradient_sq.
VectorField pointwise_gradient(const Field& u, const Grid& grid);

/// Gradient energy carried by the edges between the lower-face ghosts and
/// their interior neighbours:
///   gradient_sq_norm(u) == cell_volume * sum |grad_i|^2 + lower_face_gradient_sq(u).
double lower_face_gradient_sq(const Field& u, const Grid& grid);

/// Composite trapezoid rule for a function defined on the closed box,
/// boundary nodes included with half weights. Use for integrands that are
/// not required to vanish on the boundary (kernels, continuum initial data).
double integrate_closed(const Grid& grid, const std::function<double(const Point&)>& fn);

void require_finite(const Field& u, const char* what);

}  // namespace stochwave
