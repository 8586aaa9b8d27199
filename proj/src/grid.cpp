#include "stochwave/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stochwave {

GridSpec GridSpec::interval(double lower, double upper, int nodes) {
  return GridSpec{1, {Axis{lower, upper, nodes}}};
}

GridSpec GridSpec::rectangle(Axis x, Axis y) { return GridSpec{2, {x, y}}; }

GridSpec GridSpec::half_plane(double L, int nodes_x1, int nodes_x2) {
  return rectangle(Axis{0.0, L, nodes_x1}, Axis{-L, L, nodes_x2});
}

Grid::Grid(GridSpec spec) : spec_(std::move(spec)) {
  if (spec_.dim != 1 && spec_.dim != 2) {
    throw ConfigError("grid dimension must be 1 or 2, got " + std::to_string(spec_.dim));
  }
  if (spec_.axes.size() != static_cast<std::size_t>(spec_.dim)) {
    throw ConfigError("grid needs exactly one axis description per dimension");
  }
  size_ = 1;
  cell_volume_ = 1.0;
  for (std::size_t a = 0; a < spec_.axes.size(); ++a) {
    const Axis& axis = spec_.axes[a];
    if (!(std::isfinite(axis.lower) && std::isfinite(axis.upper)) || !(axis.upper > axis.lower)) {
      throw ConfigError("grid axis " + std::to_string(a) + " must have upper > lower");
    }
    if (axis.nodes < 3) {
      throw ConfigError("grid axis " + std::to_string(a) + " needs at least 3 interior nodes");
    }
    spacing_[a] = (axis.upper - axis.lower) / (axis.nodes + 1);
    cell_volume_ *= spacing_[a];
    size_ *= static_cast<std::size_t>(axis.nodes);
  }
}

double Grid::min_spacing() const {
  return spec_.dim == 1 ? spacing_[0] : std::min(spacing_[0], spacing_[1]);
}

Point Grid::node(std::size_t index) const {
  Point p{0.0, 0.0};
  if (spec_.dim == 1) {
    p[0] = spec_.axes[0].lower + static_cast<double>(index + 1) * spacing_[0];
    return p;
  }
  const auto n1 = static_cast<std::size_t>(spec_.axes[1].nodes);
  const std::size_t i0 = index / n1;
  const std::size_t i1 = index % n1;
  p[0] = spec_.axes[0].lower + static_cast<double>(i0 + 1) * spacing_[0];
  p[1] = spec_.axes[1].lower + static_cast<double>(i1 + 1) * spacing_[1];
  return p;
}

std::size_t Grid::index(int i0, int i1) const {
  if (spec_.dim == 1) return static_cast<std::size_t>(i0);
  return static_cast<std::size_t>(i0) * static_cast<std::size_t>(spec_.axes[1].nodes) +
         static_cast<std::size_t>(i1);
}

Field Grid::sample(const std::function<double(const Point&)>& fn) const {
  Field out(static_cast<Eigen::Index>(size_));
  for (std::size_t i = 0; i < size_; ++i) out[static_cast<Eigen::Index>(i)] = fn(node(i));
  return out;
}

bool Grid::same_shape(const Grid& other) const {
  if (spec_.dim != other.spec_.dim) return false;
  for (std::size_t a = 0; a < spec_.axes.size(); ++a) {
    const Axis& x = spec_.axes[a];
    const Axis& y = other.spec_.axes[a];
    if (x.nodes != y.nodes || x.lower != y.lower || x.upper != y.upper) return false;
  }
  return true;
}

Grid build_grid(const GridSpec& spec) { return Grid(spec); }

namespace {

void require_size(const Field& a, const Grid& grid, const char* what) {
  if (static_cast<std::size_t>(a.size()) != grid.size()) {
    throw std::invalid_argument(std::string(what) + ": field length " + std::to_string(a.size()) +
                                " does not match grid node count " + std::to_string(grid.size()));
  }
}

// Value of u at (i0 + d0, i1 + d1), zero outside the interior.
inline double at(const Field& u, const Grid& g, int i0, int i1) {
  if (i0 < 0 || i0 >= g.nodes(0)) return 0.0;
  if (g.dim() == 2 && (i1 < 0 || i1 >= g.nodes(1))) return 0.0;
  return u[static_cast<Eigen::Index>(g.index(i0, i1))];
}

}  // namespace

void require_finite(const Field& u, const char* what) {
  if (!u.allFinite()) throw std::domain_error(std::string(what) + ": non-finite field value");
}

double inner_product(const Field& a, const Field& b, const Grid& grid) {
  require_size(a, grid, "inner_product");
  require_size(b, grid, "inner_product");
  return grid.cell_volume() * a.dot(b);
}

double squared_norm(const Field& a, const Grid& grid) { return inner_product(a, a, grid); }

Field laplacian(const Field& u, const Grid& grid) {
  require_size(u, grid, "laplacian");
  require_finite(u, "laplacian");
  Field out(u.size());
  const double ih0 = 1.0 / (grid.spacing(0) * grid.spacing(0));
  if (grid.dim() == 1) {
    const int n = grid.nodes(0);
    for (int i = 0; i < n; ++i) {
      const double left = i > 0 ? u[i - 1] : 0.0;
      const double right = i + 1 < n ? u[i + 1] : 0.0;
      out[i] = (left - 2.0 * u[i] + right) * ih0;
    }
    return out;
  }
  const double ih1 = 1.0 / (grid.spacing(1) * grid.spacing(1));
  const int n0 = grid.nodes(0);
  const int n1 = grid.nodes(1);
  for (int i0 = 0; i0 < n0; ++i0) {
    for (int i1 = 0; i1 < n1; ++i1) {
      const double c = at(u, grid, i0, i1);
      out[static_cast<Eigen::Index>(grid.index(i0, i1))] =
          (at(u, grid, i0 - 1, i1) - 2.0 * c + at(u, grid, i0 + 1, i1)) * ih0 +
          (at(u, grid, i0, i1 - 1) - 2.0 * c + at(u, grid, i0, i1 + 1)) * ih1;
    }
  }
  return out;
}

VectorField pointwise_gradient(const Field& u, const Grid& grid) {
  require_size(u, grid, "pointwise_gradient");
  require_finite(u, "pointwise_gradient");
  VectorField grad(u.size(), grid.dim());
  const double ih0 = 1.0 / grid.spacing(0);
  if (grid.dim() == 1) {
    const int n = grid.nodes(0);
    for (int i = 0; i < n; ++i) grad(i, 0) = ((i + 1 < n ? u[i + 1] : 0.0) - u[i]) * ih0;
    return grad;
  }
  const double ih1 = 1.0 / grid.spacing(1);
  for (int i0 = 0; i0 < grid.nodes(0); ++i0) {
    for (int i1 = 0; i1 < grid.nodes(1); ++i1) {
      const auto k = static_cast<Eigen::Index>(grid.index(i0, i1));
      const double c = u[k];
      grad(k, 0) = (at(u, grid, i0 + 1, i1) - c) * ih0;
      grad(k, 1) = (at(u, grid, i0, i1 + 1) - c) * ih1;
    }
  }
  return grad;
}

double lower_face_gradient_sq(const Field& u, const Grid& grid) {
  require_size(u, grid, "lower_face_gradient_sq");
  require_finite(u, "lower_face_gradient_sq");
  if (grid.dim() == 1) {
    const double d = u[0] / grid.spacing(0);
    return grid.cell_volume() * d * d;
  }
  double sum = 0.0;
  const double ih0 = 1.0 / grid.spacing(0);
  const double ih1 = 1.0 / grid.spacing(1);
  for (int i1 = 0; i1 < grid.nodes(1); ++i1) {
    const double d = at(u, grid, 0, i1) * ih0;
    sum += d * d;
  }
  for (int i0 = 0; i0 < grid.nodes(0); ++i0) {
    const double d = at(u, grid, i0, 0) * ih1;
    sum += d * d;
  }
  return grid.cell_volume() * sum;
}

double gradient_sq_norm(const Field& u, const Grid& grid) {
  const VectorField grad = pointwise_gradient(u, grid);
  return grid.cell_volume() * grad.squaredNorm() + lower_face_gradient_sq(u, grid);
}

double integrate_closed(const Grid& grid, const std::function<double(const Point&)>& fn) {
  // Boundary nodes sit at index 0 and nodes + 1 along each axis.
  auto weight = [](int i, int last) { return (i == 0 || i == last) ? 0.5 : 1.0; };
  const Axis& a0 = grid.spec().axes[0];
  const int last0 = a0.nodes + 1;
  double sum = 0.0;
  if (grid.dim() == 1) {
    for (int i = 0; i <= last0; ++i) {
      sum += weight(i, last0) * fn(Point{a0.lower + i * grid.spacing(0), 0.0});
    }
    return sum * grid.cell_volume();
  }
  const Axis& a1 = grid.spec().axes[1];
  const int last1 = a1.nodes + 1;
  for (int i0 = 0; i0 <= last0; ++i0) {
    const double x0 = a0.lower + i0 * grid.spacing(0);
    const double w0 = weight(i0, last0);
    double row = 0.0;
    for (int i1 = 0; i1 <= last1; ++i1) {
      row += weight(i1, last1) * fn(Point{x0, a1.lower + i1 * grid.spacing(1)});
    }
    sum += w0 * row;
  }
  return sum * grid.cell_volume();
}

}  // namespace stochwave
