#pragma once

// Cell-centered grids over the geodesic cap B(rho_max) of H^n(1), ghost
// layout, Neumann ghost filling and second-order stencils.
//
// Radial mode: rotationally symmetric fields u(rho) on nodes
// rho_i = (i + 1/2) h, one ghost at each end, any n >= 2.
// Disk mode (n = 2): polar mesh (r, theta) in chart coordinates with
// r_i = (i + 1/2) dr over (0, sinh(rho_max)], theta_j = j dtheta periodic,
// ghost rings at both r ends.

#include "imcf/base_geometry.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace imcf {

enum class GridMode { Radial, Disk };

struct GridConfig {
  GridMode mode = GridMode::Radial;
  int n = 2;
  double rho_max = 1.0;
  int cells = 256;
  int cells_theta = 16;  // disk mode only
};

class Grid {
 public:
  GridMode mode() const { return config_.mode; }
  const GridConfig& config() const { return config_; }
  int n() const { return config_.n; }
  double rho_max() const { return config_.rho_max; }
  int cells() const { return config_.cells; }
  int cells_theta() const { return config_.mode == GridMode::Disk ? config_.cells_theta : 1; }

  /// Radial mode: h in rho. Disk mode: dr in the chart radius.
  double dr() const { return dr_; }
  double dtheta() const { return dtheta_; }
  /// Largest mesh size; used to scale discretization slack.
  double spacing() const { return dr_; }

  int interior_size() const { return cells() * cells_theta(); }
  int storage_size() const { return (cells() + 2) * cells_theta(); }

  /// Storage index of ring/cell i in [-1, cells] and angle j.
  int index(int i, int j = 0) const { return (i + 1) * cells_theta() + j; }
  /// Storage index of the k-th interior node (k = i * cells_theta + j).
  int interior_index(int k) const { return k + cells_theta(); }

  /// Node radius: rho_i in radial mode, chart radius r_i in disk mode.
  double radius(int i) const { return (i + 0.5) * dr_; }
  double angle(int j) const { return j * dtheta_; }
  /// Geodesic distance from the pole of interior node k.
  double geodesic_radius(int k) const;
  /// Chart point of interior node k (radial mode: along the first axis).
  ChartPoint chart_point(int k) const;

  /// Quadrature weights of the sigma-volume, one per interior node.
  std::span<const double> quad_weights() const { return weights_; }
  /// Quadrature of 1 over the cap.
  double cap_area() const;
  /// Exact sigma-volume of the geodesic ball of radius rho_max.
  double exact_cap_area() const;

 private:
  friend std::shared_ptr<const Grid> build_grid(const GridConfig&);
  Grid() = default;

  GridConfig config_;
  double dr_ = 0.0;
  double dtheta_ = 0.0;
  std::vector<double> weights_;
};

/// Validates the configuration (ConfigError on failure).
std::shared_ptr<const Grid> build_grid(const GridConfig& config);

/// Surface area of the unit sphere S^{n-1}.
double unit_sphere_area(int n);

/// Nodal values on a grid including ghost layers.
class Field {
 public:
  Field() = default;
  explicit Field(std::shared_ptr<const Grid> grid, double value = 0.0);

  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double& at(int i, int j = 0) { return values_[grid_->index(i, j)]; }
  double at(int i, int j = 0) const { return values_[grid_->index(i, j)]; }
  double& interior(int k) { return values_[grid_->interior_index(k)]; }
  double interior(int k) const { return values_[grid_->interior_index(k)]; }

  double min_interior() const;
  double max_interior() const;

 private:
  std::shared_ptr<const Grid> grid_;
  std::vector<double> values_;
};

/// Zero conormal derivative at rho_max (even mirror), even symmetry across
/// the pole. Idempotent.
void fill_neumann_ghosts(Field& f);
Field filled(Field f);

/// Partials along rho at one radial node.
struct RadialPartials {
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Polar partials at one disk node.
struct PolarPartials {
  double r = 0.0, t = 0.0, rr = 0.0, tt = 0.0, rt = 0.0;
};

/// First and second Cartesian chart partials at one disk node.
struct ChartPartials {
  double d1 = 0.0, d2 = 0.0;            // d/dy1, d/dy2
  double d11 = 0.0, d12 = 0.0, d22 = 0.0;
};

RadialPartials radial_partials(std::span<const double> values, const Grid& grid, int i);

// Angular differences are divided by 2 sin(dtheta) and 2 (1 - cos(dtheta))
// instead of 2 dtheta and dtheta^2: still second order, and exact on the
// harmonics {1, cos, sin} so linear functions of y are differentiated exactly.
PolarPartials polar_partials(std::span<const double> values, const Grid& grid, int i, int j);

ChartPartials polar_to_chart(const PolarPartials& p, double r, double cos_t, double sin_t);

/// Per-node partials over the interior: radial mode gives {d/drho} and
/// {d^2/drho^2}; disk mode gives chart partials.
struct Derivatives {
  std::vector<Vector> first;
  std::vector<Matrix> second;
};

Derivatives d1d2(const Field& f);

/// Covariant Hessian u_ij = d_i d_j f - Gamma^k_ij d_k f. Disk mode: chart
/// components. Radial mode: components in the sigma-orthonormal frame
/// (e_rho, angular), i.e. diag(f_rhorho, coth(rho) f_rho, ...).
std::vector<Matrix> covariant_hessian(const Field& f);

/// Sum of weights[k] * integrand[k] over interior nodes in index order.
double quadrature(const Grid& grid, std::span<const double> integrand);

std::string to_string(GridMode mode);

}  // namespace imcf
