#include "imcf/discretization.hpp"

#include "imcf/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace imcf {

std::string to_string(GridMode mode) { return mode == GridMode::Radial ? "radial" : "disk"; }

double unit_sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

std::shared_ptr<const Grid> build_grid(const GridConfig& config) {
  if (config.n < 2) throw ConfigError("n must be >= 2");
  if (!(config.rho_max > 0.0) || !std::isfinite(config.rho_max)) {
    throw ConfigError("rho_max must be positive");
  }
  if (config.cells < 16) throw ConfigError("cells must be >= 16");
  if (config.mode == GridMode::Disk) {
    if (config.n != 2) throw ConfigError("disk mode requires n = 2");
    if (config.cells_theta < 4 || config.cells_theta % 2 != 0) {
      throw ConfigError("cells_theta must be even and >= 4");
    }
  }

  std::shared_ptr<Grid> grid(new Grid());
  grid->config_ = config;
  grid->weights_.resize(grid->interior_size());
  if (config.mode == GridMode::Radial) {
    grid->dr_ = config.rho_max / config.cells;
    const double omega = unit_sphere_area(config.n);
    for (int i = 0; i < config.cells; ++i) {
      grid->weights_[i] = omega * std::pow(std::sinh(grid->radius(i)), config.n - 1) * grid->dr_;
    }
  } else {
    grid->dr_ = std::sinh(config.rho_max) / config.cells;
    grid->dtheta_ = 2.0 * std::numbers::pi / config.cells_theta;
    for (int i = 0; i < config.cells; ++i) {
      const double r = grid->radius(i);
      const double w = r * grid->dr_ * grid->dtheta_ / std::sqrt(1.0 + r * r);
      for (int j = 0; j < config.cells_theta; ++j) grid->weights_[i * config.cells_theta + j] = w;
    }
  }
  return grid;
}

double Grid::geodesic_radius(int k) const {
  const int i = k / cells_theta();
  return mode() == GridMode::Radial ? radius(i) : std::asinh(radius(i));
}

ChartPoint Grid::chart_point(int k) const {
  Vector y = Vector::Zero(n());
  const int i = k / cells_theta();
  if (mode() == GridMode::Radial) {
    y[0] = std::sinh(radius(i));
  } else {
    const double theta = angle(k % cells_theta());
    y[0] = radius(i) * std::cos(theta);
    y[1] = radius(i) * std::sin(theta);
  }
  return ChartPoint{y};
}

double Grid::cap_area() const {
  double sum = 0.0;
  for (double w : weights_) sum += w;
  return sum;
}

double Grid::exact_cap_area() const {
  const int n = config_.n;
  auto integrand = [n](double rho) { return std::pow(std::sinh(rho), n - 1); };
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, config_.rho_max, 15, 1e-14);
  return unit_sphere_area(n) * integral;
}

Field::Field(std::shared_ptr<const Grid> grid, double value)
    : grid_(std::move(grid)), values_(grid_->storage_size(), value) {}

double Field::min_interior() const {
  double m = interior(0);
  for (int k = 1; k < grid_->interior_size(); ++k) m = std::min(m, interior(k));
  return m;
}

double Field::max_interior() const {
  double m = interior(0);
  for (int k = 1; k < grid_->interior_size(); ++k) m = std::max(m, interior(k));
  return m;
}

void fill_neumann_ghosts(Field& f) {
  const Grid& g = f.grid();
  const int last = g.cells() - 1;
  if (g.mode() == GridMode::Radial) {
    f.at(-1) = f.at(0);
    f.at(last + 1) = f.at(last);
    return;
  }
  const int m = g.cells_theta();
  for (int j = 0; j < m; ++j) {
    f.at(-1, j) = f.at(0, (j + m / 2) % m);
    f.at(last + 1, j) = f.at(last, j);
  }
}

Field filled(Field f) {
  fill_neumann_ghosts(f);
  return f;
}

RadialPartials radial_partials(std::span<const double> values, const Grid& grid, int i) {
  const double h = grid.dr();
  const double fm = values[grid.index(i - 1)];
  const double f0 = values[grid.index(i)];
  const double fp = values[grid.index(i + 1)];
  return {(fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)};
}

PolarPartials polar_partials(std::span<const double> values, const Grid& grid, int i, int j) {
  const int m = grid.cells_theta();
  const int jp = (j + 1) % m;
  const int jm = (j + m - 1) % m;
  const double dr = grid.dr();
  const double dt = grid.dtheta();
  const double first_t = 2.0 * std::sin(dt);
  const double second_t = 2.0 * (1.0 - std::cos(dt));
  auto v = [&](int a, int b) { return values[grid.index(a, b)]; };

  PolarPartials p;
  p.r = (v(i + 1, j) - v(i - 1, j)) / (2.0 * dr);
  p.rr = (v(i + 1, j) - 2.0 * v(i, j) + v(i - 1, j)) / (dr * dr);
  p.t = (v(i, jp) - v(i, jm)) / first_t;
  p.tt = (v(i, jp) - 2.0 * v(i, j) + v(i, jm)) / second_t;
  p.rt = (v(i + 1, jp) - v(i + 1, jm) - v(i - 1, jp) + v(i - 1, jm)) / (2.0 * dr * first_t);
  return p;
}

ChartPartials polar_to_chart(const PolarPartials& p, double r, double c, double s) {
  const double inv_r = 1.0 / r;
  const double inv_r2 = inv_r * inv_r;
  ChartPartials q;
  q.d1 = c * p.r - s * inv_r * p.t;
  q.d2 = s * p.r + c * inv_r * p.t;
  q.d11 = c * c * p.rr + s * s * inv_r2 * p.tt - 2.0 * c * s * inv_r * p.rt + s * s * inv_r * p.r +
          2.0 * c * s * inv_r2 * p.t;
  q.d22 = s * s * p.rr + c * c * inv_r2 * p.tt + 2.0 * c * s * inv_r * p.rt + c * c * inv_r * p.r -
          2.0 * c * s * inv_r2 * p.t;
  q.d12 = c * s * p.rr - c * s * inv_r2 * p.tt + (c * c - s * s) * inv_r * p.rt - c * s * inv_r * p.r -
          (c * c - s * s) * inv_r2 * p.t;
  return q;
}

Derivatives d1d2(const Field& f) {
  const Grid& g = f.grid();
  Derivatives out;
  out.first.reserve(g.interior_size());
  out.second.reserve(g.interior_size());
  for (int k = 0; k < g.interior_size(); ++k) {
    const int i = k / g.cells_theta();
    if (g.mode() == GridMode::Radial) {
      const auto p = radial_partials(f.values(), g, i);
      out.first.push_back(Vector::Constant(1, p.d1));
      out.second.push_back(Matrix::Constant(1, 1, p.d2));
    } else {
      const int j = k % g.cells_theta();
      const double theta = g.angle(j);
      const auto q = polar_to_chart(polar_partials(f.values(), g, i, j), g.radius(i), std::cos(theta),
                                    std::sin(theta));
      Vector d(2);
      d << q.d1, q.d2;
      Matrix dd(2, 2);
      dd << q.d11, q.d12, q.d12, q.d22;
      out.first.push_back(d);
      out.second.push_back(dd);
    }
  }
  return out;
}

std::vector<Matrix> covariant_hessian(const Field& f) {
  const Grid& g = f.grid();
  const Derivatives d = d1d2(f);
  std::vector<Matrix> out;
  out.reserve(g.interior_size());
  for (int k = 0; k < g.interior_size(); ++k) {
    if (g.mode() == GridMode::Radial) {
      const double rho = g.radius(k);
      Matrix hess = Matrix::Zero(g.n(), g.n());
      hess(0, 0) = d.second[k](0, 0);
      // cell-centered nodes keep rho > 0, so coth is finite
      const double angular = d.first[k][0] / std::tanh(rho);
      for (int a = 1; a < g.n(); ++a) hess(a, a) = angular;
      out.push_back(hess);
    } else {
      const ChartPoint p = g.chart_point(k);
      const Christoffel gamma = christoffel_sigma(p);
      Matrix hess = d.second[k];
      for (int c = 0; c < 2; ++c) hess -= gamma[c] * d.first[k][c];
      out.push_back(hess);
    }
  }
  return out;
}

double quadrature(const Grid& grid, std::span<const double> integrand) {
  const auto w = grid.quad_weights();
  double sum = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) sum += w[k] * integrand[k];
  return sum;
}

}  // namespace imcf
