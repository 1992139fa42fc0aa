#include "imcf/base_geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace imcf {

double minkowski_inner(const AmbientVector& a, const AmbientVector& b) {
  const auto size = a.components.size();
  if (size != b.components.size() || size < 2) {
    throw std::invalid_argument("minkowski_inner: dimension mismatch (" +
                                std::to_string(a.components.size()) + " vs " +
                                std::to_string(b.components.size()) + ")");
  }
  const auto n = size - 1;
  return a.components.head(n).dot(b.components.head(n)) - a.components[n] * b.components[n];
}

CausalType causal_type(const AmbientVector& a, double tol) {
  const double q = minkowski_inner(a, a);
  if (q > tol) return CausalType::Spacelike;
  if (q < -tol) return CausalType::Timelike;
  return CausalType::Null;
}

AmbientVector chart_embed(const ChartPoint& p) {
  const int n = p.dim();
  AmbientVector x{Vector(n + 1)};
  x.components.head(n) = p.y;
  x.components[n] = std::sqrt(1.0 + p.y.squaredNorm());
  return x;
}

std::vector<AmbientVector> chart_tangents(const ChartPoint& p) {
  const int n = p.dim();
  const double s = std::sqrt(1.0 + p.y.squaredNorm());
  std::vector<AmbientVector> out(n, AmbientVector{Vector::Zero(n + 1)});
  for (int i = 0; i < n; ++i) {
    out[i].components[i] = 1.0;
    out[i].components[n] = p.y[i] / s;
  }
  return out;
}

MetricSample metric_sigma(const ChartPoint& p) {
  const int n = p.dim();
  const double s2 = 1.0 + p.y.squaredNorm();
  MetricSample m;
  const Matrix yyT = p.y * p.y.transpose();
  m.sigma = Matrix::Identity(n, n) - yyT / s2;
  m.sigma_inv = Matrix::Identity(n, n) + yyT;
  m.sqrt_det_sigma = 1.0 / std::sqrt(s2);
  return m;
}

Christoffel christoffel_sigma(const ChartPoint& p) {
  const int n = p.dim();
  const Matrix sigma = metric_sigma(p).sigma;
  Christoffel gamma(n);
  for (int k = 0; k < n; ++k) gamma[k] = -p.y[k] * sigma;
  return gamma;
}

double hyperbolic_distance(const AmbientVector& a, const AmbientVector& b) {
  // -<a,b>_L >= 1 on the hyperboloid; clamp round-off below 1.
  return std::acosh(std::max(1.0, -minkowski_inner(a, b)));
}

ChartPoint polar_lift(double rho, const Vector& omega) {
  if (rho < 0.0) throw std::invalid_argument("polar_lift: negative geodesic radius");
  if (std::abs(omega.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("polar_lift: direction is not a unit vector");
  }
  return ChartPoint{std::sinh(rho) * omega};
}

}  // namespace imcf
