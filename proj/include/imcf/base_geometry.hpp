#pragma once

// Hyperbolic space H^n(1) = { x : <x,x>_L = -1, x_{n+1} > 0 } inside
// Lorentz-Minkowski space, described in the global graph chart
//   y in R^n  ->  x(y) = (y, sqrt(1 + |y|^2)).

#include <Eigen/Dense>

#include <vector>

namespace imcf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A point of H^n(1) in chart coordinates.
struct ChartPoint {
  Vector y;

  int dim() const { return static_cast<int>(y.size()); }
};

/// A vector of R^{n+1}_1; the last component is the timelike one.
struct AmbientVector {
  Vector components;

  int dim() const { return static_cast<int>(components.size()) - 1; }
  double time_component() const { return components[components.size() - 1]; }
};

enum class CausalType { Spacelike, Timelike, Null };

/// Christoffel symbols; gamma[k](i, j) = Gamma^k_ij.
using Christoffel = std::vector<Matrix>;

/// Metric of H^n(1) pulled back to the chart.
struct MetricSample {
  Matrix sigma;
  Matrix sigma_inv;
  double sqrt_det_sigma = 1.0;
  Christoffel gamma;  // empty unless filled by christoffel_sigma
};

/// <a,b>_L = sum_{k<=n} a_k b_k - a_{n+1} b_{n+1}. Throws
/// std::invalid_argument on a dimension mismatch.
double minkowski_inner(const AmbientVector& a, const AmbientVector& b);

/// Causal character of a vector; |<a,a>_L| <= tol counts as null.
CausalType causal_type(const AmbientVector& a, double tol = 1e-14);

AmbientVector chart_embed(const ChartPoint& p);

/// Chart tangent fields d_i x(y) as ambient vectors.
std::vector<AmbientVector> chart_tangents(const ChartPoint& p);

/// sigma_ij = delta_ij - y_i y_j / (1 + |y|^2), sigma^ij = delta_ij + y_i y_j,
/// det sigma = 1 / (1 + |y|^2).
MetricSample metric_sigma(const ChartPoint& p);

/// Levi-Civita symbols of sigma: Gamma^k_ij = -y_k sigma_ij.
Christoffel christoffel_sigma(const ChartPoint& p);

/// Geodesic distance on H^n(1) between two lifted points.
double hyperbolic_distance(const AmbientVector& a, const AmbientVector& b);

/// y = sinh(rho) * omega. omega must be a Euclidean unit vector
/// (std::invalid_argument otherwise) and rho >= 0.
ChartPoint polar_lift(double rho, const Vector& omega);

}  // namespace imcf
