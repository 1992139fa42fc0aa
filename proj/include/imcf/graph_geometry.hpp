#pragma once

// Pointwise geometry of the spacelike graph X = u(y) x(y) over a piece of
// H^n(1). Derivatives of u are covariant with respect to sigma.

#include "imcf/base_geometry.hpp"
#include "imcf/discretization.hpp"

#include <vector>

namespace imcf {

inline constexpr double kDefaultSpacelikeEps = 1e-10;

struct GraphPointData {
  double u = 1.0;
  Vector du;      // u_i
  Matrix hess_u;  // u_ij
  ChartPoint point;

  int dim() const { return point.dim(); }
};

struct InducedMetric {
  Matrix g;
  Matrix g_inv;
  double area_element = 0.0;  // sqrt(det g) in chart coordinates
};

struct MeanCurvature {
  double H = 0.0;        // (n + sigma~^ij phi_ij) / (u v)
  double H_trace = 0.0;  // trace(g^-1 h), the second route
  Matrix shape;          // h^i_j
  double a_norm_sq = 0.0;
};

struct GeometryFields {
  double v = 1.0;
  Matrix g, g_inv, h, shape;
  double H = 0.0;
  double a_norm_sq = 0.0;
  double w = 0.0;
  double area_element = 0.0;
};

/// v = sqrt(1 - u^-2 |Du|^2_sigma). Throws SpacelikeViolation when the
/// radicand is <= eps.
double spacelike_factor(const GraphPointData& d, double eps = kDefaultSpacelikeEps);

/// g_ij = u^2 sigma_ij - u_i u_j, g^ij = u^-2 (sigma^ij + u^i u^j / (u^2 v^2)).
InducedMetric induced_metric(const GraphPointData& d, double eps = kDefaultSpacelikeEps);

/// Past-directed timelike unit normal -(1/v)(d_r + u^-2 u^j d_j), in ambient
/// components.
AmbientVector graph_normal(const GraphPointData& d, double eps = kDefaultSpacelikeEps);

/// h_ij = -(1/v)(2 u_i u_j / u - u_ij - u sigma_ij).
Matrix second_fundamental(const GraphPointData& d, double eps = kDefaultSpacelikeEps);

MeanCurvature mean_curvature(const GraphPointData& d, double eps = kDefaultSpacelikeEps);

/// w = <X, nu>_L = u / v.
double support_function(const GraphPointData& d, double eps = kDefaultSpacelikeEps);

GeometryFields compute_geometry(const GraphPointData& d, double eps = kDefaultSpacelikeEps);

/// X = u x(y).
AmbientVector graph_position(const GraphPointData& d);
/// X_i = d_i + u_i d_r, with d_i = u d_i x and d_r = x(y).
std::vector<AmbientVector> graph_tangents(const GraphPointData& d);
/// mu^i d_i at X: the chart direction mu pushed to the level set r = u.
AmbientVector pushed_chart_vector(const GraphPointData& d, const Vector& mu);

// Reductions used by the flow solvers. Both return the phi = log u form;
// the *_trace_curvature functions evaluate H through trace(g^-1 h) instead.
struct CurvatureTerms {
  double v_sq = 1.0;         // 1 - |D phi|^2
  double den = 0.0;          // n + sigma~^ij phi_ij = u v H
  double grad_phi_sq = 0.0;  // |D phi|^2_sigma
};

/// Rotationally symmetric graph: den = n + phi'' / v^2 + (n-1) coth(rho) phi'.
inline CurvatureTerms radial_terms(double u, double u_r, double u_rr, double coth_rho, int n) {
  const double phi_r = u_r / u;
  const double phi_rr = u_rr / u - phi_r * phi_r;
  CurvatureTerms t;
  t.grad_phi_sq = phi_r * phi_r;
  t.v_sq = 1.0 - t.grad_phi_sq;
  t.den = n + phi_rr / t.v_sq + (n - 1) * coth_rho * phi_r;
  return t;
}
double radial_trace_curvature(double u, double u_r, double u_rr, double coth_rho, int n);

/// n = 2 chart form; du, hess are covariant, y the chart position.
CurvatureTerms chart2_terms(double u, const double du[2], const double hess[3], const double y[2]);
double chart2_trace_curvature(double u, const double du[2], const double hess[3], const double y[2]);

/// Area of the graph of u over the cap: quadrature of u^n v. Ghosts of u
/// must be filled. Throws SpacelikeViolation.
double total_area(const Field& u, double eps = kDefaultSpacelikeEps);

/// Per-node v of a field (no guard; negative radicands give v = 0).
std::vector<double> spacelike_field(const Field& u);

}  // namespace imcf
