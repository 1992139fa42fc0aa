#include "imcf/graph_geometry.hpp"

#include "imcf/errors.hpp"

#include <cmath>
#include <limits>

namespace imcf {

namespace {

double radicand(const GraphPointData& d, const Matrix& sigma_inv) {
  return 1.0 - d.du.dot(sigma_inv * d.du) / (d.u * d.u);
}

double checked_v(const GraphPointData& d, const Matrix& sigma_inv, double eps) {
  const double q = radicand(d, sigma_inv);
  if (!(q > eps)) {
    throw SpacelikeViolation("spacelike condition violated: 1 - u^-2|Du|^2 = " + std::to_string(q),
                             std::numeric_limits<double>::quiet_NaN(), -1, q);
  }
  return std::sqrt(q);
}

}  // namespace

double spacelike_factor(const GraphPointData& d, double eps) {
  return checked_v(d, metric_sigma(d.point).sigma_inv, eps);
}

InducedMetric induced_metric(const GraphPointData& d, double eps) {
  const MetricSample m = metric_sigma(d.point);
  const double v = checked_v(d, m.sigma_inv, eps);
  const double u2 = d.u * d.u;
  const Vector du_up = m.sigma_inv * d.du;
  InducedMetric out;
  out.g = u2 * m.sigma - d.du * d.du.transpose();
  out.g_inv = (m.sigma_inv + du_up * du_up.transpose() / (u2 * v * v)) / u2;
  // det g = u^{2n} v^2 det sigma
  out.area_element = std::pow(d.u, d.dim()) * v * m.sqrt_det_sigma;
  return out;
}

AmbientVector graph_normal(const GraphPointData& d, double eps) {
  const MetricSample m = metric_sigma(d.point);
  const double v = checked_v(d, m.sigma_inv, eps);
  const Vector du_up = m.sigma_inv * d.du;
  const auto tangents = chart_tangents(d.point);
  // d_r = x(y); u^-2 u^j d_j = u^-1 u^j d_j x
  Vector nu = chart_embed(d.point).components;
  for (int j = 0; j < d.dim(); ++j) nu += (du_up[j] / d.u) * tangents[j].components;
  return AmbientVector{-nu / v};
}

Matrix second_fundamental(const GraphPointData& d, double eps) {
  const MetricSample m = metric_sigma(d.point);
  const double v = checked_v(d, m.sigma_inv, eps);
  return -(2.0 / d.u * d.du * d.du.transpose() - d.hess_u - d.u * m.sigma) / v;
}

MeanCurvature mean_curvature(const GraphPointData& d, double eps) {
  const MetricSample m = metric_sigma(d.point);
  const double v = checked_v(d, m.sigma_inv, eps);
  const int n = d.dim();

  const Vector dphi = d.du / d.u;
  const Matrix hess_phi = d.hess_u / d.u - dphi * dphi.transpose();
  const Vector dphi_up = m.sigma_inv * dphi;
  const Matrix sigma_tilde = m.sigma_inv + dphi_up * dphi_up.transpose() / (v * v);

  MeanCurvature out;
  out.H = (n + (sigma_tilde.cwiseProduct(hess_phi)).sum()) / (d.u * v);

  const InducedMetric metric = induced_metric(d, eps);
  const Matrix h = second_fundamental(d, eps);
  out.shape = metric.g_inv * h;
  out.H_trace = out.shape.trace();
  out.a_norm_sq = (out.shape.cwiseProduct(out.shape.transpose())).sum();
  return out;
}

double support_function(const GraphPointData& d, double eps) { return d.u / spacelike_factor(d, eps); }

GeometryFields compute_geometry(const GraphPointData& d, double eps) {
  GeometryFields f;
  f.v = spacelike_factor(d, eps);
  const InducedMetric metric = induced_metric(d, eps);
  f.g = metric.g;
  f.g_inv = metric.g_inv;
  f.area_element = metric.area_element;
  f.h = second_fundamental(d, eps);
  const MeanCurvature mc = mean_curvature(d, eps);
  f.shape = mc.shape;
  f.H = mc.H;
  f.a_norm_sq = mc.a_norm_sq;
  f.w = d.u / f.v;
  return f;
}

AmbientVector graph_position(const GraphPointData& d) {
  return AmbientVector{d.u * chart_embed(d.point).components};
}

std::vector<AmbientVector> graph_tangents(const GraphPointData& d) {
  const Vector x = chart_embed(d.point).components;
  auto tangents = chart_tangents(d.point);
  for (int i = 0; i < d.dim(); ++i) {
    tangents[i].components = d.u * tangents[i].components + d.du[i] * x;
  }
  return tangents;
}

AmbientVector pushed_chart_vector(const GraphPointData& d, const Vector& mu) {
  const auto tangents = chart_tangents(d.point);
  Vector out = Vector::Zero(d.dim() + 1);
  for (int i = 0; i < d.dim(); ++i) out += d.u * mu[i] * tangents[i].components;
  return AmbientVector{out};
}

double radial_trace_curvature(double u, double u_r, double u_rr, double coth_rho, int n) {
  // sigma-orthonormal frame (e_rho, angular): g and h are diagonal.
  const double v = std::sqrt(1.0 - u_r * u_r / (u * u));
  const double h_rr = -(2.0 * u_r * u_r / u - u_rr - u) / v;
  const double g_rr = u * u - u_r * u_r;
  const double h_aa = (u + u_r * coth_rho) / v;
  const double g_aa = u * u;
  return h_rr / g_rr + (n - 1) * h_aa / g_aa;
}

CurvatureTerms chart2_terms(double u, const double du[2], const double hess[3], const double y[2]) {
  const double p1 = du[0] / u;
  const double p2 = du[1] / u;
  const double p11 = hess[0] / u - p1 * p1;
  const double p12 = hess[1] / u - p1 * p2;
  const double p22 = hess[2] / u - p2 * p2;
  // sigma^ij = delta_ij + y_i y_j
  const double yp = y[0] * p1 + y[1] * p2;
  const double q1 = p1 + y[0] * yp;
  const double q2 = p2 + y[1] * yp;
  CurvatureTerms t;
  t.grad_phi_sq = p1 * q1 + p2 * q2;
  t.v_sq = 1.0 - t.grad_phi_sq;
  const double s11 = 1.0 + y[0] * y[0] + q1 * q1 / t.v_sq;
  const double s12 = y[0] * y[1] + q1 * q2 / t.v_sq;
  const double s22 = 1.0 + y[1] * y[1] + q2 * q2 / t.v_sq;
  t.den = 2.0 + s11 * p11 + 2.0 * s12 * p12 + s22 * p22;
  return t;
}

double chart2_trace_curvature(double u, const double du[2], const double hess[3], const double y[2]) {
  const double s2 = 1.0 + y[0] * y[0] + y[1] * y[1];
  const double sig11 = 1.0 - y[0] * y[0] / s2;
  const double sig12 = -y[0] * y[1] / s2;
  const double sig22 = 1.0 - y[1] * y[1] / s2;
  const double yu = y[0] * du[0] + y[1] * du[1];
  const double up1 = du[0] + y[0] * yu;
  const double up2 = du[1] + y[1] * yu;
  const double u2 = u * u;
  const double v_sq = 1.0 - (du[0] * up1 + du[1] * up2) / u2;
  const double v = std::sqrt(v_sq);
  // g^ij from the closed form
  const double gi11 = (1.0 + y[0] * y[0] + up1 * up1 / (u2 * v_sq)) / u2;
  const double gi12 = (y[0] * y[1] + up1 * up2 / (u2 * v_sq)) / u2;
  const double gi22 = (1.0 + y[1] * y[1] + up2 * up2 / (u2 * v_sq)) / u2;
  const double h11 = -(2.0 * du[0] * du[0] / u - hess[0] - u * sig11) / v;
  const double h12 = -(2.0 * du[0] * du[1] / u - hess[1] - u * sig12) / v;
  const double h22 = -(2.0 * du[1] * du[1] / u - hess[2] - u * sig22) / v;
  return gi11 * h11 + 2.0 * gi12 * h12 + gi22 * h22;
}

namespace {

// u^-2 |Du|^2_sigma at interior node k from stencil derivatives.
double gradient_ratio(const Field& u, int k) {
  const Grid& g = u.grid();
  const int i = k / g.cells_theta();
  const double uk = u.interior(k);
  if (g.mode() == GridMode::Radial) {
    const double ur = radial_partials(u.values(), g, i).d1;
    return ur * ur / (uk * uk);
  }
  const int j = k % g.cells_theta();
  const double theta = g.angle(j);
  const double c = std::cos(theta), s = std::sin(theta), r = g.radius(i);
  const auto q = polar_to_chart(polar_partials(u.values(), g, i, j), r, c, s);
  const double yu = r * c * q.d1 + r * s * q.d2;
  return (q.d1 * q.d1 + q.d2 * q.d2 + yu * yu) / (uk * uk);
}

}  // namespace

std::vector<double> spacelike_field(const Field& u) {
  const Grid& g = u.grid();
  std::vector<double> v(g.interior_size());
  for (int k = 0; k < g.interior_size(); ++k) v[k] = std::sqrt(std::max(0.0, 1.0 - gradient_ratio(u, k)));
  return v;
}

double total_area(const Field& u, double eps) {
  const Grid& g = u.grid();
  std::vector<double> integrand(g.interior_size());
  for (int k = 0; k < g.interior_size(); ++k) {
    const double q = 1.0 - gradient_ratio(u, k);
    if (!(q > eps)) {
      throw SpacelikeViolation("spacelike condition violated in area quadrature",
                               std::numeric_limits<double>::quiet_NaN(), k, q);
    }
    integrand[k] = std::pow(u.interior(k), g.n()) * std::sqrt(q);
  }
  return quadrature(g, integrand);
}

}  // namespace imcf
