#include "imcf/geometry_checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

namespace imcf::checks {

namespace {

Vector shifted(const Vector& y, int i, double h) {
  Vector out = y;
  out[i] += h;
  return out;
}

AmbientVector ambient(const Vector& v) { return AmbientVector{v}; }

// Tracks the worst violation over samples.
struct Worst {
  double value = 0.0;
  void add(double v) { value = std::max(value, std::isnan(v) ? INFINITY : v); }
};

CheckResult finish(const std::string& name, double worst, double tol, const std::string& detail = {}) {
  CheckResult r;
  r.name = name;
  r.worst_violation = worst;
  r.verdict = worst <= tol ? Verdict::Pass : Verdict::Fail;
  char buf[96];
  std::snprintf(buf, sizeof buf, "tol=%.1e", tol);
  r.detail = detail.empty() ? buf : std::string(buf) + " " + detail;
  return r;
}

std::vector<Vector> fd_tangents(const QuadraticGraph& graph, const Vector& y, double h) {
  std::vector<Vector> out;
  for (int i = 0; i < y.size(); ++i) {
    out.push_back((graph.embed(shifted(y, i, h)) - graph.embed(shifted(y, i, -h))) / (2.0 * h));
  }
  return out;
}

}  // namespace

Matrix fd_sigma(const ChartPoint& p, double h) {
  const int n = p.dim();
  std::vector<AmbientVector> d(n);
  for (int i = 0; i < n; ++i) {
    const Vector plus = chart_embed(ChartPoint{shifted(p.y, i, h)}).components;
    const Vector minus = chart_embed(ChartPoint{shifted(p.y, i, -h)}).components;
    d[i] = ambient((plus - minus) / (2.0 * h));
  }
  Matrix s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = minkowski_inner(d[i], d[j]);
  return s;
}

Christoffel fd_christoffel(const ChartPoint& p, double h) {
  const int n = p.dim();
  std::vector<Matrix> dsigma(n);  // dsigma[l] = d_l sigma
  for (int l = 0; l < n; ++l) {
    dsigma[l] = (metric_sigma(ChartPoint{shifted(p.y, l, h)}).sigma -
                 metric_sigma(ChartPoint{shifted(p.y, l, -h)}).sigma) /
                (2.0 * h);
  }
  const Matrix inv = metric_sigma(p).sigma.inverse();
  Christoffel gamma(n, Matrix::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double sum = 0.0;
        for (int l = 0; l < n; ++l) {
          sum += inv(k, l) * (dsigma[i](j, l) + dsigma[j](i, l) - dsigma[l](i, j));
        }
        gamma[k](i, j) = 0.5 * sum;
      }
  return gamma;
}

std::vector<Matrix> fd_riemann(const ChartPoint& p, double h) {
  const int n = p.dim();
  const Christoffel g0 = fd_christoffel(p);
  std::vector<Christoffel> dg(n);  // dg[a][l](j,k) = d_a Gamma^l_jk
  for (int a = 0; a < n; ++a) {
    const Christoffel plus = fd_christoffel(ChartPoint{shifted(p.y, a, h)});
    const Christoffel minus = fd_christoffel(ChartPoint{shifted(p.y, a, -h)});
    dg[a].resize(n);
    for (int l = 0; l < n; ++l) dg[a][l] = (plus[l] - minus[l]) / (2.0 * h);
  }
  const Matrix sigma = metric_sigma(p).sigma;
  std::vector<Matrix> out(n * n, Matrix::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        // R^q_ijl = d_i G^q_jl - d_j G^q_il + G^q_im G^m_jl - G^q_jm G^m_il
        Vector r_up(n);
        for (int q = 0; q < n; ++q) {
          double val = dg[i][q](j, l) - dg[j][q](i, l);
          for (int m = 0; m < n; ++m) val += g0[q](i, m) * g0[m](j, l) - g0[q](j, m) * g0[m](i, l);
          r_up[q] = val;
        }
        for (int m = 0; m < n; ++m) out[i * n + j](m, l) = sigma.row(m).dot(r_up);
      }
  return out;
}

double QuadraticGraph::value(const Vector& y) const { return a + b.dot(y) + 0.5 * y.dot(C * y); }

GraphPointData QuadraticGraph::at(const ChartPoint& p) const {
  GraphPointData d;
  d.point = p;
  d.u = value(p.y);
  d.du = b + C * p.y;
  const Christoffel gamma = christoffel_sigma(p);
  d.hess_u = C;
  for (int k = 0; k < p.dim(); ++k) d.hess_u -= gamma[k] * d.du[k];
  return d;
}

Vector QuadraticGraph::embed(const Vector& y) const { return value(y) * chart_embed(ChartPoint{y}).components; }

ChartPoint random_point(std::mt19937_64& rng, int n, double radius) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  Vector dir(n);
  for (int i = 0; i < n; ++i) dir[i] = normal(rng);
  dir.normalize();
  return ChartPoint{radius * std::pow(unit(rng), 1.0 / n) * dir};
}

QuadraticGraph random_graph(std::mt19937_64& rng, const ChartPoint& p, double max_grad) {
  const int n = p.dim();
  std::uniform_real_distribution<double> level(1.5, 2.5), coef(-0.3, 0.3);
  QuadraticGraph g;
  g.a = level(rng);
  g.b = Vector(n);
  g.C = Matrix(n, n);
  for (int i = 0; i < n; ++i) g.b[i] = coef(rng);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) g.C(i, j) = g.C(j, i) = coef(rng);
  const Matrix sigma_inv = metric_sigma(p).sigma_inv;
  for (int iter = 0; iter < 50; ++iter) {
    const GraphPointData d = g.at(p);
    const double grad = std::sqrt(d.du.dot(sigma_inv * d.du)) / d.u;
    if (grad <= max_grad) break;
    g.b *= 0.8;
    g.C *= 0.8;
  }
  return g;
}

CheckResult sigma_pullback(int samples, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Worst worst;
  for (int s = 0; s < samples; ++s) {
    const ChartPoint p = random_point(rng, n, 3.0);
    worst.add((metric_sigma(p).sigma - fd_sigma(p)).cwiseAbs().maxCoeff());
  }
  return finish("sigma_pullback", worst.value, 1e-8);
}

CheckResult christoffel_oracle(int samples, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Worst worst;
  for (int s = 0; s < samples; ++s) {
    const ChartPoint p = random_point(rng, n, 3.0);
    const Christoffel closed = christoffel_sigma(p), fd = fd_christoffel(p);
    for (int k = 0; k < n; ++k) {
      worst.add((closed[k] - fd[k]).cwiseAbs().maxCoeff());
      worst.add((closed[k] - closed[k].transpose()).cwiseAbs().maxCoeff());
    }
  }
  return finish("christoffel_oracle", worst.value, 1e-6);
}

CheckResult metric_compatibility(int samples, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double h = 1e-5;
  Worst worst;
  for (int s = 0; s < samples; ++s) {
    const ChartPoint p = random_point(rng, n, 3.0);
    const Matrix sigma = metric_sigma(p).sigma;
    const Christoffel gamma = christoffel_sigma(p);
    for (int k = 0; k < n; ++k) {
      const Matrix d = (metric_sigma(ChartPoint{shifted(p.y, k, h)}).sigma -
                        metric_sigma(ChartPoint{shifted(p.y, k, -h)}).sigma) /
                       (2.0 * h);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double r = d(i, j);
          for (int l = 0; l < n; ++l) r -= gamma[l](k, i) * sigma(l, j) + gamma[l](k, j) * sigma(i, l);
          worst.add(std::abs(r));
        }
    }
  }
  return finish("metric_compatibility", worst.value, 1e-6);
}

CheckResult curvature_identity(int samples, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Worst worst;
  for (int s = 0; s < samples; ++s) {
    const ChartPoint p = random_point(rng, n, 2.0);
    const Matrix sigma = metric_sigma(p).sigma;
    const auto R = fd_riemann(p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m)
          for (int l = 0; l < n; ++l) {
            const double expected = sigma(i, l) * sigma(j, m) - sigma(i, m) * sigma(j, l);
            worst.add(std::abs(R[i * n + j](m, l) - expected));
          }
  }
  return finish("curvature_identity", worst.value, 1e-4);
}

CheckResult embedding_unit(int samples, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Worst worst;
  for (int s = 0; s < samples; ++s) {
    const AmbientVector x = chart_embed(random_point(rng, n, 3.0));
    worst.add(std::abs(minkowski_inner(x, x) + 1.0));
    if (!(x.time_component() >= 1.0)) worst.add(INFINITY);
  }
  return finish("embedding_unit", worst.value, 1e-12);
}

namespace {

template <class PerSample>
CheckResult graph_suite(const std::string& name, int samples, int n, std::uint64_t seed, double tol,
                        PerSample&& per_sample) {
  std::mt19937_64 rng(seed);
  Worst worst;
  for (int s = 0; s < samples; ++s) {
    const ChartPoint p = random_point(rng, n, 1.5);
    const QuadraticGraph graph = random_graph(rng, p, 0.5);
    worst.add(per_sample(graph, graph.at(p)));
  }
  return finish(name, worst.value, tol);
}

}  // namespace

CheckResult metric_embedding(int samples, int n, std::uint64_t seed) {
  return graph_suite("metric_embedding", samples, n, seed, 1e-6, [](const QuadraticGraph& g, const GraphPointData& d) {
    const auto X = fd_tangents(g, d.point.y, 1e-4);
    const Matrix metric = induced_metric(d).g;
    double w = 0.0;
    for (int i = 0; i < d.dim(); ++i)
      for (int j = 0; j < d.dim(); ++j) {
        w = std::max(w, std::abs(metric(i, j) - minkowski_inner(ambient(X[i]), ambient(X[j]))));
      }
    return w;
  });
}

CheckResult metric_inverse(int samples, int n, std::uint64_t seed) {
  return graph_suite("metric_inverse", samples, n, seed, 1e-10, [](const QuadraticGraph&, const GraphPointData& d) {
    const InducedMetric m = induced_metric(d);
    return (m.g * m.g_inv - Matrix::Identity(d.dim(), d.dim())).cwiseAbs().maxCoeff();
  });
}

CheckResult normal_embedding(int samples, int n, std::uint64_t seed) {
  // unit length is exact algebra (1e-10); orthogonality carries FD error (1e-6)
  return graph_suite("normal_embedding", samples, n, seed, 1e-6, [](const QuadraticGraph& g, const GraphPointData& d) {
    const AmbientVector nu = graph_normal(d);
    double w = std::abs(minkowski_inner(nu, nu) + 1.0) * 1e4;
    for (const Vector& X : fd_tangents(g, d.point.y, 1e-4)) w = std::max(w, std::abs(minkowski_inner(nu, ambient(X))));
    // past-directed: <nu, x(y)>_L > 0
    if (!(minkowski_inner(nu, chart_embed(d.point)) > 0.0)) w = INFINITY;
    return w;
  });
}

CheckResult second_fundamental_embedding(int samples, int n, std::uint64_t seed) {
  return graph_suite("h_embedding", samples, n, seed, 1e-5, [](const QuadraticGraph& g, const GraphPointData& d) {
    const double h = 1e-4;
    const Vector& y = d.point.y;
    const AmbientVector nu = graph_normal(d);
    const Matrix hij = second_fundamental(d);
    double w = 0.0;
    for (int i = 0; i < d.dim(); ++i)
      for (int j = 0; j < d.dim(); ++j) {
        Vector xij;
        if (i == j) {
          xij = (g.embed(shifted(y, i, h)) - 2.0 * g.embed(y) + g.embed(shifted(y, i, -h))) / (h * h);
        } else {
          xij = (g.embed(shifted(shifted(y, i, h), j, h)) - g.embed(shifted(shifted(y, i, h), j, -h)) -
                 g.embed(shifted(shifted(y, i, -h), j, h)) + g.embed(shifted(shifted(y, i, -h), j, -h))) /
                (4.0 * h * h);
        }
        // tangential Gamma-corrections drop out against nu
        w = std::max(w, std::abs(hij(i, j) - minkowski_inner(ambient(xij), nu)));
        w = std::max(w, std::abs(hij(i, j) - hij(j, i)));
      }
    return w;
  });
}

CheckResult support_embedding(int samples, int n, std::uint64_t seed) {
  return graph_suite("support_embedding", samples, n, seed, 1e-8, [](const QuadraticGraph&, const GraphPointData& d) {
    return std::abs(support_function(d) - minkowski_inner(graph_position(d), graph_normal(d)));
  });
}

CheckResult route_consistency(int samples, int n, std::uint64_t seed) {
  return graph_suite("route_consistency", samples, n, seed, 1e-10, [](const QuadraticGraph&, const GraphPointData& d) {
    const MeanCurvature mc = mean_curvature(d);
    return std::abs(mc.H - mc.H_trace) / std::max(1.0, std::abs(mc.H));
  });
}

CheckResult cauchy_schwarz(int samples, int n, std::uint64_t seed) {
  return graph_suite("cauchy_schwarz", samples, n, seed, 1e-10, [](const QuadraticGraph&, const GraphPointData& d) {
    const MeanCurvature mc = mean_curvature(d);
    return std::max(0.0, mc.H * mc.H / d.dim() - mc.a_norm_sq);
  });
}

CheckResult neumann_equivalence(int samples, double rho_max, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi), level(1.0, 2.0), slope(-0.5, 0.5);
  Worst worst;
  bool control_ok = true;
  const double r = std::sinh(rho_max);
  for (int s = 0; s < samples; ++s) {
    const double th = angle(rng);
    Vector omega(2), tangent(2);
    omega << std::cos(th), std::sin(th);
    tangent << -std::sin(th), std::cos(th);
    GraphPointData d;
    d.point = ChartPoint{r * omega};
    d.u = level(rng);
    d.hess_u = Matrix::Zero(2, 2);
    const Matrix sigma = metric_sigma(d.point).sigma;
    // sigma-unit outward conormal of the circle |y| = r is radial
    const Vector mu = omega / std::sqrt(omega.dot(sigma * omega));
    worst.add(std::abs(mu.dot(sigma * tangent)));
    // zero conormal derivative: Du along the boundary tangent only
    d.du = slope(rng) * d.u * tangent;
    worst.add(std::abs(minkowski_inner(pushed_chart_vector(d, mu), graph_normal(d))));
    // negative control: a radial slope must show up in <mu^, nu>_L
    d.du = 0.3 * d.u * omega;
    if (std::abs(minkowski_inner(pushed_chart_vector(d, mu), graph_normal(d))) < 1e-3) control_ok = false;
  }
  CheckResult res = finish("neumann_equivalence", worst.value, 1e-6);
  if (!control_ok) {
    res.verdict = Verdict::Fail;
    res.detail += " negative control not detected";
  }
  return res;
}

CheckResult stencil_order(double* observed_order) {
  // u = 1.2 + 0.1 |y|^2 at y = (0.3, 0.2); exact chart partials are
  // d_i u = 0.2 y_i, d_ij u = 0.2 delta_ij.
  Vector y0(2);
  y0 << 0.3, 0.2;
  auto u = [](const Vector& y) { return 1.2 + 0.1 * y.squaredNorm(); };
  auto data_with = [&](const Vector& du, const Matrix& d2) {
    GraphPointData d;
    d.point = ChartPoint{y0};
    d.u = u(y0);
    d.du = du;
    const Christoffel gamma = christoffel_sigma(d.point);
    d.hess_u = d2;
    for (int k = 0; k < 2; ++k) d.hess_u -= gamma[k] * du[k];
    return d;
  };
  const double H_exact = mean_curvature(data_with(0.2 * y0, 0.2 * Matrix::Identity(2, 2))).H;

  // add a cubic so the central stencils carry a genuine h^2 error
  auto f = [&](const Vector& y) { return u(y) + 0.05 * y[0] * y[0] * y[0] * y[1]; };
  auto exact_extra = [&](const Vector& y, Vector& du, Matrix& d2) {
    du[0] += 0.15 * y[0] * y[0] * y[1];
    du[1] += 0.05 * y[0] * y[0] * y[0];
    d2(0, 0) += 0.3 * y[0] * y[1];
    d2(0, 1) += 0.15 * y[0] * y[0];
    d2(1, 0) += 0.15 * y[0] * y[0];
  };
  Vector du_ex = 0.2 * y0;
  Matrix d2_ex = 0.2 * Matrix::Identity(2, 2);
  exact_extra(y0, du_ex, d2_ex);
  GraphPointData exact = data_with(du_ex, d2_ex);
  exact.u = f(y0);
  const double H_ref = mean_curvature(exact).H;

  auto H_fd = [&](double h) {
    Vector du(2);
    Matrix d2(2, 2);
    for (int i = 0; i < 2; ++i) {
      du[i] = (f(shifted(y0, i, h)) - f(shifted(y0, i, -h))) / (2.0 * h);
      d2(i, i) = (f(shifted(y0, i, h)) - 2.0 * f(y0) + f(shifted(y0, i, -h))) / (h * h);
    }
    d2(0, 1) = d2(1, 0) = (f(shifted(shifted(y0, 0, h), 1, h)) - f(shifted(shifted(y0, 0, h), 1, -h)) -
                           f(shifted(shifted(y0, 0, -h), 1, h)) + f(shifted(shifted(y0, 0, -h), 1, -h))) /
                          (4.0 * h * h);
    GraphPointData d = data_with(du, d2);
    d.u = f(y0);
    return mean_curvature(d).H;
  };
  const double e1 = std::abs(H_fd(0.02) - H_ref);
  const double e2 = std::abs(H_fd(0.01) - H_ref);
  const double order = std::log2(e1 / e2);
  if (observed_order) *observed_order = order;
  char buf[128];
  std::snprintf(buf, sizeof buf, "order=%.3f H(quadratic)=%.12g", order, H_exact);
  return finish("stencil_order", std::max(0.0, 1.9 - order), 0.0, buf);
}

InvariantReport run_all() {
  InvariantReport rep;
  rep.checks = {embedding_unit(),     sigma_pullback(),       christoffel_oracle(),
                metric_compatibility(), curvature_identity(), metric_embedding(),
                metric_inverse(),     normal_embedding(),     second_fundamental_embedding(),
                support_embedding(),  route_consistency(),    cauchy_schwarz(),
                neumann_equivalence(), stencil_order()};
  for (int n : {3}) {
    for (CheckResult r : {sigma_pullback(200, n), christoffel_oracle(200, n), curvature_identity(20, n),
                          metric_embedding(200, n), normal_embedding(200, n), second_fundamental_embedding(200, n),
                          route_consistency(200, n)}) {
      r.name += "_n" + std::to_string(n);
      rep.checks.push_back(r);
    }
  }
  return rep;
}

}  // namespace imcf::checks
