#include "imcf/flow_engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace imcf {

std::string to_string(FlowMode mode) { return mode == FlowMode::Raw ? "raw" : "rescaled"; }

namespace {

// Shortest text that reads back to the same double.
std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string InitialData::describe() const {
  if (kind == Kind::Constant) return "constant:" + format_double(r0);
  return "bump:" + format_double(r0) + "," + format_double(eps);
}

std::string CConvention::describe() const {
  return kind == Kind::Midpoint ? "midpoint" : "value:" + format_double(value);
}

void validate(const FlowConfig& cfg) {
  if (!(cfg.cfl_gamma > 0.0 && cfg.cfl_gamma <= 0.5)) throw ConfigError("cfl_gamma must lie in (0, 0.5]");
  if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) throw ConfigError("t_end must be positive");
  if (!(cfg.t_end_rescaled > 0.0)) throw ConfigError("t_end_rescaled must be positive");
  if (cfg.dt && !(*cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(cfg.u0.r0 > 0.0)) throw ConfigError("u0: R0 must be positive");
  if (cfg.u0.kind == InitialData::Kind::Bump && !(std::abs(cfg.u0.eps) < 1.0)) {
    throw ConfigError("u0: bump amplitude must satisfy |eps| < 1");
  }
  if (cfg.csv_every < 1) throw ConfigError("csv_every must be >= 1");
  if (cfg.snapshot_every < 0) throw ConfigError("snapshot_every must be >= 0");
  if (!(cfg.guards.eps_H > 0.0) || !(cfg.guards.eps_spacelike > 0.0)) {
    throw ConfigError("guard thresholds must be positive");
  }
  if (!(cfg.guards.route_tol >= 0.0)) throw ConfigError("route_tol must be >= 0");
  const MonitorTolerances& t = cfg.tolerances;
  for (double x : {t.area, t.conv, t.rescaled_area, t.r_inf, t.bracket, t.oracle, t.h_theta_ceiling}) {
    if (!(x >= 0.0)) throw ConfigError("tolerances must be >= 0");
  }
  for (double x : {t.c0, t.phidot, t.gradient}) {
    if (x < 0.0) throw ConfigError("tolerances must be >= 0");
  }
}

MonitorTolerances effective_tolerances(const FlowConfig& config, const Grid& grid) {
  MonitorTolerances tol = config.tolerances;
  const MonitorTolerances automatic = MonitorTolerances::for_spacing(grid.spacing());
  if (std::isnan(tol.c0)) tol.c0 = automatic.c0;
  if (std::isnan(tol.phidot)) tol.phidot = automatic.phidot;
  if (std::isnan(tol.gradient)) tol.gradient = automatic.gradient;
  return tol;
}

double theta(double t, double c, int n) { return std::exp(-t / n + c); }

Field initial_field(const InitialData& data, std::shared_ptr<const Grid> grid) {
  Field u(grid, data.r0);
  if (data.kind == InitialData::Kind::Bump) {
    const double rho_max = grid->rho_max();
    for (int k = 0; k < grid->interior_size(); ++k) {
      u.interior(k) = data.r0 * (1.0 + data.eps * std::cos(std::numbers::pi * grid->geodesic_radius(k) / rho_max));
    }
  }
  fill_neumann_ghosts(u);
  return u;
}

double resolve_c(const CConvention& conv, const Field& u0) {
  const double phi1 = std::log(u0.min_interior());
  const double phi2 = std::log(u0.max_interior());
  if (conv.kind == CConvention::Kind::Midpoint) return 0.5 * (phi1 + phi2);
  if (conv.value < phi1 || conv.value > phi2) {
    throw ConfigError("c_convention: c = " + format_double(conv.value) + " outside [inf phi0, sup phi0] = [" +
                      format_double(phi1) + ", " + format_double(phi2) + "]");
  }
  return conv.value;
}

GraphState initial_state(const FlowConfig& config) {
  validate(config);
  auto grid = build_grid(config.grid);
  Field u0 = initial_field(config.u0, grid);

  FlowOperator op(grid, config.guards);
  for (int k = 0; k < grid->interior_size(); ++k) {
    const NodeEval e = op.eval_node(u0.values(), k);
    if (!(e.terms.v_sq > config.guards.eps_spacelike)) {
      throw ConfigError("initial data " + config.u0.describe() + " is not spacelike at node " + std::to_string(k));
    }
    const double H = e.terms.den / (e.u * std::sqrt(e.terms.v_sq));
    if (!(H > config.guards.eps_H)) {
      throw ConfigError("initial data " + config.u0.describe() + " is not strictly mean convex at node " +
                        std::to_string(k));
    }
  }

  GraphState s;
  s.c = resolve_c(config.c_convention, u0);
  s.mode = config.flow;
  s.t = 0.0;
  if (config.flow == FlowMode::Rescaled) {
    const double scale = 1.0 / theta(0.0, s.c, grid->n());
    for (double& x : u0.values()) x *= scale;
  }
  s.u = std::move(u0);
  return s;
}

FlowOperator::FlowOperator(std::shared_ptr<const Grid> grid, GuardConfig guards)
    : grid_(std::move(grid)), guards_(guards) {
  const Grid& g = *grid_;
  h_local_sq_.resize(g.interior_size());
  if (g.mode() == GridMode::Radial) {
    coth_.resize(g.cells());
    // The pole row couples with weight n / h^2; shrink the effective mesh
    // size so the explicit bound holds for every n.
    const double h_sq = g.dr() * g.dr() * std::min(1.0, 2.0 / g.n());
    for (int i = 0; i < g.cells(); ++i) {
      coth_[i] = 1.0 / std::tanh(g.radius(i));
      h_local_sq_[i] = h_sq;
    }
  } else {
    const int m = g.cells_theta();
    cos_.resize(m);
    sin_.resize(m);
    for (int j = 0; j < m; ++j) {
      cos_[j] = std::cos(g.angle(j));
      sin_[j] = std::sin(g.angle(j));
    }
    const double angular = std::sqrt(2.0 * (1.0 - std::cos(g.dtheta())));
    for (int k = 0; k < g.interior_size(); ++k) {
      const double h = std::min(g.dr(), g.radius(k / m) * angular);
      h_local_sq_[k] = h * h;
    }
  }
}

NodeEval FlowOperator::eval_node(std::span<const double> values, int k) const {
  const Grid& g = *grid_;
  NodeEval e;
  e.u = values[g.interior_index(k)];
  if (g.mode() == GridMode::Radial) {
    const auto p = radial_partials(values, g, k);
    e.u_r = p.d1;
    e.u_rr = p.d2;
    e.coth = coth_[k];
    e.terms = radial_terms(e.u, e.u_r, e.u_rr, e.coth, g.n());
    return e;
  }
  const int m = g.cells_theta();
  const int i = k / m, j = k % m;
  const double r = g.radius(i);
  const auto q = polar_to_chart(polar_partials(values, g, i, j), r, cos_[j], sin_[j]);
  e.y[0] = r * cos_[j];
  e.y[1] = r * sin_[j];
  e.du[0] = q.d1;
  e.du[1] = q.d2;
  // u_ij = d_ij u - Gamma^k_ij u_k with Gamma^k_ij = -y_k sigma_ij
  const double yu = e.y[0] * q.d1 + e.y[1] * q.d2;
  const double s2 = 1.0 + r * r;
  e.hess[0] = q.d11 + yu * (1.0 - e.y[0] * e.y[0] / s2);
  e.hess[1] = q.d12 + yu * (-e.y[0] * e.y[1] / s2);
  e.hess[2] = q.d22 + yu * (1.0 - e.y[1] * e.y[1] / s2);
  e.terms = chart2_terms(e.u, e.du, e.hess, e.y);
  return e;
}

double FlowOperator::trace_curvature(const NodeEval& e) const {
  if (grid_->mode() == GridMode::Radial) return radial_trace_curvature(e.u, e.u_r, e.u_rr, e.coth, grid_->n());
  return chart2_trace_curvature(e.u, e.du, e.hess, e.y);
}

double FlowOperator::stiffness(const NodeEval& e, int k) const {
  const double scale = e.terms.v_sq / (e.terms.den * e.terms.den);
  double lambda = 0.0;
  if (grid_->mode() == GridMode::Radial) {
    lambda = 1.0 / e.terms.v_sq;  // sigma~^{rho rho}
  } else {
    const double p1 = e.du[0] / e.u, p2 = e.du[1] / e.u;
    const double yp = e.y[0] * p1 + e.y[1] * p2;
    const double q1 = p1 + e.y[0] * yp, q2 = p2 + e.y[1] * yp;
    const double a = 1.0 + e.y[0] * e.y[0] + q1 * q1 / e.terms.v_sq;
    const double b = e.y[0] * e.y[1] + q1 * q2 / e.terms.v_sq;
    const double d = 1.0 + e.y[1] * e.y[1] + q2 * q2 / e.terms.v_sq;
    lambda = 0.5 * (a + d) + std::sqrt(0.25 * (a - d) * (a - d) + b * b);
  }
  return scale * lambda / h_local_sq_[k];
}

double FlowOperator::evaluate(const Field& u, FlowMode mode, double t, std::span<double> out, bool check_routes,
                              double cfl_gamma) const {
  const Grid& g = *grid_;
  const int n = g.n();
  if (g.mode() == GridMode::Radial) return evaluate_radial(u, mode, t, out, check_routes, cfl_gamma);
  double max_stiffness = 0.0;
  for (int k = 0; k < g.interior_size(); ++k) {
    const NodeEval e = eval_node(u.values(), k);
    if (!(e.u > 0.0) || !(e.terms.v_sq > guards_.eps_spacelike)) {
      throw SpacelikeViolation("spacelike guard tripped at t = " + format_double(t) + ", node " +
                                   std::to_string(k) + ": 1 - |Dphi|^2 = " + format_double(e.terms.v_sq),
                               t, k, e.terms.v_sq);
    }
    const double v = std::sqrt(e.terms.v_sq);
    const double H = e.terms.den / (e.u * v);
    if (!(H > guards_.eps_H)) {
      throw MeanConvexityLoss("mean convexity guard tripped at t = " + format_double(t) + ", node " +
                                  std::to_string(k) + ": H = " + format_double(H),
                              t, k, H);
    }
    // phi-form: u_t = u phi_t = -u v^2 / den
    double rate = -e.u * e.terms.v_sq / e.terms.den;
    if (check_routes) {
      const double u_form = -v / trace_curvature(e);
      if (!(std::abs(u_form - rate) <= guards_.route_tol * std::max(1.0, std::abs(rate)))) {
        throw MonitorFailure("u-form and phi-form rates disagree at t = " + format_double(t) + ", node " +
                             std::to_string(k) + ": " + format_double(u_form) + " vs " + format_double(rate));
      }
    }
    if (mode == FlowMode::Rescaled) rate += e.u / n;
    out[k] = rate;
    if (cfl_gamma > 0.0) max_stiffness = std::max(max_stiffness, stiffness(e, k));
  }
  return cfl_gamma > 0.0 ? cfl_gamma / max_stiffness : 0.0;
}

double FlowOperator::evaluate_radial(const Field& u, FlowMode mode, double t, std::span<double> out,
                                     bool check_routes, double cfl_gamma) const {
  // Same arithmetic as eval_node + radial_terms, unrolled for the hot loop.
  const Grid& g = *grid_;
  const int n = g.n();
  const int cells = g.cells();
  const double* f = u.values().data() + 1;  // f[i] is cell i, f[-1] and f[cells] are ghosts
  const double inv_2h = 1.0 / (2.0 * g.dr());
  const double inv_h2 = 1.0 / (g.dr() * g.dr());
  double max_den_inv = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double u0 = f[i];
    const double u_r = (f[i + 1] - f[i - 1]) * inv_2h;
    const double u_rr = (f[i + 1] - 2.0 * u0 + f[i - 1]) * inv_h2;
    const CurvatureTerms terms = radial_terms(u0, u_r, u_rr, coth_[i], n);
    if (!(u0 > 0.0) || !(terms.v_sq > guards_.eps_spacelike)) {
      throw SpacelikeViolation("spacelike guard tripped at t = " + format_double(t) + ", node " +
                                   std::to_string(i) + ": 1 - |Dphi|^2 = " + format_double(terms.v_sq),
                               t, i, terms.v_sq);
    }
    // H = den / (u v) > eps_H without the square root on the common path
    if (!(terms.den > 0.0) || !(terms.den * terms.den > guards_.eps_H * guards_.eps_H * u0 * u0 * terms.v_sq)) {
      const double H = terms.den / (u0 * std::sqrt(terms.v_sq));
      throw MeanConvexityLoss("mean convexity guard tripped at t = " + format_double(t) + ", node " +
                                  std::to_string(i) + ": H = " + format_double(H),
                              t, i, H);
    }
    const double den_inv = 1.0 / terms.den;
    double rate = -u0 * terms.v_sq * den_inv;
    if (check_routes) {
      const double u_form = -std::sqrt(terms.v_sq) / radial_trace_curvature(u0, u_r, u_rr, coth_[i], n);
      if (!(std::abs(u_form - rate) <= guards_.route_tol * std::max(1.0, std::abs(rate)))) {
        throw MonitorFailure("u-form and phi-form rates disagree at t = " + format_double(t) + ", node " +
                             std::to_string(i) + ": " + format_double(u_form) + " vs " + format_double(rate));
      }
    }
    if (mode == FlowMode::Rescaled) rate += u0 / n;
    out[i] = rate;
    max_den_inv = std::max(max_den_inv, std::abs(den_inv));
  }
  // stiffness = (v^2 / den^2) (1 / v^2) / h_eff^2 = 1 / (den h_eff)^2
  if (!(cfl_gamma > 0.0)) return 0.0;
  return cfl_gamma * h_local_sq_[0] / (max_den_inv * max_den_inv);
}

std::vector<double> FlowOperator::phi_rate(const Field& u) const {
  std::vector<double> rate(grid_->interior_size());
  for (int k = 0; k < grid_->interior_size(); ++k) {
    const NodeEval e = eval_node(u.values(), k);
    rate[k] = -e.terms.v_sq / e.terms.den;
  }
  return rate;
}

namespace {

Field interior_rates(const GraphState& s, FlowMode mode, const GuardConfig& guards) {
  FlowOperator op(s.u.grid_ptr(), guards);
  Field out(s.u.grid_ptr());
  std::vector<double> rates(op.grid().interior_size());
  op.evaluate(s.u, mode, s.t, rates);
  for (int k = 0; k < op.grid().interior_size(); ++k) out.interior(k) = rates[k];
  return out;
}

// Shu-Osher SSP-RK3. eval(u_stage, t_stage, stage, out) fills interior
// rates and may return a step size on stage 0; dt_in <= 0 requests it.
template <class Eval>
double ssp_rk3(GraphState& s, double dt_in, double dt_cap, Eval&& eval) {
  const Grid& g = s.grid();
  const int m = g.interior_size();
  std::vector<double> k1(m), k2(m), k3(m);

  fill_neumann_ghosts(s.u);
  const double dt_cfl = eval(s.u, s.t, 0, std::span<double>(k1));
  const double dt = std::min(dt_in > 0.0 ? dt_in : dt_cfl, dt_cap);

  Field u1 = s.u;
  for (int k = 0; k < m; ++k) u1.interior(k) = s.u.interior(k) + dt * k1[k];
  fill_neumann_ghosts(u1);
  eval(u1, s.t + dt, 1, std::span<double>(k2));

  Field u2 = s.u;
  for (int k = 0; k < m; ++k) {
    u2.interior(k) = 0.75 * s.u.interior(k) + 0.25 * (u1.interior(k) + dt * k2[k]);
  }
  fill_neumann_ghosts(u2);
  eval(u2, s.t + 0.5 * dt, 2, std::span<double>(k3));

  for (int k = 0; k < m; ++k) {
    s.u.interior(k) = s.u.interior(k) / 3.0 + 2.0 / 3.0 * (u2.interior(k) + dt * k3[k]);
  }
  fill_neumann_ghosts(s.u);
  s.t += dt;
  return dt;
}

}  // namespace

Field rhs_raw(const GraphState& state, const GuardConfig& guards) {
  return interior_rates(state, FlowMode::Raw, guards);
}

Field rhs_rescaled(const GraphState& state, const GuardConfig& guards) {
  return interior_rates(state, FlowMode::Rescaled, guards);
}

Field rhs_raw_phi_form(const GraphState& state) {
  FlowOperator op(state.u.grid_ptr());
  const auto rate = op.phi_rate(state.u);
  Field out(state.u.grid_ptr());
  for (int k = 0; k < op.grid().interior_size(); ++k) out.interior(k) = state.u.interior(k) * rate[k];
  return out;
}

double cfl_dt(const GraphState& state, double gamma) {
  if (!(gamma > 0.0 && gamma <= 0.5)) throw ConfigError("cfl_gamma must lie in (0, 0.5]");
  FlowOperator op(state.u.grid_ptr());
  double max_stiffness = 0.0;
  for (int k = 0; k < op.grid().interior_size(); ++k) {
    max_stiffness = std::max(max_stiffness, op.stiffness(op.eval_node(state.u.values(), k), k));
  }
  return gamma / max_stiffness;
}

GraphState step(const GraphState& state, double dt, const Rhs& rhs) {
  GraphState s = state;
  ssp_rk3(s, dt, dt, [&](const Field& u, double t, int, std::span<double> out) {
    GraphState stage{t, u, s.c, s.mode};
    const Field r = rhs(stage);
    for (int k = 0; k < u.grid().interior_size(); ++k) out[k] = r.interior(k);
    return dt;
  });
  return s;
}

TrajectoryRecord make_record(const GraphState& s, const FlowOperator& op, double dt_used) {
  const Grid& g = op.grid();
  const int n = g.n();
  const double th = theta(s.t, s.c, n);
  // factor taking the stored field to raw u
  const double to_raw = s.mode == FlowMode::Raw ? 1.0 : th;

  TrajectoryRecord r;
  r.t = s.t;
  r.dt_used = dt_used;
  r.min_u = r.min_phidot = r.min_H_theta = INFINITY;
  r.max_u = r.max_phidot = r.max_H_theta = -INFINITY;
  double max_grad_sq = 0.0;
  std::vector<double> integrand(g.interior_size());
  for (int k = 0; k < g.interior_size(); ++k) {
    const NodeEval e = op.eval_node(s.u.values(), k);
    const double u_raw = e.u * to_raw;
    const double v = std::sqrt(std::max(0.0, e.terms.v_sq));
    const double phidot = -e.terms.v_sq / e.terms.den;
    // H Theta = den / (u v) Theta
    const double h_theta = e.terms.den / (u_raw * v) * th;
    r.min_u = std::min(r.min_u, u_raw);
    r.max_u = std::max(r.max_u, u_raw);
    r.min_phidot = std::min(r.min_phidot, phidot);
    r.max_phidot = std::max(r.max_phidot, phidot);
    r.min_H_theta = std::min(r.min_H_theta, h_theta);
    r.max_H_theta = std::max(r.max_H_theta, h_theta);
    max_grad_sq = std::max(max_grad_sq, e.terms.grad_phi_sq);
    integrand[k] = std::pow(e.u, n) * v;
  }
  r.min_phi = std::log(r.min_u);
  r.max_phi = std::log(r.max_u);
  r.max_grad_phi = std::sqrt(max_grad_sq);
  const double stored_area = quadrature(g, integrand);
  if (s.mode == FlowMode::Raw) {
    r.area = stored_area;
    r.rescaled_area = stored_area * std::pow(th, -n);
  } else {
    r.rescaled_area = stored_area;
    r.area = stored_area * std::pow(th, n);
  }
  r.osc_rescaled_u = (r.max_u - r.min_u) / th;
  return r;
}

EvolveResult evolve(const FlowConfig& config, const EvolveObserver& observer) {
  GraphState state = initial_state(config);
  const auto grid = state.u.grid_ptr();
  FlowOperator op(grid, config.guards);

  EvolveResult result;
  result.base_area = grid->cap_area();
  result.tolerances = effective_tolerances(config, *grid);

  auto emit = [&](double dt_used) {
    result.records.push_back(make_record(state, op, dt_used));
    if (observer.on_record) observer.on_record(result.records.back());
  };
  emit(0.0);
  if (observer.on_snapshot) observer.on_snapshot(state, 0);

  const double fixed_dt = config.dt.value_or(0.0);
  const double gamma = config.dt ? 0.0 : config.cfl_gamma;
  const double t_end = config.t_end;
  long steps = 0;
  while (t_end - state.t > 1e-12 * t_end) {
    const double dt = ssp_rk3(state, fixed_dt, t_end - state.t,
                              [&](const Field& u, double t, int stage, std::span<double> out) {
                                // stage 0 sees the accepted state: validate routes there
                                return op.evaluate(u, state.mode, t, out, stage == 0, stage == 0 ? gamma : 0.0);
                              });
    ++steps;
    if (steps % config.csv_every == 0) emit(dt);
    if (observer.on_snapshot && config.snapshot_every > 0 && steps % config.snapshot_every == 0) {
      observer.on_snapshot(state, steps);
    }
  }
  // the final state passes the guards too
  {
    std::vector<double> scratch(grid->interior_size());
    op.evaluate(state.u, state.mode, state.t, scratch, true);
  }
  if (observer.on_snapshot && !(config.snapshot_every > 0 && steps % config.snapshot_every == 0)) {
    observer.on_snapshot(state, steps);
  }

  result.steps = steps;
  result.report = record_checks(result.records, grid->n(), result.tolerances);
  result.final_state = std::move(state);
  return result;
}

}  // namespace imcf
