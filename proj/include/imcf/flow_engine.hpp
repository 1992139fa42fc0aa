#pragma once

// Time integration of inverse mean curvature flow for radial graphs over a
// geodesic cap of H^n(1) with zero Neumann data:
//
//   raw       du/dt = -v / H
//   rescaled  du~/dt = -v / H~ + u~ / n,   u~ = u / Theta,  Theta = exp(-t/n + c)
//
// Equivalently dphi/dt = -(1 - |Dphi|^2) / (n + sigma~^ij phi_ij) with
// phi = log u. Explicit SSP-RK3 with a parabolic CFL limit.

#include "imcf/discretization.hpp"
#include "imcf/errors.hpp"
#include "imcf/graph_geometry.hpp"
#include "imcf/monitors.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace imcf {

enum class FlowMode { Raw, Rescaled };

std::string to_string(FlowMode mode);

struct InitialData {
  enum class Kind { Constant, Bump };
  Kind kind = Kind::Constant;
  double r0 = 1.5;
  double eps = 0.05;  // bump only: u0 = r0 (1 + eps cos(pi rho / rho_max))

  std::string describe() const;
};

struct CConvention {
  enum class Kind { Midpoint, Value };
  Kind kind = Kind::Midpoint;
  double value = 0.0;

  std::string describe() const;
};

struct GuardConfig {
  double eps_H = 1e-8;
  double eps_spacelike = kDefaultSpacelikeEps;
  double route_tol = 1e-10;  // u-form vs phi-form rhs, relative to max(1, |rhs|)
};

struct FlowConfig {
  GridConfig grid;
  InitialData u0;
  FlowMode flow = FlowMode::Raw;
  double t_end = 2.0;
  double cfl_gamma = 0.2;
  std::optional<double> dt;  // fixed step; disables the CFL controller
  CConvention c_convention;
  GuardConfig guards;
  // c0/phidot/gradient left NaN resolve to 1e-6 + h^2
  MonitorTolerances tolerances{.c0 = std::numeric_limits<double>::quiet_NaN(),
                               .phidot = std::numeric_limits<double>::quiet_NaN(),
                               .gradient = std::numeric_limits<double>::quiet_NaN()};
  long csv_every = 100;
  long snapshot_every = 0;  // 0: initial and final snapshots only
  std::string out_dir = "out";
  double t_end_rescaled = 20.0;  // rescaled leg of `verify`
};

/// Throws ConfigError.
void validate(const FlowConfig& config);

/// Tolerances with the automatic max-principle slack filled in.
MonitorTolerances effective_tolerances(const FlowConfig& config, const Grid& grid);

struct GraphState {
  double t = 0.0;
  Field u;  // u for raw flows, u~ for rescaled flows
  double c = 0.0;
  FlowMode mode = FlowMode::Raw;

  int n() const { return u.grid().n(); }
  const Grid& grid() const { return u.grid(); }
};

/// exp(-t/n + c).
double theta(double t, double c, int n);

/// Initial u0 on the grid (ghosts filled).
Field initial_field(const InitialData& data, std::shared_ptr<const Grid> grid);

/// c from the convention; a value outside [inf phi0, sup phi0] is a ConfigError.
double resolve_c(const CConvention& conv, const Field& u0);

/// Builds the grid and initial state; rejects initial data that is not
/// spacelike or not strictly mean convex (ConfigError).
GraphState initial_state(const FlowConfig& config);

/// Per-node quantities of the curvature operator at one grid node.
struct NodeEval {
  double u = 0.0;
  CurvatureTerms terms;
  // radial
  double u_r = 0.0, u_rr = 0.0, coth = 0.0;
  // disk: covariant chart derivatives and position
  double du[2] = {0.0, 0.0};
  double hess[3] = {0.0, 0.0, 0.0};
  double y[2] = {0.0, 0.0};
};

/// Curvature operator on a fixed grid with the static per-node geometry
/// cached. Fields passed in must have their ghosts filled.
class FlowOperator {
 public:
  explicit FlowOperator(std::shared_ptr<const Grid> grid, GuardConfig guards = {});

  const Grid& grid() const { return *grid_; }
  const GuardConfig& guards() const { return guards_; }

  NodeEval eval_node(std::span<const double> values, int k) const;
  /// H through trace(g^-1 h) (the u-form route).
  double trace_curvature(const NodeEval& e) const;
  /// v^2/den^2 times the largest eigenvalue of sigma~, over h_local^2.
  double stiffness(const NodeEval& e, int k) const;

  /// Writes du/dt (raw) or du~/dt (rescaled) for every interior node into
  /// out. Enforces the guards; with check_routes also compares the u-form
  /// and phi-form rates (MonitorFailure on mismatch). If cfl_gamma > 0,
  /// returns gamma / max stiffness, else 0.
  double evaluate(const Field& u, FlowMode mode, double t, std::span<double> out, bool check_routes = false,
                  double cfl_gamma = 0.0) const;

  /// phi_t = -(1 - |Dphi|^2) / den per interior node, no guards.
  std::vector<double> phi_rate(const Field& u) const;

 private:
  double evaluate_radial(const Field& u, FlowMode mode, double t, std::span<double> out, bool check_routes,
                         double cfl_gamma) const;

  std::shared_ptr<const Grid> grid_;
  GuardConfig guards_;
  std::vector<double> coth_;      // radial
  std::vector<double> cos_, sin_; // disk, per angle
  std::vector<double> h_local_sq_;
};

/// du/dt of the raw flow (interior values; ghosts zero).
Field rhs_raw(const GraphState& state, const GuardConfig& guards = {});
/// du~/dt of the rescaled flow.
Field rhs_rescaled(const GraphState& state, const GuardConfig& guards = {});
/// The same raw rate computed through the phi-form, u * phi_t.
Field rhs_raw_phi_form(const GraphState& state);

/// gamma * min over nodes of h_local^2 / D, D the largest eigenvalue of
/// (1/(u^2 H^2)) sigma~ in grid coordinates. gamma must lie in (0, 0.5].
double cfl_dt(const GraphState& state, double gamma);

using Rhs = std::function<Field(const GraphState&)>;

/// One SSP-RK3 step; ghosts are refilled before every stage.
GraphState step(const GraphState& state, double dt, const Rhs& rhs);

/// Monitored scalars of a state (never throws on bad states).
TrajectoryRecord make_record(const GraphState& state, const FlowOperator& op, double dt_used);

struct EvolveObserver {
  std::function<void(const TrajectoryRecord&)> on_record;
  std::function<void(const GraphState&, long step)> on_snapshot;
};

struct EvolveResult {
  std::vector<TrajectoryRecord> records;
  GraphState final_state;
  long steps = 0;
  InvariantReport report;  // record-stream checks
  double base_area = 0.0;  // quadrature of 1 over the cap
  MonitorTolerances tolerances;
};

/// Integrates to t_end. Records are emitted at step 0 and every csv_every
/// steps. Guards throw SingularityError subclasses.
EvolveResult evolve(const FlowConfig& config, const EvolveObserver& observer = {});

}  // namespace imcf
