#pragma once

// A-priori estimates of the flow as executable checks over a recorded
// trajectory, plus the closed-form round solution.
//
// Every check is a pure function of its inputs. Bounds that the continuum
// flow satisfies exactly are checked with a tolerance that absorbs the
// O(h^2) + O(dt^3) discretization error.

#include <string>
#include <vector>

namespace imcf {

struct TrajectoryRecord {
  double t = 0.0;
  double min_u = 0.0, max_u = 0.0;
  double min_phi = 0.0, max_phi = 0.0;
  double min_phidot = 0.0, max_phidot = 0.0;
  double max_grad_phi = 0.0;
  double min_H_theta = 0.0, max_H_theta = 0.0;
  double area = 0.0;
  double rescaled_area = 0.0;
  double osc_rescaled_u = 0.0;
  double dt_used = 0.0;
};

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(Verdict v);

struct CheckResult {
  std::string name;
  Verdict verdict = Verdict::Pass;
  double worst_violation = 0.0;
  double time_of_worst = 0.0;
  std::string detail;
};

struct InvariantReport {
  std::vector<CheckResult> checks;

  bool all_pass() const;
  bool any_fail() const;
  const CheckResult* find(const std::string& name) const;
  std::string to_text() const;
};

struct MonitorTolerances {
  double c0 = 1e-6;
  double phidot = 1e-6;
  double gradient = 1e-6;
  double h_theta_ceiling = 1e6;
  double area = 5e-3;
  double conv = 1e-6;             // oscillation of the rescaled graph
  double rescaled_area = 5e-3;    // relative drift
  double r_inf = 1e-3;            // relative error of the limit identity
  double bracket = 1e-9;          // relative slack on the limit bracket
  double oracle = 1e-6;           // round solution vs closed form, relative

  /// Defaults with the max-principle slack 1e-6 + h^2 for mesh size h.
  static MonitorTolerances for_spacing(double h);
};

/// R0 exp(-t / n).
double oracle_round(double r0, int n, double t);
/// log R0 - t / n, i.e. phi of the round solution with c = log R0.
double oracle_round_phi(double c, int n, double t);

// Per-record checks. The returned violation is >= 0 and the verdict is Pass
// iff it is within tol.
CheckResult check_c0(const TrajectoryRecord& r, double phi1, double phi2, int n, double tol);
CheckResult check_phidot(const TrajectoryRecord& r, double phidot_min0, double phidot_max0, double tol);
CheckResult check_gradient(const TrajectoryRecord& r, double grad0, double tol);

// Trajectory checks; the first record supplies the initial bounds.
CheckResult check_c0(const std::vector<TrajectoryRecord>& traj, int n, double tol);
CheckResult check_phidot(const std::vector<TrajectoryRecord>& traj, double tol);
CheckResult check_gradient(const std::vector<TrajectoryRecord>& traj, double tol);
/// Positivity and boundedness of H Theta.
CheckResult check_h_theta(const std::vector<TrajectoryRecord>& traj, double ceiling);
/// |area(t)/area(0) - exp(-t)| <= tol.
CheckResult check_area_law(const std::vector<TrajectoryRecord>& traj, double tol);

/// Final-state summary of a rescaled run.
struct RescaledFinal {
  double t = 0.0;
  double min_rescaled_u = 0.0;
  double max_rescaled_u = 0.0;
};

struct ConvergenceInputs {
  double c = 0.0;
  int n = 2;
  double base_area = 0.0;  // area of the cap in H^n(1)
};

struct ConvergenceReport {
  CheckResult oscillation;     // osc < tol.conv, else the run is inconclusive
  CheckResult area_constancy;  // drift of the rescaled area
  CheckResult r_inf_identity;  // r_inf = e^-c (A0 / |M|)^(1/n)
  CheckResult r_inf_bracket;
  CheckResult overall;
  double r_inf = 0.0;
  double r_inf_predicted = 0.0;
  double bracket_lo = 0.0, bracket_hi = 0.0;
};

ConvergenceReport check_rescaled_convergence(const std::vector<TrajectoryRecord>& traj,
                                             const RescaledFinal& final_state, const ConvergenceInputs& in,
                                             const MonitorTolerances& tol);

/// Final summary from the last record (for stored trajectories).
RescaledFinal final_from_record(const TrajectoryRecord& r, double c, int n);

/// The record-stream checks (c0, phidot, gradient, h_theta, area_law).
InvariantReport record_checks(const std::vector<TrajectoryRecord>& traj, int n, const MonitorTolerances& tol,
                              bool include_area_law = true);

}  // namespace imcf
