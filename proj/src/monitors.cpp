#include "imcf/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace imcf {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

bool InvariantReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.verdict == Verdict::Pass; });
}

bool InvariantReport::any_fail() const {
  return std::any_of(checks.begin(), checks.end(), [](const auto& c) { return c.verdict == Verdict::Fail; });
}

const CheckResult* InvariantReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string InvariantReport::to_text() const {
  std::ostringstream os;
  char line[512];
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "%-22s %-12s worst_violation=%.6e t=%.6g", c.name.c_str(),
                  to_string(c.verdict).c_str(), c.worst_violation, c.time_of_worst);
    os << line;
    if (!c.detail.empty()) os << "  " << c.detail;
    os << '\n';
  }
  return os.str();
}

MonitorTolerances MonitorTolerances::for_spacing(double h) {
  MonitorTolerances tol;
  tol.c0 = tol.phidot = tol.gradient = 1e-6 + h * h;
  return tol;
}

double oracle_round(double r0, int n, double t) { return r0 * std::exp(-t / n); }

double oracle_round_phi(double c, int n, double t) { return -t / n + c; }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CheckResult make_result(std::string name, double violation, double t, double tol) {
  CheckResult r;
  r.name = std::move(name);
  r.worst_violation = std::isnan(violation) ? kInf : std::max(0.0, violation);
  r.time_of_worst = t;
  r.verdict = r.worst_violation <= tol ? Verdict::Pass : Verdict::Fail;
  return r;
}

void merge(CheckResult& acc, const CheckResult& r) {
  if (r.worst_violation > acc.worst_violation) {
    acc.worst_violation = r.worst_violation;
    acc.time_of_worst = r.time_of_worst;
  }
  if (r.verdict == Verdict::Fail) acc.verdict = Verdict::Fail;
}

void require_nonempty(const std::vector<TrajectoryRecord>& traj) {
  if (traj.empty()) throw std::invalid_argument("empty trajectory");
}

template <class PerRecord>
CheckResult over_trajectory(const std::string& name, const std::vector<TrajectoryRecord>& traj,
                            PerRecord&& per_record) {
  require_nonempty(traj);
  CheckResult acc;
  acc.name = name;
  acc.time_of_worst = traj.front().t;
  for (const auto& r : traj) merge(acc, per_record(r));
  return acc;
}

}  // namespace

CheckResult check_c0(const TrajectoryRecord& r, double phi1, double phi2, int n, double tol) {
  const double lower = -r.t / n + phi1;
  const double upper = -r.t / n + phi2;
  return make_result("c0", std::max(lower - r.min_phi, r.max_phi - upper), r.t, tol);
}

CheckResult check_phidot(const TrajectoryRecord& r, double phidot_min0, double phidot_max0, double tol) {
  return make_result("phidot", std::max(phidot_min0 - r.min_phidot, r.max_phidot - phidot_max0), r.t, tol);
}

CheckResult check_gradient(const TrajectoryRecord& r, double grad0, double tol) {
  CheckResult res = make_result("gradient", r.max_grad_phi - grad0, r.t, tol);
  if (!(r.max_grad_phi < 1.0)) {
    res.verdict = Verdict::Fail;
    res.detail = "spacelike bound |Dphi| < 1 violated";
  }
  return res;
}

CheckResult check_c0(const std::vector<TrajectoryRecord>& traj, int n, double tol) {
  require_nonempty(traj);
  const double phi1 = traj.front().min_phi, phi2 = traj.front().max_phi;
  return over_trajectory("c0", traj, [&](const auto& r) { return check_c0(r, phi1, phi2, n, tol); });
}

CheckResult check_phidot(const std::vector<TrajectoryRecord>& traj, double tol) {
  require_nonempty(traj);
  const double lo = traj.front().min_phidot, hi = traj.front().max_phidot;
  return over_trajectory("phidot", traj, [&](const auto& r) { return check_phidot(r, lo, hi, tol); });
}

CheckResult check_gradient(const std::vector<TrajectoryRecord>& traj, double tol) {
  require_nonempty(traj);
  const double grad0 = traj.front().max_grad_phi;
  CheckResult acc = over_trajectory("gradient", traj, [&](const auto& r) { return check_gradient(r, grad0, tol); });
  for (const auto& r : traj) {
    if (!(r.max_grad_phi < 1.0)) acc.detail = "spacelike bound |Dphi| < 1 violated";
  }
  return acc;
}

CheckResult check_h_theta(const std::vector<TrajectoryRecord>& traj, double ceiling) {
  require_nonempty(traj);
  CheckResult acc;
  acc.name = "h_theta";
  acc.time_of_worst = traj.front().t;
  double lo = kInf, hi = -kInf;
  for (const auto& r : traj) {
    // violation: how far below zero the minimum or above the ceiling the maximum sits
    const bool bad_lo = !(r.min_H_theta > 0.0);
    const bool bad_hi = !(r.max_H_theta <= ceiling) || !std::isfinite(r.max_H_theta);
    double violation = 0.0;
    if (bad_lo) violation = std::isfinite(r.min_H_theta) ? -r.min_H_theta : kInf;
    if (bad_hi) violation = std::max(violation, std::isfinite(r.max_H_theta) ? r.max_H_theta - ceiling : kInf);
    if (bad_lo || bad_hi) {
      acc.verdict = Verdict::Fail;
      if (violation >= acc.worst_violation) {
        acc.worst_violation = violation;
        acc.time_of_worst = r.t;
      }
    }
    lo = std::min(lo, r.min_H_theta);
    hi = std::max(hi, r.max_H_theta);
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "range [%.9g, %.9g]", lo, hi);
  acc.detail = buf;
  return acc;
}

CheckResult check_area_law(const std::vector<TrajectoryRecord>& traj, double tol) {
  require_nonempty(traj);
  const double a0 = traj.front().area;
  return over_trajectory("area_law", traj, [&](const auto& r) {
    return make_result("area_law", std::abs(r.area / a0 - std::exp(-r.t)), r.t, tol);
  });
}

RescaledFinal final_from_record(const TrajectoryRecord& r, double c, int n) {
  const double inv_theta = std::exp(r.t / n - c);
  return RescaledFinal{r.t, r.min_u * inv_theta, r.max_u * inv_theta};
}

ConvergenceReport check_rescaled_convergence(const std::vector<TrajectoryRecord>& traj,
                                             const RescaledFinal& fin, const ConvergenceInputs& in,
                                             const MonitorTolerances& tol) {
  require_nonempty(traj);
  ConvergenceReport rep;
  const TrajectoryRecord& first = traj.front();

  const double osc = fin.max_rescaled_u - fin.min_rescaled_u;
  rep.oscillation = make_result("rescaled_osc", osc, fin.t, tol.conv);
  if (rep.oscillation.verdict == Verdict::Fail) rep.oscillation.verdict = Verdict::Inconclusive;

  const double ra0 = first.rescaled_area;
  rep.area_constancy = over_trajectory("rescaled_area", traj, [&](const auto& r) {
    return make_result("rescaled_area", std::abs(r.rescaled_area / ra0 - 1.0), r.t, tol.rescaled_area);
  });

  const double ratio = std::pow(first.area / in.base_area, 1.0 / in.n);
  rep.r_inf = 0.5 * (fin.max_rescaled_u + fin.min_rescaled_u);
  rep.r_inf_predicted = std::exp(-in.c) * ratio;
  rep.bracket_lo = ratio / std::exp(first.max_phi);
  rep.bracket_hi = ratio / std::exp(first.min_phi);

  char buf[160];
  if (rep.oscillation.verdict == Verdict::Pass) {
    rep.r_inf_identity = make_result("r_inf_identity", std::abs(rep.r_inf / rep.r_inf_predicted - 1.0), fin.t,
                                     tol.r_inf);
    const double below = (rep.bracket_lo - rep.r_inf) / rep.bracket_lo;
    const double above = (rep.r_inf - rep.bracket_hi) / rep.bracket_hi;
    rep.r_inf_bracket = make_result("r_inf_bracket", std::max(below, above), fin.t, tol.bracket);
  } else {
    rep.r_inf_identity.name = "r_inf_identity";
    rep.r_inf_identity.verdict = Verdict::Inconclusive;
    rep.r_inf_bracket.name = "r_inf_bracket";
    rep.r_inf_bracket.verdict = Verdict::Inconclusive;
  }
  std::snprintf(buf, sizeof buf, "r_inf=%.12g predicted=%.12g", rep.r_inf, rep.r_inf_predicted);
  rep.r_inf_identity.detail = buf;
  std::snprintf(buf, sizeof buf, "bracket=[%.12g, %.12g]", rep.bracket_lo, rep.bracket_hi);
  rep.r_inf_bracket.detail = buf;

  rep.overall.name = "rescaled_convergence";
  rep.overall.time_of_worst = fin.t;
  rep.overall.worst_violation = osc;
  for (const CheckResult* part : {&rep.area_constancy, &rep.r_inf_identity, &rep.r_inf_bracket}) {
    if (part->verdict == Verdict::Fail) rep.overall.verdict = Verdict::Fail;
  }
  if (rep.overall.verdict != Verdict::Fail && rep.oscillation.verdict != Verdict::Pass) {
    rep.overall.verdict = Verdict::Inconclusive;
  }
  std::snprintf(buf, sizeof buf, "osc=%.3e area_drift=%.3e r_inf=%.12g predicted=%.12g bracket=[%.12g, %.12g]",
                osc, rep.area_constancy.worst_violation, rep.r_inf, rep.r_inf_predicted, rep.bracket_lo,
                rep.bracket_hi);
  rep.overall.detail = buf;
  return rep;
}

InvariantReport record_checks(const std::vector<TrajectoryRecord>& traj, int n, const MonitorTolerances& tol,
                              bool include_area_law) {
  InvariantReport rep;
  rep.checks.push_back(check_c0(traj, n, tol.c0));
  rep.checks.push_back(check_phidot(traj, tol.phidot));
  rep.checks.push_back(check_gradient(traj, tol.gradient));
  rep.checks.push_back(check_h_theta(traj, tol.h_theta_ceiling));
  if (include_area_law) rep.checks.push_back(check_area_law(traj, tol.area));
  return rep;
}

}  // namespace imcf
