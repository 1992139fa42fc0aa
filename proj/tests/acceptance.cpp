// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include "imcf/cli_io.hpp"
#include "imcf/geometry_checks.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace imcf;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

FlowConfig base(const std::string& u0, double t_end, int cells = 256) {
  return parse_config("", {{"u0", u0}, {"t_end", fmt("%.17g", t_end)}, {"cells", std::to_string(cells)}});
}

double area_law_error(const std::vector<TrajectoryRecord>& recs) {
  double worst = 0.0;
  for (const auto& r : recs) worst = std::max(worst, std::abs(r.area / recs.front().area - std::exp(-r.t)));
  return worst;
}

// 1. constant data against the round solution
Outcome exact_solution() {
  FlowConfig cfg = base("constant:1.5", 2.0);
  cfg.csv_every = 1;
  const auto t0 = std::chrono::steady_clock::now();
  const EvolveResult res = evolve(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double worst = 0.0;
  for (const auto& r : res.records) {
    const double exact = 1.5 * std::exp(-r.t / 2.0);
    worst = std::max({worst, std::abs(r.min_u - exact) / exact, std::abs(r.max_u - exact) / exact});
  }
  return {worst < 1e-6, fmt("max rel err %.3e over %zu records (< 1e-6), %ld steps in %.1f s", worst,
                            res.records.size(), res.steps, secs)};
}

// 2. area law on bump data, with refinement
Outcome area_law(const EvolveResult& r256) {
  const double e256 = area_law_error(r256.records);
  FlowConfig cfg = base("bump:1.5,0.05", 2.0, 512);
  cfg.csv_every = 4;
  const double e512 = area_law_error(evolve(cfg).records);
  const double ratio = e256 / e512;
  const bool pass = e256 < 5e-3 && e512 < 5e-3 && ratio > 3.0 && ratio < 5.0;
  return {pass, fmt("max |A/A0 - e^-t| = %.3e at 256 cells, %.3e at 512 (ratio %.2f, expect ~4)", e256, e512, ratio)};
}

// 3. rescaled area stays constant
Outcome rescaled_area() {
  FlowConfig cfg = base("bump:1.5,0.05", 5.0);
  cfg.flow = FlowMode::Rescaled;
  cfg.csv_every = 10;
  const EvolveResult res = evolve(cfg);
  double drift = 0.0;
  for (const auto& r : res.records) {
    drift = std::max(drift, std::abs(r.rescaled_area / res.records.front().rescaled_area - 1.0));
  }
  return {drift < 5e-3, fmt("max relative drift %.3e to t = %g (< 5e-3)", drift, res.final_state.t)};
}

// 4. maximum-principle monitors on the bump run, plus negative controls
Outcome monitors(const EvolveResult& bump) {
  const MonitorTolerances& tol = bump.tolerances;
  const auto& recs = bump.records;
  const CheckResult c0 = check_c0(recs, 2, tol.c0);
  const CheckResult pd = check_phidot(recs, tol.phidot);
  const CheckResult gr = check_gradient(recs, tol.gradient);
  double max_grad = 0.0;
  for (const auto& r : recs) max_grad = std::max(max_grad, r.max_grad_phi);

  // negative control: +0.1 on one node of the final state, record recomputed
  GraphState bad = bump.final_state;
  bad.u.interior(bad.grid().interior_size() / 2) += 0.1;
  fill_neumann_ghosts(bad.u);
  auto corrupted = recs;
  corrupted.push_back(make_record(bad, FlowOperator(bad.u.grid_ptr()), 0.0));
  const bool controls = check_c0(corrupted, 2, tol.c0).verdict == Verdict::Fail &&
                        check_phidot(corrupted, tol.phidot).verdict == Verdict::Fail &&
                        check_gradient(corrupted, tol.gradient).verdict == Verdict::Fail;
  const bool pass = c0.verdict == Verdict::Pass && pd.verdict == Verdict::Pass && gr.verdict == Verdict::Pass &&
                    max_grad < 1.0 && controls;
  return {pass, fmt("violations c0 %.1e, phidot %.1e, gradient %.1e (slack %.2e); max |Dphi| %.4f over %zu steps; "
                    "negative controls %s",
                    c0.worst_violation, pd.worst_violation, gr.worst_violation, tol.c0, max_grad, recs.size() - 1,
                    controls ? "fail as expected" : "DID NOT FAIL")};
}

// 5. convergence of the rescaled flow and the limit radius
Outcome convergence() {
  FlowConfig cfg = base("bump:1.5,0.05", 20.0);
  cfg.flow = FlowMode::Rescaled;
  cfg.csv_every = 100;
  const EvolveResult res = evolve(cfg);
  const GraphState& s = res.final_state;
  const ConvergenceReport rep = check_rescaled_convergence(
      res.records, RescaledFinal{s.t, s.u.min_interior(), s.u.max_interior()},
      ConvergenceInputs{s.c, 2, res.base_area}, res.tolerances);

  FlowConfig round = base("constant:1.5", 20.0);
  round.flow = FlowMode::Rescaled;
  round.csv_every = 1000;
  round.c_convention = CConvention{CConvention::Kind::Value, std::log(1.5)};
  const EvolveResult rr = evolve(round);
  const double r_inf_round = 0.5 * (rr.final_state.u.min_interior() + rr.final_state.u.max_interior());

  const bool pass = rep.oscillation.verdict == Verdict::Pass && rep.r_inf_identity.verdict == Verdict::Pass &&
                    rep.r_inf_bracket.verdict == Verdict::Pass && std::abs(r_inf_round - 1.0) < 1e-9;
  return {pass, fmt("osc %.2e (< 1e-6); r_inf %.9f vs predicted %.9f (rel %.2e < 1e-3); bracket [%.6f, %.6f] %s; "
                    "round data r_inf - 1 = %.1e (< 1e-9)",
                    rep.oscillation.worst_violation, rep.r_inf, rep.r_inf_predicted,
                    rep.r_inf_identity.worst_violation, rep.bracket_lo, rep.bracket_hi,
                    rep.r_inf_bracket.verdict == Verdict::Pass ? "contains it" : "MISSES",
                    r_inf_round - 1.0)};
}

// 6. graph geometry kernel
Outcome geometry_kernel() {
  GraphPointData d;
  d.u = 1.5;
  d.du = Vector::Zero(2);
  d.hess_u = Matrix::Zero(2, 2);
  d.point = ChartPoint{Vector{{0.3, -0.4}}};
  const MeanCurvature mc = mean_curvature(d);
  double order = 0.0;
  std::vector<CheckResult> suites = {checks::metric_embedding(), checks::normal_embedding(),
                                     checks::second_fundamental_embedding(), checks::support_embedding(),
                                     checks::route_consistency(), checks::stencil_order(&order)};
  bool all = true;
  std::string failed;
  for (const auto& c : suites) {
    if (c.verdict != Verdict::Pass) {
      all = false;
      failed += " " + c.name;
    }
  }
  const double h_err = std::abs(mc.H - 4.0 / 3.0);
  const bool pass = all && h_err <= 1e-12 && order >= 1.9;
  return {pass, fmt("|H - 4/3| = %.1e; stencil order %.3f; route residual %.1e; embedding FD suites %s%s", h_err,
                    order, suites[4].worst_violation, all ? "pass" : "fail:", failed.c_str())};
}

// 7. base geometry
Outcome base_geometry() {
  const CheckResult curv = checks::curvature_identity();
  const CheckResult chr = checks::christoffel_oracle();
  const CheckResult comp = checks::metric_compatibility();
  const bool pass = curv.worst_violation <= 1e-4 && chr.worst_violation <= 1e-6 && comp.worst_violation <= 1e-6;
  return {pass, fmt("curvature identity %.1e (<= 1e-4), Christoffel oracle %.1e (<= 1e-6), metric compatibility "
                    "%.1e (<= 1e-6)",
                    curv.worst_violation, chr.worst_violation, comp.worst_violation)};
}

// 8. radial vs disk evolution of the same rotationally symmetric bump
Outcome cross_mode() {
  FlowConfig radial = base("bump:1.5,0.05", 1.0, 512);
  radial.csv_every = 100000;
  const EvolveResult rr = evolve(radial);
  FlowConfig disk = base("bump:1.5,0.05", 1.0, 64);
  disk.grid.mode = GridMode::Disk;
  disk.grid.cells_theta = 8;
  disk.csv_every = 100000;
  const EvolveResult dr = evolve(disk);

  const Grid& rg = rr.final_state.grid();
  const Grid& dg = dr.final_state.grid();
  double worst = 0.0;
  for (int k = 0; k < dg.interior_size(); ++k) {
    // linear interpolation of the radial solution at the node's geodesic radius
    const double rho = dg.geodesic_radius(k);
    const double x = rho / rg.dr() - 0.5;
    const int i = std::clamp(static_cast<int>(std::floor(x)), -1, rg.cells() - 1);
    const double w = x - i;
    const double ur = (1.0 - w) * rr.final_state.u.at(i) + w * rr.final_state.u.at(i + 1);
    worst = std::max(worst, std::abs(dr.final_state.u.interior(k) - ur));
  }
  return {worst < 1e-3, fmt("sup |u_disk - u_radial| = %.3e at t = 1 (< 1e-3); disk 64x8, radial 512", worst)};
}

// 9. identical configs give identical trajectory files
Outcome determinism() {
  const fs::path root = fs::path(IMCF_TEST_TMP) / "acceptance";
  std::vector<std::string> bytes;
  for (const char* leg : {"a", "b"}) {
    fs::remove_all(root / leg);
    FlowConfig cfg = base("bump:1.5,0.05", 0.5);
    cfg.out_dir = (root / leg).string();
    std::ostringstream log;
    if (cmd_run(cfg, log) != 0) return {false, "run failed: " + log.str()};
    std::ifstream in(root / leg / "trajectory.csv", std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    bytes.push_back(ss.str());
  }
  const std::size_t h = std::hash<std::string>{}(bytes[0]);
  return {!bytes[0].empty() && bytes[0] == bytes[1],
          fmt("trajectory.csv %zu bytes, hash %016zx, runs %s", bytes[0].size(), h,
              bytes[0] == bytes[1] ? "byte-identical" : "DIFFER")};
}

}  // namespace

int main() {
  FlowConfig bump_cfg = base("bump:1.5,0.05", 2.0);
  bump_cfg.csv_every = 1;
  const EvolveResult bump = evolve(bump_cfg);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 exact-solution reproduction", exact_solution},
      {"2 area law", [&] { return area_law(bump); }},
      {"3 rescaled-area constancy", rescaled_area},
      {"4 maximum-principle monitors", [&] { return monitors(bump); }},
      {"5 rescaled convergence", convergence},
      {"6 geometry kernel", geometry_kernel},
      {"7 base geometry", base_geometry},
      {"8 cross-mode validation", cross_mode},
      {"9 determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
