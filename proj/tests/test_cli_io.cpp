#include "imcf/cli_io.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace imcf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(IMCF_TEST_TMP) / "cli_io" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::vector<std::string> out;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(IMCF_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

FlowConfig small_config(const fs::path& out, const std::string& u0 = "bump:1.5,0.05") {
  return parse_config("", {{"cells", "32"}, {"t_end", "0.2"}, {"csv_every", "10"}, {"u0", u0},
                           {"out_dir", out.string()}});
}

}  // namespace

TEST(Config, EmptyDocumentGivesDefaults) {
  const FlowConfig cfg = resolve_config(ConfigDocument::parse(""));
  EXPECT_EQ(cfg.grid.mode, GridMode::Radial);
  EXPECT_EQ(cfg.grid.n, 2);
  EXPECT_EQ(cfg.grid.rho_max, 1.0);
  EXPECT_EQ(cfg.grid.cells, 256);
  EXPECT_EQ(cfg.u0.kind, InitialData::Kind::Constant);
  EXPECT_EQ(cfg.u0.r0, 1.5);
  EXPECT_EQ(cfg.cfl_gamma, 0.2);
  EXPECT_EQ(cfg.t_end, 2.0);
  EXPECT_FALSE(cfg.dt.has_value());
  EXPECT_TRUE(std::isnan(cfg.tolerances.c0));
}

TEST(Config, ParsesBumpAndComments) {
  const FlowConfig cfg = resolve_config(ConfigDocument::parse("# bump run\nu0 = bump:1.5,0.05  # default eps\n\n"
                                                              "c_convention = value:0.4\ndt = 1e-5\ntol_c0 = 1e-3\n"));
  EXPECT_EQ(cfg.u0.kind, InitialData::Kind::Bump);
  EXPECT_EQ(cfg.u0.r0, 1.5);
  EXPECT_EQ(cfg.u0.eps, 0.05);
  EXPECT_EQ(cfg.c_convention.kind, CConvention::Kind::Value);
  EXPECT_EQ(cfg.c_convention.value, 0.4);
  EXPECT_EQ(cfg.dt.value(), 1e-5);
  EXPECT_EQ(cfg.tolerances.c0, 1e-3);
}

TEST(Config, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) {
    try {
      resolve_config(ConfigDocument::parse(text));
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("n = 2\nmode = hexagon\n"), 2);
  EXPECT_EQ(line_of("\n\nfoo = 1\n"), 3);
  EXPECT_EQ(line_of("cells 64\n"), 1);
  EXPECT_EQ(line_of("cells = 64\ncells = 32\n"), 2);
  EXPECT_EQ(line_of("cells = 6.5\n"), 1);
  EXPECT_EQ(line_of("u0 = bump:x\n"), 1);
  EXPECT_THROW(resolve_config(ConfigDocument::parse("cells = 8\n")), ConfigError);
}

TEST(Config, CommandLineOverridesFile) {
  const fs::path dir = scratch("override");
  std::ofstream(dir / "run.cfg") << "cells = 64\nt_end = 0.5\n";
  const FlowConfig cfg = parse_config((dir / "run.cfg").string(), {{"cells", "128"}});
  EXPECT_EQ(cfg.grid.cells, 128);
  EXPECT_EQ(cfg.t_end, 0.5);
  EXPECT_THROW(parse_config((dir / "missing.cfg").string(), {}), ConfigError);
  EXPECT_THROW(parse_config("", {{"nonsense", "1"}}), ConfigError);
}

TEST(Config, RenderRoundTrips) {
  const FlowConfig cfg = parse_config("", {{"u0", "bump:1.25,0.03"}, {"dt", "2e-5"}, {"rho_max", "0.7"},
                                           {"tol_grad", "0.001"}, {"mode", "disk"}, {"cells", "32"}});
  const std::string text = render_config(cfg);
  EXPECT_EQ(render_config(resolve_config(ConfigDocument::parse(text))), text);
  EXPECT_NE(text.find("u0 = bump:1.25,0.03\n"), std::string::npos);
  EXPECT_EQ(ConfigDocument::parse(text).entries().size(), config_keys().size());
}

TEST(Csv, HeaderFormatAndRoundTrip) {
  const fs::path dir = scratch("csv");
  TrajectoryRecord a;
  a.area = 1.0 / 3.0;
  TrajectoryRecord b = a;
  b.t = 0.1;
  b.min_u = std::exp(1.0);
  emit_csv((dir / "t.csv").string(), {a, b});
  const auto lines = lines_of(dir / "t.csv");
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], kTrajectoryHeader);
  EXPECT_EQ(lines[1].substr(0, 2), "0,");
  EXPECT_NE(lines[1].find("0.33333333333333331"), std::string::npos);
  const auto back = read_trajectory_csv((dir / "t.csv").string());
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].min_u, b.min_u);
  EXPECT_EQ(back[0].area, a.area);
}

TEST(Csv, RejectsNonIncreasingTimeAndBadPaths) {
  const fs::path dir = scratch("csv_bad");
  CsvWriter w((dir / "t.csv").string());
  TrajectoryRecord r;
  w.write(r);
  EXPECT_THROW(w.write(r), std::logic_error);
  EXPECT_THROW(CsvWriter((dir / "no" / "such" / "t.csv").string()), ConfigError);
  std::ofstream(dir / "short.csv") << kTrajectoryHeader << "\n1,2,3\n";
  EXPECT_THROW(read_trajectory_csv((dir / "short.csv").string()), ConfigError);
  std::ofstream(dir / "header.csv") << "t,u\n";
  EXPECT_THROW(read_trajectory_csv((dir / "header.csv").string()), ConfigError);
}

TEST(Run, OutputsAndRowCount) {
  const fs::path dir = scratch("run");
  const FlowConfig cfg = small_config(dir);
  std::ostringstream log;
  ASSERT_EQ(cmd_run(cfg, log), 0) << log.str();
  for (const char* f : {"trajectory.csv", "report.txt", "config.resolved"}) EXPECT_TRUE(fs::exists(dir / f)) << f;

  const auto records = read_trajectory_csv((dir / "trajectory.csv").string());
  const EvolveResult res = evolve(cfg);
  EXPECT_EQ(static_cast<long>(records.size()), 1 + res.steps / cfg.csv_every);
  EXPECT_EQ(records.front().t, 0.0);
  const GraphState s0 = initial_state(cfg);
  EXPECT_NEAR(records.front().area, total_area(s0.u), 1e-14);
  EXPECT_EQ(lines_of(dir / "report.txt").size(), 5u);
}

TEST(Run, ChecksumStable) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  std::ostringstream log;
  ASSERT_EQ(cmd_run(small_config(a), log), 0);
  ASSERT_EQ(cmd_run(small_config(b), log), 0);
  EXPECT_EQ(slurp(a / "trajectory.csv"), slurp(b / "trajectory.csv"));
}

TEST(Snapshot, ConstantDataColumns) {
  const fs::path dir = scratch("snap_const");
  const FlowConfig cfg = small_config(dir, "constant:1.5");
  const GraphState s = initial_state(cfg);
  FlowOperator op(s.u.grid_ptr());
  emit_snapshot((dir / "s.csv").string(), s, op);
  const auto lines = lines_of(dir / "s.csv");
  ASSERT_EQ(lines.size(), 2u + 32u);
  EXPECT_EQ(lines[1], "rho,u,v,H,grad_phi");
  for (std::size_t k = 2; k < lines.size(); ++k) {
    std::istringstream row(lines[k]);
    std::string rho, u, v;
    std::getline(row, rho, ',');
    std::getline(row, u, ',');
    std::getline(row, v, ',');
    EXPECT_EQ(u, "1.5");
    EXPECT_EQ(v, "1");
  }
}

TEST(Snapshot, ReloadReproducesMonitorScalars) {
  for (const char* mode : {"radial", "disk"}) {
    const fs::path dir = scratch(std::string("snap_") + mode);
    FlowConfig cfg = small_config(dir);
    cfg.grid.mode = mode == std::string("disk") ? GridMode::Disk : GridMode::Radial;
    cfg.grid.cells_theta = 8;
    cfg.t_end = 0.05;
    const EvolveResult res = evolve(cfg);
    FlowOperator op(res.final_state.u.grid_ptr());
    emit_snapshot((dir / "s.csv").string(), res.final_state, op);
    const GraphState back = load_snapshot((dir / "s.csv").string());
    EXPECT_EQ(back.grid().interior_size(), res.final_state.grid().interior_size());
    const TrajectoryRecord r1 = make_record(res.final_state, op, 0.0);
    const TrajectoryRecord r2 = make_record(back, FlowOperator(back.u.grid_ptr()), 0.0);
    EXPECT_EQ(format_record(r1), format_record(r2)) << mode;
  }
}

TEST(Snapshot, RunWritesFirstAndLast) {
  const fs::path dir = scratch("snap_run");
  FlowConfig cfg = small_config(dir);
  std::ostringstream log;
  ASSERT_EQ(cmd_run(cfg, log), 0);
  int count = 0;
  for (const auto& e : fs::directory_iterator(dir / "snapshots")) count += e.path().extension() == ".csv";
  EXPECT_EQ(count, 2);
}

TEST(Verify, StoredTrajectory) {
  const fs::path dir = scratch("verify");
  const FlowConfig cfg = small_config(dir);
  std::ostringstream log;
  ASSERT_EQ(cmd_run(cfg, log), 0);
  const std::string traj = (dir / "trajectory.csv").string();
  EXPECT_EQ(cmd_verify(cfg, traj, log), 0);

  auto lines = lines_of(traj);
  // corrupt one row: push max_phi far above the c0 sandwich
  std::ofstream out(dir / "corrupt.csv");
  for (std::size_t k = 0; k < lines.size(); ++k) {
    if (k == 3) {
      std::istringstream row(lines[k]);
      std::vector<std::string> cells;
      for (std::string c; std::getline(row, c, ',');) cells.push_back(c);
      cells[4] = "5";
      std::string joined;
      for (std::size_t j = 0; j < cells.size(); ++j) joined += (j ? "," : "") + cells[j];
      out << joined << "\n";
    } else {
      out << lines[k] << "\n";
    }
  }
  out.close();
  EXPECT_EQ(cmd_verify(cfg, (dir / "corrupt.csv").string(), log), 2);
}

TEST(Verify, FreshRunPasses) {
  const fs::path dir = scratch("verify_fresh");
  FlowConfig cfg = small_config(dir);
  cfg.t_end_rescaled = 20.0;
  std::ostringstream log;
  EXPECT_EQ(cmd_verify(cfg, std::nullopt, log), 0) << log.str();
  EXPECT_NE(log.str().find("rescaled_convergence"), std::string::npos);
}

TEST(OracleCompare, ConstantDataWithinTolerance) {
  const FlowConfig cfg = parse_config("", {{"cells", "64"}});
  std::ostringstream log;
  EXPECT_EQ(cmd_oracle_compare(cfg, log), 0);
  EXPECT_NE(log.str().find("max relative error"), std::string::npos);
}

TEST(ExitCodes, EveryDocumentedCodeIsReachable) {
  const fs::path dir = scratch("exit");
  const std::string out = " --out-dir " + (dir / "o").string();
  EXPECT_EQ(cli("geometry-check"), 0);
  EXPECT_EQ(cli("run --cells 32 --t-end 0.05" + out), 0);
  EXPECT_EQ(cli("oracle-compare --cells 32 --t-end 0.5"), 0);
  // 2: monitor failure on a corrupted trajectory
  std::ofstream(dir / "bad.csv") << kTrajectoryHeader << "\n"
                                 << "0,1.5,1.5,0.4,0.4,-0.5,-0.5,0,2,2,7,3,0,0\n"
                                 << "0.1,1.5,1.5,0.4,0.9,-0.5,-0.5,0,2,2,7,3,0,0.1\n";
  EXPECT_EQ(cli("verify --trajectory " + (dir / "bad.csv").string()), 2);
  EXPECT_EQ(cli("oracle-compare --cells 32 --t-end 0.5 --tol-oracle 0"), 2);
  // 3: unstable fixed step trips a guard
  EXPECT_EQ(cli("run --u0 bump:1.5,0.05 --dt 0.01 --t-end 1" + out), 3);
  EXPECT_TRUE(fs::exists(dir / "o" / "diagnostic.txt"));
  // 4: configuration errors
  EXPECT_EQ(cli("run --mode hexagon" + out), 4);
  EXPECT_EQ(cli("run --u0 bump:1.0,0.9" + out), 4);
  EXPECT_EQ(cli("run --cells 32 --out-dir /proc/imcf-unwritable"), 4);
  EXPECT_EQ(cli("run --no-such-flag"), 4);
}
