#include "imcf/cli_io.hpp"

#include "imcf/geometry_checks.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace imcf {

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s) {
  s = trim(s);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(x)) {
    throw ConfigError("not a number: '" + std::string(s) + "'");
  }
  return x;
}

long parse_long(std::string_view s) {
  s = trim(s);
  long x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("not an integer: '" + std::string(s) + "'");
  return x;
}

int parse_int(std::string_view s) {
  const long x = parse_long(s);
  if (x < -1000000000L || x > 1000000000L) throw ConfigError("integer out of range: '" + std::string(s) + "'");
  return static_cast<int>(x);
}

InitialData parse_u0(std::string_view s) {
  InitialData d;
  if (s.starts_with("constant:")) {
    d.kind = InitialData::Kind::Constant;
    d.r0 = parse_double(s.substr(9));
    return d;
  }
  if (s.starts_with("bump:")) {
    d.kind = InitialData::Kind::Bump;
    const auto rest = s.substr(5);
    const auto comma = rest.find(',');
    d.r0 = parse_double(rest.substr(0, comma));
    if (comma != std::string_view::npos) d.eps = parse_double(rest.substr(comma + 1));
    return d;
  }
  throw ConfigError("u0 must be constant:<R0> or bump:<R0>,<eps>, got '" + std::string(s) + "'");
}

CConvention parse_c(std::string_view s) {
  CConvention c;
  if (s == "midpoint") return c;
  if (s.starts_with("value:")) {
    c.kind = CConvention::Kind::Value;
    c.value = parse_double(s.substr(6));
    return c;
  }
  throw ConfigError("c_convention must be midpoint or value:<c>, got '" + std::string(s) + "'");
}

double parse_auto(std::string_view s) {
  return s == "auto" ? std::numeric_limits<double>::quiet_NaN() : parse_double(s);
}

std::string render_auto(double x) { return std::isnan(x) ? "auto" : shortest(x); }

struct KeySpec {
  ConfigKey key;
  std::function<void(FlowConfig&, std::string_view)> set;
  std::function<std::string(const FlowConfig&)> get;
};

const std::vector<KeySpec>& key_specs() {
  static const std::vector<KeySpec> specs = {
      {{"mode", "radial", "grid: radial (any n) or disk (n = 2)"},
       [](FlowConfig& c, std::string_view v) {
         if (v == "radial") c.grid.mode = GridMode::Radial;
         else if (v == "disk") c.grid.mode = GridMode::Disk;
         else throw ConfigError("mode must be radial or disk, got '" + std::string(v) + "'");
       },
       [](const FlowConfig& c) { return to_string(c.grid.mode); }},
      {{"n", "2", "dimension of the hypersurface"},
       [](FlowConfig& c, std::string_view v) { c.grid.n = parse_int(v); },
       [](const FlowConfig& c) { return std::to_string(c.grid.n); }},
      {{"rho_max", "1", "geodesic radius of the cap"},
       [](FlowConfig& c, std::string_view v) { c.grid.rho_max = parse_double(v); },
       [](const FlowConfig& c) { return shortest(c.grid.rho_max); }},
      {{"cells", "256", "radial cells"},
       [](FlowConfig& c, std::string_view v) { c.grid.cells = parse_int(v); },
       [](const FlowConfig& c) { return std::to_string(c.grid.cells); }},
      {{"cells_theta", "16", "angular cells (disk mode)"},
       [](FlowConfig& c, std::string_view v) { c.grid.cells_theta = parse_int(v); },
       [](const FlowConfig& c) { return std::to_string(c.grid.cells_theta); }},
      {{"cfl_gamma", "0.2", "CFL factor in (0, 0.5]"},
       [](FlowConfig& c, std::string_view v) { c.cfl_gamma = parse_double(v); },
       [](const FlowConfig& c) { return shortest(c.cfl_gamma); }},
      {{"dt", "cfl", "fixed time step, or cfl"},
       [](FlowConfig& c, std::string_view v) {
         if (v == "cfl") c.dt.reset();
         else c.dt = parse_double(v);
       },
       [](const FlowConfig& c) { return c.dt ? shortest(*c.dt) : std::string("cfl"); }},
      {{"t_end", "2", "final time"},
       [](FlowConfig& c, std::string_view v) { c.t_end = parse_double(v); },
       [](const FlowConfig& c) { return shortest(c.t_end); }},
      {{"t_end_rescaled", "20", "final time of the rescaled leg of verify"},
       [](FlowConfig& c, std::string_view v) { c.t_end_rescaled = parse_double(v); },
       [](const FlowConfig& c) { return shortest(c.t_end_rescaled); }},
      {{"u0", "constant:1.5", "constant:<R0> or bump:<R0>,<eps>"},
       [](FlowConfig& c, std::string_view v) { c.u0 = parse_u0(v); },
       [](const FlowConfig& c) { return c.u0.describe(); }},
      {{"c_convention", "midpoint", "midpoint or value:<c>"},
       [](FlowConfig& c, std::string_view v) { c.c_convention = parse_c(v); },
       [](const FlowConfig& c) { return c.c_convention.describe(); }},
      {{"out_dir", "out", "output directory"},
       [](FlowConfig& c, std::string_view v) { c.out_dir = std::string(v); },
       [](const FlowConfig& c) { return c.out_dir; }},
      {{"csv_every", "100", "steps between trajectory rows"},
       [](FlowConfig& c, std::string_view v) { c.csv_every = parse_long(v); },
       [](const FlowConfig& c) { return std::to_string(c.csv_every); }},
      {{"snapshot_every", "0", "steps between snapshots (0: first and last only)"},
       [](FlowConfig& c, std::string_view v) { c.snapshot_every = parse_long(v); },
       [](const FlowConfig& c) { return std::to_string(c.snapshot_every); }},
      {{"eps_H", "1e-08", "mean convexity guard"},
       [](FlowConfig& c, std::string_view v) { c.guards.eps_H = parse_double(v); },
       [](const FlowConfig& c) { return shortest(c.guards.eps_H); }},
      {{"eps_spacelike", "1e-10", "spacelike guard"},
       [](FlowConfig& c, std::string_view v) { c.guards.eps_spacelike = parse_double(v); },
       [](const FlowConfig& c) { return shortest(c.guards.eps_spacelike); }},
      {{"route_tol", "1e-10", "u-form vs phi-form rhs agreement"},
       [](FlowConfig& c, std::string_view v) { c.guards.route_tol = parse_double(v); },
       [](const FlowConfig& c) { return shortest(c.guards.route_tol); }},
      {{"tol_c0", "auto", "C0 sandwich slack (auto: 1e-6 + h^2)"},
       [](FlowConfig& c, std::string_view v) { c.tolerances.c0 = parse_auto(v); },
       [](const FlowConfig& c) { return render_auto(c.tolerances.c0); }},
      {{"tol_phidot", "auto", "phidot bound slack (auto: 1e-6 + h^2)"},
       [](FlowConfig& c, std::string_view v) { c.tolerances.phidot = parse_auto(v); },
       [](const FlowConfig& c) { return render_auto(c.tolerances.phidot); }},
      {{"tol_grad", "auto", "gradient bound slack (auto: 1e-6 + h^2)"},
       [](FlowConfig& c, std::string_view v) { c.tolerances.gradient = parse_auto(v); },
       [](const FlowConfig& c) { return render_auto(c.tolerances.gradient); }},
      {{"h_theta_ceiling", "1000000", "upper bound for H Theta"},
       [](FlowConfig& c, std::string_view v) { c.tolerances.h_theta_ceiling = parse_double(v); },
       [](const FlowConfig& c) { return shortest(c.tolerances.h_theta_ceiling); }},
      {{"tol_area", "0.005", "area law |A(t)/A(0) - e^-t|"},
       [](FlowConfig& c, std::string_view v) { c.tolerances.area = parse_double(v); },
       [](const FlowConfig& c) { return shortest(c.tolerances.area); }},
      {{"tol_conv", "1e-06", "final oscillation of the rescaled graph"},
       [](FlowConfig& c, std::string_view v) { c.tolerances.conv = parse_double(v); },
       [](const FlowConfig& c) { return shortest(c.tolerances.conv); }},
      {{"tol_rescaled_area", "0.005", "relative drift of the rescaled area"},
       [](FlowConfig& c, std::string_view v) { c.tolerances.rescaled_area = parse_double(v); },
       [](const FlowConfig& c) { return shortest(c.tolerances.rescaled_area); }},
      {{"tol_rinf", "0.001", "relative error of the limit radius identity"},
       [](FlowConfig& c, std::string_view v) { c.tolerances.r_inf = parse_double(v); },
       [](const FlowConfig& c) { return shortest(c.tolerances.r_inf); }},
      {{"tol_bracket", "1e-09", "relative slack of the limit radius bracket"},
       [](FlowConfig& c, std::string_view v) { c.tolerances.bracket = parse_double(v); },
       [](const FlowConfig& c) { return shortest(c.tolerances.bracket); }},
      {{"tol_oracle", "1e-06", "oracle-compare relative error"},
       [](FlowConfig& c, std::string_view v) { c.tolerances.oracle = parse_double(v); },
       [](const FlowConfig& c) { return shortest(c.tolerances.oracle); }},
  };
  return specs;
}

const KeySpec* find_key(std::string_view name) {
  for (const auto& s : key_specs()) {
    if (s.key.name == name) return &s;
  }
  return nullptr;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& s : key_specs()) out.push_back(s.key);
    return out;
  }();
  return keys;
}

ConfigDocument ConfigDocument::parse(std::string_view text) {
  ConfigDocument doc;
  int line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty() || value.empty()) throw ConfigError("expected 'key = value'", line_no);
    if (!find_key(key)) throw ConfigError("unknown key '" + key + "'", line_no);
    if (doc.entries_.count(key)) throw ConfigError("duplicate key '" + key + "'", line_no);
    doc.entries_[key] = Entry{value, line_no};
  }
  return doc;
}

ConfigDocument ConfigDocument::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void ConfigDocument::set(const std::string& key, std::string value) {
  if (!find_key(key)) throw ConfigError("unknown option '--" + key + "'");
  entries_[key] = Entry{std::move(value), 0};
}

FlowConfig resolve_config(const ConfigDocument& doc) {
  FlowConfig cfg;
  for (const auto& spec : key_specs()) spec.set(cfg, spec.key.default_value);
  for (const auto& [key, entry] : doc.entries()) {
    try {
      find_key(key)->set(cfg, entry.value);
    } catch (const ConfigError& e) {
      if (entry.line > 0) throw ConfigError(e.what(), entry.line);
      throw ConfigError("--" + key + ": " + e.what());
    }
  }
  validate(cfg);
  build_grid(cfg.grid);
  return cfg;
}

FlowConfig parse_config(const std::string& path, const std::vector<std::pair<std::string, std::string>>& overrides) {
  ConfigDocument doc = path.empty() ? ConfigDocument{} : ConfigDocument::load(path);
  for (const auto& [k, v] : overrides) doc.set(k, v);
  return resolve_config(doc);
}

std::string render_config(const FlowConfig& config) {
  std::string out;
  for (const auto& spec : key_specs()) out += spec.key.name + " = " + spec.get(config) + "\n";
  return out;
}

std::string format_record(const TrajectoryRecord& r) {
  const double fields[] = {r.t,          r.min_u,       r.max_u,      r.min_phi,       r.max_phi,
                           r.min_phidot, r.max_phidot,  r.max_grad_phi, r.min_H_theta, r.max_H_theta,
                           r.area,       r.rescaled_area, r.osc_rescaled_u, r.dt_used};
  std::string line;
  for (std::size_t i = 0; i < std::size(fields); ++i) {
    if (i) line += ',';
    line += fmt17(fields[i]);
  }
  return line;
}

CsvWriter::CsvWriter(const std::string& path) : file_(std::fopen(path.c_str(), "w")), path_(path) {
  if (!file_) throw ConfigError("cannot write '" + path + "'");
  std::fprintf(file_, "%s\n", std::string(kTrajectoryHeader).c_str());
}

CsvWriter::~CsvWriter() {
  if (file_) std::fclose(file_);
}

void CsvWriter::write(const TrajectoryRecord& r) {
  if (any_ && !(r.t > last_t_)) throw std::logic_error("trajectory rows must be strictly increasing in t");
  std::fprintf(file_, "%s\n", format_record(r).c_str());
  std::fflush(file_);
  last_t_ = r.t;
  any_ = true;
}

void emit_csv(const std::string& path, const std::vector<TrajectoryRecord>& records) {
  CsvWriter w(path);
  for (const auto& r : records) w.write(r);
}

std::vector<TrajectoryRecord> read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read trajectory '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || trim(line) != kTrajectoryHeader) {
    throw ConfigError("trajectory '" + path + "' has an unexpected header", 1);
  }
  std::vector<TrajectoryRecord> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> v;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      v.push_back(parse_double(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (v.size() != 14) throw ConfigError("expected 14 columns", line_no);
    out.push_back(TrajectoryRecord{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11],
                                   v[12], v[13]});
  }
  return out;
}

void emit_snapshot(const std::string& path, const GraphState& state, const FlowOperator& op) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw ConfigError("cannot write '" + path + "'");
  const Grid& g = op.grid();
  const GridConfig& gc = g.config();
  std::fprintf(f, "# imcf-snapshot t=%.17g c=%.17g flow=%s mode=%s n=%d rho_max=%.17g cells=%d cells_theta=%d\n",
               state.t, state.c, to_string(state.mode).c_str(), to_string(gc.mode).c_str(), gc.n, gc.rho_max,
               gc.cells, gc.cells_theta);
  std::fprintf(f, g.mode() == GridMode::Radial ? "rho,u,v,H,grad_phi\n" : "r,theta,u,v,H,grad_phi\n");
  for (int k = 0; k < g.interior_size(); ++k) {
    const NodeEval e = op.eval_node(state.u.values(), k);
    const double v = std::sqrt(std::max(0.0, e.terms.v_sq));
    const double H = e.terms.den / (e.u * v);
    const int i = k / g.cells_theta();
    if (g.mode() == GridMode::Radial) {
      std::fprintf(f, "%.17g,", g.radius(i));
    } else {
      std::fprintf(f, "%.17g,%.17g,", g.radius(i), g.angle(k % g.cells_theta()));
    }
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g\n", e.u, v, H, std::sqrt(e.terms.grad_phi_sq));
  }
  std::fclose(f);
}

GraphState load_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read snapshot '" + path + "'");
  std::string meta;
  std::getline(in, meta);
  if (!meta.starts_with("# imcf-snapshot ")) throw ConfigError("not a snapshot file", 1);
  std::map<std::string, std::string> kv;
  std::istringstream ms(meta.substr(16));
  std::string tok;
  while (ms >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ConfigError("bad snapshot metadata", 1);
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  for (const char* key : {"t", "c", "flow", "mode", "n", "rho_max", "cells", "cells_theta"}) {
    if (!kv.count(key)) throw ConfigError(std::string("snapshot metadata lacks ") + key, 1);
  }
  GridConfig gc;
  gc.mode = kv["mode"] == "disk" ? GridMode::Disk : GridMode::Radial;
  gc.n = parse_int(kv["n"]);
  gc.rho_max = parse_double(kv["rho_max"]);
  gc.cells = parse_int(kv["cells"]);
  gc.cells_theta = parse_int(kv["cells_theta"]);

  GraphState s;
  s.t = parse_double(kv["t"]);
  s.c = parse_double(kv["c"]);
  s.mode = kv["flow"] == "rescaled" ? FlowMode::Rescaled : FlowMode::Raw;
  s.u = Field(build_grid(gc));
  const int u_col = gc.mode == GridMode::Radial ? 1 : 2;
  std::string line;
  std::getline(in, line);  // column header
  int k = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (k >= s.u.grid().interior_size()) throw ConfigError("snapshot has too many rows");
    std::string_view rest = line;
    for (int col = 0; col < u_col; ++col) rest = rest.substr(rest.find(',') + 1);
    s.u.interior(k++) = parse_double(rest.substr(0, rest.find(',')));
  }
  if (k != s.u.grid().interior_size()) throw ConfigError("snapshot has too few rows");
  fill_neumann_ghosts(s.u);
  return s;
}

namespace {

std::filesystem::path prepare_out_dir(const FlowConfig& config) {
  std::filesystem::path dir(config.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir / "snapshots", ec);
  if (ec) throw ConfigError("cannot create output directory '" + config.out_dir + "': " + ec.message());
  std::ofstream resolved(dir / "config.resolved");
  if (!resolved) throw ConfigError("cannot write '" + (dir / "config.resolved").string() + "'");
  resolved << render_config(config);
  return dir;
}

bool hard_failure(const InvariantReport& rep) {
  for (const char* name : {"c0", "phidot", "gradient", "h_theta"}) {
    const CheckResult* c = rep.find(name);
    if (c && c->verdict == Verdict::Fail) return true;
  }
  return false;
}

void report_singularity(const SingularityError& e, std::ostream& out, const std::filesystem::path* dir) {
  out << "singularity guard: " << e.what() << "\n";
  if (dir) {
    std::ofstream diag(*dir / "diagnostic.txt");
    diag << "guard=" << (dynamic_cast<const SpacelikeViolation*>(&e) ? "spacelike" : "mean_convexity")
         << "\nt=" << fmt17(e.time()) << "\nnode=" << e.node() << "\nvalue=" << fmt17(e.value()) << "\nmessage="
         << e.what() << "\n";
  }
}

ConvergenceReport convergence_of(const EvolveResult& res) {
  const GraphState& s = res.final_state;
  RescaledFinal fin{s.t, s.u.min_interior(), s.u.max_interior()};
  if (s.mode == FlowMode::Raw) {
    const double inv = 1.0 / theta(s.t, s.c, s.n());
    fin.min_rescaled_u *= inv;
    fin.max_rescaled_u *= inv;
  }
  return check_rescaled_convergence(res.records, fin, ConvergenceInputs{s.c, s.n(), res.base_area}, res.tolerances);
}

}  // namespace

int cmd_run(const FlowConfig& config, std::ostream& out) {
  const auto dir = prepare_out_dir(config);
  CsvWriter csv((dir / "trajectory.csv").string());
  std::unique_ptr<FlowOperator> snapshot_op;
  EvolveObserver obs;
  obs.on_record = [&](const TrajectoryRecord& r) { csv.write(r); };
  obs.on_snapshot = [&](const GraphState& s, long step) {
    if (!snapshot_op) snapshot_op = std::make_unique<FlowOperator>(s.u.grid_ptr(), config.guards);
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%08ld.csv", step);
    emit_snapshot((dir / "snapshots" / name).string(), s, *snapshot_op);
  };

  EvolveResult res;
  try {
    res = evolve(config, obs);
  } catch (const SingularityError& e) {
    report_singularity(e, out, &dir);
    return static_cast<int>(ExitCode::SingularityGuard);
  } catch (const MonitorFailure& e) {
    out << "monitor failure: " << e.what() << "\n";
    return static_cast<int>(ExitCode::MonitorFailure);
  }

  InvariantReport rep = res.report;
  if (config.flow == FlowMode::Rescaled) {
    const ConvergenceReport conv = convergence_of(res);
    for (const auto& c : {conv.oscillation, conv.area_constancy, conv.r_inf_identity, conv.r_inf_bracket,
                          conv.overall}) {
      rep.checks.push_back(c);
    }
  }
  std::ofstream(dir / "report.txt") << rep.to_text();
  out << to_string(config.flow) << " flow: " << res.steps << " steps to t = " << fmt17(res.final_state.t) << ", c = "
      << fmt17(res.final_state.c) << "\n"
      << rep.to_text();
  return hard_failure(res.report) ? static_cast<int>(ExitCode::MonitorFailure) : 0;
}

int cmd_verify(const FlowConfig& config, const std::optional<std::string>& trajectory, std::ostream& out) {
  if (trajectory) {
    const auto records = read_trajectory_csv(*trajectory);
    if (records.empty()) throw ConfigError("trajectory '" + *trajectory + "' has no rows");
    const auto grid = build_grid(config.grid);
    const InvariantReport rep = record_checks(records, config.grid.n, effective_tolerances(config, *grid));
    out << rep.to_text();
    return rep.all_pass() ? 0 : static_cast<int>(ExitCode::MonitorFailure);
  }

  InvariantReport rep;
  try {
    FlowConfig raw = config;
    raw.flow = FlowMode::Raw;
    const EvolveResult res = evolve(raw);
    rep = res.report;

    FlowConfig rescaled = config;
    rescaled.flow = FlowMode::Rescaled;
    rescaled.t_end = config.t_end_rescaled;
    const EvolveResult res2 = evolve(rescaled);
    const ConvergenceReport conv = convergence_of(res2);
    rep.checks.push_back(conv.overall);
  } catch (const SingularityError& e) {
    report_singularity(e, out, nullptr);
    return static_cast<int>(ExitCode::SingularityGuard);
  } catch (const MonitorFailure& e) {
    out << "monitor failure: " << e.what() << "\n";
    return static_cast<int>(ExitCode::MonitorFailure);
  }
  out << rep.to_text();
  return rep.all_pass() ? 0 : static_cast<int>(ExitCode::MonitorFailure);
}

int cmd_oracle_compare(const FlowConfig& config, std::ostream& out) {
  FlowConfig cfg = config;
  cfg.flow = FlowMode::Raw;
  cfg.u0.kind = InitialData::Kind::Constant;
  double worst = 0.0;
  const int n = cfg.grid.n;
  auto relative = [&](double t, double u) {
    const double exact = oracle_round(cfg.u0.r0, n, t);
    return std::abs(u - exact) / exact;
  };
  EvolveResult res;
  try {
    res = evolve(cfg);
  } catch (const SingularityError& e) {
    report_singularity(e, out, nullptr);
    return static_cast<int>(ExitCode::SingularityGuard);
  }
  for (const auto& r : res.records) worst = std::max({worst, relative(r.t, r.min_u), relative(r.t, r.max_u)});
  const GraphState& s = res.final_state;
  worst = std::max({worst, relative(s.t, s.u.min_interior()), relative(s.t, s.u.max_interior())});
  char buf[256];
  std::snprintf(buf, sizeof buf, "oracle-compare: R0 = %.17g, n = %d, t_end = %.17g, steps = %ld\n"
                "max relative error = %.6e (tolerance %.1e)\n",
                cfg.u0.r0, n, s.t, res.steps, worst, cfg.tolerances.oracle);
  out << buf;
  return worst < cfg.tolerances.oracle ? 0 : static_cast<int>(ExitCode::MonitorFailure);
}

int cmd_geometry_check(std::ostream& out) {
  const InvariantReport rep = checks::run_all();
  out << rep.to_text();
  return rep.all_pass() ? 0 : static_cast<int>(ExitCode::MonitorFailure);
}

}  // namespace imcf
