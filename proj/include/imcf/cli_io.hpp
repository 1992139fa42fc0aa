#pragma once

// Configuration documents, trajectory/snapshot files and the subcommands
// behind the `imcf` executable.

#include "imcf/flow_engine.hpp"

#include <cstdio>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace imcf {

struct ConfigKey {
  std::string name;
  std::string default_value;
  std::string help;
};

/// Every accepted key, in the order config.resolved lists them.
const std::vector<ConfigKey>& config_keys();

/// Flat `key = value` lines; `#` starts a comment. Unknown keys and
/// malformed lines raise ConfigError carrying the line number.
class ConfigDocument {
 public:
  struct Entry {
    std::string value;
    int line = 0;  // 0: set from the command line
  };

  static ConfigDocument parse(std::string_view text);
  static ConfigDocument load(const std::string& path);

  /// Overrides from the command line (key with underscores).
  void set(const std::string& key, std::string value);
  const std::map<std::string, Entry>& entries() const { return entries_; }

 private:
  std::map<std::string, Entry> entries_;
};

/// Defaults, then the document.
FlowConfig resolve_config(const ConfigDocument& doc);

/// Defaults <- file (if non-empty path) <- overrides.
FlowConfig parse_config(const std::string& path, const std::vector<std::pair<std::string, std::string>>& overrides);

/// Fully resolved config in the same `key = value` format.
std::string render_config(const FlowConfig& config);

// Trajectory CSV: fixed header, %.17g values, one row per record.
inline constexpr std::string_view kTrajectoryHeader =
    "t,min_u,max_u,min_phi,max_phi,min_phidot,max_phidot,max_grad_phi,min_H_theta,max_H_theta,area,"
    "rescaled_area,osc_rescaled_u,dt_used";

std::string format_record(const TrajectoryRecord& r);

/// Streams records to a file. Throws ConfigError if the path is unwritable.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void write(const TrajectoryRecord& r);

 private:
  std::FILE* file_ = nullptr;
  std::string path_;
  double last_t_ = -1.0;
  bool any_ = false;
};

void emit_csv(const std::string& path, const std::vector<TrajectoryRecord>& records);
std::vector<TrajectoryRecord> read_trajectory_csv(const std::string& path);

/// Per-node snapshot CSV: a `#` metadata line, then rho (or r,theta), u, v,
/// H, grad_phi. u is the evolved field (u~ for rescaled flows).
void emit_snapshot(const std::string& path, const GraphState& state, const FlowOperator& op);
GraphState load_snapshot(const std::string& path);

// Subcommands; they return the process exit code and log to `out`.
int cmd_run(const FlowConfig& config, std::ostream& out);
int cmd_verify(const FlowConfig& config, const std::optional<std::string>& trajectory, std::ostream& out);
int cmd_oracle_compare(const FlowConfig& config, std::ostream& out);
int cmd_geometry_check(std::ostream& out);

}  // namespace imcf
