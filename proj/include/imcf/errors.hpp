#pragma once

#include <stdexcept>
#include <string>

namespace imcf {

/// Process exit codes shared by the CLI and the error hierarchy below.
enum class ExitCode : int {
  Success = 0,
  MonitorFailure = 2,
  SingularityGuard = 3,
  ConfigError = 4,
};

/// Invalid configuration, malformed input file or unusable output path.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// A flow guard tripped: the evolving graph left the regime where the
/// equation is parabolic (lost spacelikeness or strict mean convexity).
class SingularityError : public std::runtime_error {
 public:
  SingularityError(const std::string& what, double t, long node, double value)
      : std::runtime_error(what), t_(t), node_(node), value_(value) {}
  double time() const noexcept { return t_; }
  long node() const noexcept { return node_; }
  double value() const noexcept { return value_; }

 private:
  double t_;
  long node_;
  double value_;
};

/// 1 - u^-2 |Du|^2 fell below the spacelike threshold.
class SpacelikeViolation : public SingularityError {
 public:
  using SingularityError::SingularityError;
};

/// H fell below the mean-convexity threshold.
class MeanConvexityLoss : public SingularityError {
 public:
  using SingularityError::SingularityError;
};

/// An executable invariant failed hard during a run.
class MonitorFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace imcf
