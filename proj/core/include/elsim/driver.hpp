#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "elsim/config.hpp"
#include "elsim/diagnostics.hpp"
#include "elsim/solver.hpp"

namespace elsim {

/// Process exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitNotDissipative = 1,
  kExitBlowup = 2,
  kExitConfigError = 3,
  kExitRuntimeError = 4,
};

struct RunOutcome {
  Trajectory trajectory;
  std::vector<DiagnosticRow> rows;
  BlowupMonitorState monitor;
  std::int64_t energy_violations = 0;
  double max_energy_increase = 0.0;
  double wall_seconds = 0.0;
  std::vector<std::filesystem::path> files;

  /// Mean of |residual_case1| over the rows that carry a residual; with
  /// cadence 1 this is the time average of the residual over the run.
  double mean_abs_residual_case1() const;
  double max_abs_residual_case1() const;
};

/// Runs a configuration end to end. Writes timeseries.csv, run_manifest.json
/// and snapshots/ into `out_dir` unless it is empty. `t_end` is the absolute
/// end time, so a snapshot start resumes where it left off. Throws
/// RegimeError for non-dissipative coefficients.
RunOutcome execute_run(const RunConfig& cfg, const std::filesystem::path& out_dir = {});

enum class SweepAxis { Dt, M, N };
/// "dt", "M" or "n". Throws ParameterError otherwise.
SweepAxis parse_sweep_axis(std::string_view name);
std::string to_string(SweepAxis axis);

struct SweepRow {
  double value = 0.0;
  std::int64_t steps = 0;
  double E_final = kNotEvaluated;
  double residual_max = kNotEvaluated;
  double residual_mean = kNotEvaluated;
  /// L2 distance of the final (u, d) to the previous member's, on the coarser grid.
  double diff_prev = kNotEvaluated;
  /// M axis only: L2 distance of the final state to the unregularised run.
  double gap_plain = kNotEvaluated;
  bool failed = false;
  std::string error;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::Dt;
  std::vector<SweepRow> rows;
  /// dt: log-log slope of residual_mean against dt. M: minus the slope of
  /// gap_plain against M. n: NaN.
  double fitted_order = kNotEvaluated;
  /// M axis: gap_plain strictly decreasing along the given order.
  bool gap_monotone = false;
  bool any_failed = false;
};

/// Runs one member per value in its own subdirectory of `out_dir` (none if
/// empty). Member failures are recorded, not thrown. Throws ParameterError for
/// an empty value list.
SweepResult run_sweep(const RunConfig& base, SweepAxis axis, const std::vector<double>& values,
                      const std::filesystem::path& out_dir = {});

/// Least-squares slope of log(y) against log(x) over pairs with positive finite entries.
double fitted_log_slope(const std::vector<double>& x, const std::vector<double>& y);

struct CliOptions {
  std::string config_path;
  /// Overrides both the config file and ELSIM_OUTPUT_DIR when non-empty.
  std::string output_dir;
  /// Overrides diagnostics.cadence when positive.
  std::int64_t cadence = 0;
  bool structured = false;
  int threads = 1;
};

int cli_validate(const CliOptions& opts, std::ostream& out, std::ostream& err);
int cli_run(const CliOptions& opts, std::ostream& out, std::ostream& err);
int cli_sweep(const CliOptions& opts, const std::string& axis,
              const std::vector<std::string>& values, std::ostream& out, std::ostream& err);
int cli_inspect(const std::vector<std::string>& paths, bool structured, std::ostream& out,
                std::ostream& err);

}  // namespace elsim
