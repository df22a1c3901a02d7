#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "elsim/config.hpp"
#include "elsim/diagnostics.hpp"
#include "elsim/physics.hpp"

namespace elsim {

/// Column names of the time-series CSV, units in brackets (code units: t time,
/// L length, E energy). Quantities containing an unknown analytic constant set
/// to 1 carry the suffix _C1.
const std::vector<std::string>& timeseries_columns();

/// Header plus one row per DiagnosticRow, every float with 17 significant digits.
void write_timeseries_csv(std::ostream& out, const std::vector<DiagnosticRow>& rows);
void write_timeseries_csv(const std::filesystem::path& path, const std::vector<DiagnosticRow>& rows);

/// Writes u_<step>.snap, d_<step>.snap and checkpoint_<step>.json (time, step,
/// config hash) into `dir`, optionally p_<step>.snap. Returns the written paths.
std::vector<std::filesystem::path> write_checkpoint(const std::filesystem::path& dir,
                                                    const FieldState& s, std::int64_t step,
                                                    const RunConfig& cfg,
                                                    const ScalarField* pressure = nullptr);

struct ManifestInfo {
  std::int64_t steps = 0;
  double final_time = 0.0;
  bool blew_up = false;
  std::string blowup_reason;
  double wall_seconds = 0.0;
  std::int64_t energy_violations = 0;
  double max_energy_increase = 0.0;
  BlowupMonitorState monitor;
  std::vector<std::filesystem::path> files;
};

/// Version string of this build (git describe of the source tree).
std::string build_version();

/// run_manifest.json: config echo (canonical text and hash), seed, version,
/// wall time, outcome and final monitor values.
void write_manifest(const std::filesystem::path& path, const RunConfig& cfg,
                    const ManifestInfo& info);

}  // namespace elsim
