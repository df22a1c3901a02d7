#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "elsim/coeffs.hpp"
#include "elsim/solver.hpp"

namespace elsim {

struct GridConfig {
  int dim = 2;
  int n = 32;
  bool operator==(const GridConfig&) const = default;
};

struct CoefficientConfig {
  enum class Mode { Alpha, Explicit };
  Mode mode = Mode::Alpha;
  double alpha = 0.5;
  double nu = 1.0;
  double epsilon = 0.1;
  /// Used in explicit mode; its epsilon is ignored in favour of `epsilon`.
  LeslieCoefficients values;

  /// The coefficient set this block describes. Throws ParameterError for an
  /// invalid alpha preset.
  LeslieCoefficients resolve() const;
  bool operator==(const CoefficientConfig&) const = default;
};

struct InitialConditionConfig {
  /// quiescent | taylor-green-uniform-director | perturbed-director | snapshot
  std::string preset = "quiescent";
  /// Perturbation size of the perturbed-director preset.
  double amplitude = 0.1;
  /// Largest |k_j| in the random perturbation.
  int modes = 2;
  /// Taylor-Green velocity amplitude.
  double velocity_amplitude = 1.0;
  std::string u_path;
  std::string d_path;
  bool operator==(const InitialConditionConfig&) const = default;
};

struct DiagnosticsConfig {
  std::int64_t cadence = 1;
  std::string output_dir = "elsim-out";
  /// Snapshot every this many steps; 0 writes only the final state.
  std::int64_t snapshot_every = 0;
  double monotonicity_slack = 1e-8;
  bool operator==(const DiagnosticsConfig&) const = default;
};

struct RunConfig {
  GridConfig grid;
  CoefficientConfig coefficients;
  TimeStepperConfig stepper;
  RegularizationConfig regularization;
  InitialConditionConfig initial;
  DiagnosticsConfig diagnostics;
  std::uint64_t seed = 1;

  /// Range checks that need no grid or file access. Throws ConfigError.
  void validate(const std::string& source = "<config>") const;
  bool operator==(const RunConfig&) const = default;
};

/// Parses the INI-style grammar documented in docs/config.md. `source` names
/// the input in error messages. Throws ConfigError with line and field.
RunConfig parse_config(std::string_view text, const std::string& source = "<config>");
/// Reads and parses a file. Relative snapshot paths are resolved against the
/// file's directory.
RunConfig load_config(const std::filesystem::path& path);
/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

/// FNV-1a 64-bit hash of the canonical text, printed as 16 hex digits.
std::string config_hash(const RunConfig& c);

/// ELSIM_OUTPUT_DIR if set and non-empty, else the configured directory.
std::string effective_output_dir(const RunConfig& c);

}  // namespace elsim
