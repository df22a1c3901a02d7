#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "elsim/physics.hpp"

namespace elsim {

inline constexpr double kNotEvaluated = std::numeric_limits<double>::quiet_NaN();

/// Energies and dissipation channels of one state, plus energy-law residuals
/// when produced by an audit. Unevaluated entries are NaN.
struct EnergyReport {
  double time = 0.0;

  double E_total = 0.0;
  double E_kinetic = 0.0;
  double E_elastic = 0.0;
  double E_penalty = 0.0;

  double D_mu1 = kNotEvaluated;            ///< int mu1 |d^T A d|^2
  double D_visc = kNotEvaluated;           ///< int mu4/2 |grad u|^2
  double D_Ad = kNotEvaluated;             ///< (mu5+mu6) ||Ad||^2
  double D_N = kNotEvaluated;              ///< -lambda1 ||N||^2
  double D_cross = kNotEvaluated;          ///< -(lambda2-mu2-mu3) (N, Ad)
  double D_case1_director = kNotEvaluated; ///< -(1/lambda1) ||Delta d - grad_d W||^2
  double D_case1_Ad = kNotEvaluated;       ///< (mu5+mu6+lambda2^2/lambda1) ||Ad||^2
  double D_reg = 0.0;                      ///< (1/M) int |grad u|^r, regularised runs only

  double norm2_Ad = kNotEvaluated;
  double norm2_N = kNotEvaluated;

  double residual_general = kNotEvaluated;
  double residual_case1 = kNotEvaluated;

  bool has_channels() const { return D_visc == D_visc; }
  /// Sum of the channels in the general grouping: -dE/dt predicted by the energy law.
  double dissipation_general() const { return D_mu1 + D_visc + D_Ad + D_N + D_cross + D_reg; }
  /// Same quantity in the Case 1 grouping.
  double dissipation_case1() const {
    return D_mu1 + D_visc + D_case1_director + D_case1_Ad + D_reg;
  }
};

/// E = ||u||^2/2 + ||grad d||^2/2 + int W(d). Channels are left NaN.
EnergyReport total_energy(const ElModel& model, const FieldState& s);

/// Energies and every dissipation channel of `s`.
EnergyReport dissipation_report(const ElModel& model, const FieldState& s,
                                const std::optional<Regularization>& reg = std::nullopt);
EnergyReport dissipation_report(const ElModel& model, const FieldState& s,
                                const ConstitutiveBundle& b,
                                const std::optional<Regularization>& reg = std::nullopt);

/// residual = (E(next) - E(prev))/dt + dissipation(prev), in both groupings.
/// The right-hand side is evaluated at the previous state, so the residual is
/// O(dt) for a consistent scheme. Returned report: energies of `next`, channels
/// of `prev`, both residuals. Throws GridMismatchError for mismatched states.
EnergyReport energy_law_audit(const ElModel& model, const FieldState& prev, const FieldState& next,
                              double dt, const std::optional<Regularization>& reg = std::nullopt);

/// Fills residual_general and residual_case1 of `next` from the channels of `prev`.
void apply_energy_residuals(const EnergyReport& prev, EnergyReport& next, double dt);

/// D_N + D_cross + D_Ad >= eta (||Ad||^2 + ||N||^2) - tol.
bool case2_lower_bound_check(const EnergyReport& report, double eta, double tol = 1e-12);

/// ||grad u||^2 + ||Delta d - grad_d W(d)||^2.
double quantity_A(const ElModel& model, const FieldState& s);
/// ||Lambda^s u||^2 + ||grad Lambda^s d||^2. Throws ParameterError for s < 0.
double quantity_Ys(const FieldState& s, double sobolev_index);

struct MonitorSample {
  double time = 0.0;
  double sup_curl_u = 0.0;
  double sup_grad_d = 0.0;
  double sup_grad_u = 0.0;
};

/// Running record for the BKM-type criterion. Unknown analytic constants are 1.
struct BlowupMonitorState {
  std::vector<MonitorSample> history;
  /// int_0^t (||curl u||_inf + ||grad d||_inf^4), trapezoid on the sample times.
  double B_integral = 0.0;
  /// int_0^t ||curl u||_inf alone.
  double B_vorticity_integral = 0.0;
  /// 1 + ||curl u||_inf + ||grad d||_inf^2 + (mu5+mu6)^2 ||grad d||_inf^{8/3}
  ///   + mu1 ||grad d||_inf^4 at the latest sample.
  double G_bracket = kNotEvaluated;
  double Y3 = kNotEvaluated;
  double A_qty = kNotEvaluated;
  /// ||grad u||_inf / (1 + ||curl u|| + ||curl u||_inf ln(e + ||u||_{H^3})).
  double logsob_ratio = kNotEvaluated;
};

MonitorSample sample_sup_norms(const FieldState& s);

/// Appends the sample of `s` and advances every running quantity. Throws
/// ParameterError when s.time does not exceed the last recorded time.
BlowupMonitorState blowup_update(BlowupMonitorState mon, const ElModel& model,
                                 const FieldState& s);

/// One CSV row: energies and channels of the state at `energy.time`, the
/// residuals of the step that produced it, and the monitor after the update.
struct DiagnosticRow {
  std::int64_t step = 0;
  EnergyReport energy;
  MonitorSample sample;
  double B_integral = 0.0;
  double G_bracket = kNotEvaluated;
  double Y3 = kNotEvaluated;
  double A_qty = kNotEvaluated;
  double logsob_ratio = kNotEvaluated;
  /// E increased by more than the configured slack since the previous step.
  bool energy_violation = false;
};

/// Run hook that audits every step and records a row every `cadence` steps.
class DiagnosticsRecorder {
 public:
  /// `final_step` (if known) is always recorded, like run() does.
  DiagnosticsRecorder(ElModel model, std::optional<Regularization> reg, double dt,
                      std::int64_t cadence = 1, double monotonicity_slack = 1e-8,
                      std::int64_t final_step = -1);

  /// Must be called with consecutive states (every step, starting at step 0).
  void observe(const FieldState& s, std::int64_t step);

  const std::vector<DiagnosticRow>& rows() const { return rows_; }
  const BlowupMonitorState& monitor() const { return monitor_; }
  std::int64_t energy_violations() const { return violations_; }
  double max_energy_increase() const { return max_increase_; }

 private:
  bool records(std::int64_t step) const;

  ElModel model_;
  std::optional<Regularization> reg_;
  double dt_;
  std::int64_t cadence_;
  double slack_;
  std::int64_t final_step_;

  std::optional<EnergyReport> prev_;
  std::int64_t prev_step_ = -1;
  BlowupMonitorState monitor_;
  std::vector<DiagnosticRow> rows_;
  std::int64_t violations_ = 0;
  bool pending_violation_ = false;
  double max_increase_ = -std::numeric_limits<double>::infinity();
};

}  // namespace elsim
