#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "elsim/errors.hpp"
#include "elsim/physics.hpp"
#include "elsim/spectral.hpp"

namespace elsim {

enum class Scheme { SemiImplicitEuler, ImexBdf2 };

std::string to_string(Scheme s);
/// "semi-implicit-euler" or "imex-bdf2"; throws ParameterError otherwise.
Scheme parse_scheme(std::string_view name);

struct TimeStepperConfig {
  double dt = 1e-3;
  double t_end = 0.1;
  Scheme scheme = Scheme::SemiImplicitEuler;
  /// Keep the state inside the 2/3-rule space and truncate every product.
  bool dealias = true;
  bool reconstruct_pressure = false;
  /// Stop with BlowupDetected once sup|curl u| exceeds this; <= 0 disables.
  double vorticity_cap = 0.0;

  /// Throws ParameterError unless dt > 0 and t_end >= 0.
  void validate() const;
  /// Number of dt steps covering [0, t_end].
  std::int64_t step_count() const;

  bool operator==(const TimeStepperConfig&) const = default;
};

struct RegularizationConfig {
  bool enabled = false;
  /// Convective projection mode count.
  int M = 8;
  /// r-Laplacian exponent, r > 10/3.
  double r = 4.0;

  /// Throws ParameterError unless 1 <= M <= n/2 and r > 10/3.
  void validate(const SpectralGrid& grid) const;
  /// The Galerkin dimension is the grid itself: N = n/2 resolvable modes per axis.
  static int galerkin_modes(const SpectralGrid& grid) { return grid.n() / 2; }
  std::optional<Regularization> active() const;

  bool operator==(const RegularizationConfig&) const = default;
};

/// NaN/Inf or the vorticity cap was hit. Carries the last finite state.
class BlowupDetected : public Error {
 public:
  BlowupDetected(const std::string& what, FieldState last_finite, std::int64_t step)
      : Error(what),
        last_finite_(std::make_shared<const FieldState>(std::move(last_finite))),
        step_(step) {}

  const FieldState& last_finite_state() const { return *last_finite_; }
  std::int64_t step() const { return step_; }

 private:
  std::shared_ptr<const FieldState> last_finite_;
  std::int64_t step_;
};

/// Semi-implicit integrator: mu4/2 Delta u and -(1/lambda1) Delta d are solved
/// exactly in Fourier space, everything else is explicit. The velocity is
/// re-projected onto divergence-free modes after every step. IMEX-BDF2 keeps
/// one step of history and starts with a semi-implicit Euler step.
class Integrator {
 public:
  /// Throws RegimeError unless the coefficients are Case 1 or Case 2.
  Integrator(const ElModel& model, TimeStepperConfig cfg, RegularizationConfig reg = {});

  FieldState step(const FieldState& s);
  void reset_history() { history_.reset(); }

  const ElModel& model() const { return model_; }
  const TimeStepperConfig& config() const { return cfg_; }
  const RegularizationConfig& regularization() const { return reg_; }
  std::int64_t steps_taken() const { return steps_; }

 private:
  struct History {
    Spectrum u;
    Spectrum d;
    Spectrum fu;
    Spectrum fd;
  };

  ElModel model_;
  TimeStepperConfig cfg_;
  RegularizationConfig reg_;
  std::optional<History> history_;
  std::int64_t steps_ = 0;
};

/// Diffusivity kappa = (r-1)/M max|grad u|^{r-2} bounding the linearised
/// r-Laplacian. Regularised steps add kappa Delta u implicitly and subtract it
/// explicitly, which keeps the explicit r-Laplacian stable at the cost of an
/// O(dt^2) per-step perturbation.
double r_laplacian_stabilization(const TensorField& grad_u, const Regularization& reg);

/// One semi-implicit Euler (or BDF2 start-up) step without history.
FieldState step(const ElModel& model, const FieldState& s, const TimeStepperConfig& cfg);
/// Same, with the mode-projected convection and r-Laplacian.
FieldState step_regularized(const ElModel& model, const FieldState& s,
                            const TimeStepperConfig& cfg, const RegularizationConfig& reg);

/// Zero-mean P solving Delta P = div[-(u.grad)u - div(grad d (.) grad d) + div sigma].
ScalarField reconstruct_pressure(const ElModel& model, const FieldState& s,
                                 const std::optional<Regularization>& reg = std::nullopt);

/// Divergence-free projection of u and, if dealiasing, 2/3-rule truncation of
/// both fields. Applied to initial conditions before a run.
FieldState prepare_initial_state(FieldState s, bool dealias);

struct RunHooks {
  /// Called with the initial state (step 0) and every `cadence` steps after,
  /// always including the final step.
  std::function<void(const FieldState&, std::int64_t)> observe;
  std::int64_t cadence = 1;
};

struct Trajectory {
  /// Final state, or the last finite state when the run blew up.
  FieldState final_state;
  std::int64_t steps = 0;
  bool blew_up = false;
  std::string blowup_reason;
};

/// Steps to t_end. Blow-up ends the run gracefully (blew_up = true); any
/// other error is rethrown with the step index and time attached.
Trajectory run(const ElModel& model, FieldState initial, const TimeStepperConfig& cfg,
               const RegularizationConfig& reg = {}, const RunHooks& hooks = {});

}  // namespace elsim
