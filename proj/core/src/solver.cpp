#include "elsim/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "elsim/coeffs.hpp"

namespace elsim {

std::string to_string(Scheme s) {
  return s == Scheme::ImexBdf2 ? "imex-bdf2" : "semi-implicit-euler";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "semi-implicit-euler") return Scheme::SemiImplicitEuler;
  if (name == "imex-bdf2") return Scheme::ImexBdf2;
  throw ParameterError("unknown scheme '" + std::string(name) +
                       "' (expected semi-implicit-euler or imex-bdf2)");
}

void TimeStepperConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ParameterError("t_end must be >= 0");
}

std::int64_t TimeStepperConfig::step_count() const {
  validate();
  // Tolerate t_end/dt landing a hair off an integer.
  return static_cast<std::int64_t>(std::ceil(t_end / dt - 1e-9));
}

void RegularizationConfig::validate(const SpectralGrid& grid) const {
  if (!enabled) return;
  if (M < 1 || M > galerkin_modes(grid)) {
    throw ParameterError("regularization M must lie in [1, n/2], got " + std::to_string(M));
  }
  if (!(r > 10.0 / 3.0)) throw ParameterError("regularization exponent r must exceed 10/3");
}

std::optional<Regularization> RegularizationConfig::active() const {
  if (!enabled) return std::nullopt;
  return Regularization{M, r};
}

namespace {

ElModel with_dealias(const ElModel& m, bool dealias) {
  auto opts = m.options();
  opts.dealias = dealias;
  return ElModel(m.coefficients(), opts);
}

}  // namespace

double r_laplacian_stabilization(const TensorField& grad_u, const Regularization& reg) {
  // Linearising |G|^{r-2} G about G gives a diffusivity of at most (r-1)|G|^{r-2}.
  const std::size_t points = grad_u.points();
  double g2max = 0.0;
  for (std::size_t p = 0; p < points; ++p) {
    double g2 = 0.0;
    for (std::size_t c = 0; c < grad_u.components(); ++c) {
      const double v = grad_u.component(c)[p];
      g2 += v * v;
    }
    g2max = std::max(g2max, g2);
  }
  return (reg.r - 1.0) / reg.max_mode * std::pow(g2max, 0.5 * (reg.r - 2.0));
}

Integrator::Integrator(const ElModel& model, TimeStepperConfig cfg, RegularizationConfig reg)
    : model_(with_dealias(model, cfg.dealias)), cfg_(cfg), reg_(reg) {
  cfg_.validate();
  const auto report = validate(model_.coefficients());
  if (!report.dissipative()) {
    throw RegimeError("coefficients satisfy neither Case 1 nor Case 2 (regime: " +
                      report.regime() + ")");
  }
}

FieldState Integrator::step(const FieldState& s) {
  if (s.d.components() != 3 || static_cast<int>(s.u.components()) != s.grid().dim()) {
    throw GridMismatchError("step: malformed state");
  }
  reg_.validate(s.grid());
  const auto reg = reg_.active();
  const auto& g = s.grid();
  const double dt = cfg_.dt;

  const auto step_index = steps_ + 1;
  std::optional<History> evaluated;
  double kappa = 0.0;
  try {
    const auto b = model_.bundle(s);
    const auto fd_real = model_.director_rhs(s, b).explicit_part;
    const auto fu_real = model_.momentum_rhs(s, b, reg).explicit_part;
    evaluated = History{Spectrum::of(s.u), Spectrum::of(s.d), Spectrum::of(fu_real),
                        Spectrum::of(fd_real)};
    if (reg) kappa = r_laplacian_stabilization(b.grad_u, *reg);
  } catch (const NonFiniteError& e) {
    throw BlowupDetected(std::string(e.what()) + " at step " + std::to_string(step_index), s,
                         step_index);
  }
  History now = std::move(*evaluated);

  const bool bdf2 = cfg_.scheme == Scheme::ImexBdf2 && history_.has_value();
  const auto k2 = g.wavenumber_squared();

  // `stab` is added implicitly and subtracted explicitly (extrapolated for BDF2).
  auto advance = [&](const Spectrum& y, const Spectrum& f, const Spectrum* y_old,
                     const Spectrum* f_old, double diffusivity, double stab) {
    Spectrum out(y.grid_ptr(), y.components());
    for (std::size_t c = 0; c < y.components(); ++c) {
      const auto yc = y.component(c);
      const auto fc = f.component(c);
      auto oc = out.component(c);
      if (bdf2) {
        const auto yo = y_old->component(c);
        const auto fo = f_old->component(c);
        for (std::size_t m = 0; m < oc.size(); ++m) {
          const double sk = stab * k2[m];
          oc[m] = (4.0 * yc[m] - yo[m] + 2.0 * dt * (2.0 * fc[m] - fo[m]) -
                   2.0 * dt * sk * (2.0 * yc[m] - yo[m])) /
                  (3.0 + 2.0 * dt * (diffusivity * k2[m] + sk));
        }
      } else {
        for (std::size_t m = 0; m < oc.size(); ++m) {
          const double sk = stab * k2[m];
          oc[m] = (yc[m] * (1.0 - dt * sk) + dt * fc[m]) / (1.0 + dt * (diffusivity * k2[m] + sk));
        }
      }
    }
    if (cfg_.dealias) out.apply_dealias_mask();
    return out;
  };

  auto u_new = advance(now.u, now.fu, bdf2 ? &history_->u : nullptr,
                       bdf2 ? &history_->fu : nullptr, model_.viscosity(), kappa);
  auto d_new = advance(now.d, now.fd, bdf2 ? &history_->d : nullptr,
                       bdf2 ? &history_->fd : nullptr, model_.director_diffusivity(), 0.0);
  u_new.project_divergence_free();

  FieldState next = FieldState::zeros(s.u.grid_ptr(), s.time + dt);
  u_new.to_real(next.u);
  d_new.to_real(next.d);

  if (!next.is_finite()) {
    throw BlowupDetected("non-finite field after step " + std::to_string(step_index), s,
                         step_index);
  }
  if (cfg_.vorticity_cap > 0.0) {
    const double w = sup_norm(curl(next.u));
    if (w > cfg_.vorticity_cap) {
      std::ostringstream msg;
      msg << "sup|curl u| = " << w << " exceeded cap " << cfg_.vorticity_cap << " at step "
          << step_index;
      throw BlowupDetected(msg.str(), s, step_index);
    }
  }

  history_ = std::move(now);
  steps_ = step_index;
  return next;
}

FieldState step(const ElModel& model, const FieldState& s, const TimeStepperConfig& cfg) {
  Integrator it(model, cfg);
  return it.step(s);
}

FieldState step_regularized(const ElModel& model, const FieldState& s,
                            const TimeStepperConfig& cfg, const RegularizationConfig& reg) {
  if (!reg.enabled) throw ParameterError("step_regularized requires an enabled regularization");
  Integrator it(model, cfg, reg);
  return it.step(s);
}

ScalarField reconstruct_pressure(const ElModel& model, const FieldState& s,
                                 const std::optional<Regularization>& reg) {
  const auto b = model.bundle(s);
  const auto force = model.momentum_force(s, b, reg);
  const auto& g = s.grid();
  const auto spec = Spectrum::of(force);
  std::vector<Complex> p(g.spectral_size(), 0.0);
  for (std::size_t m = 0; m < p.size(); ++m) {
    double kk = 0.0;
    Complex kf = 0.0;
    for (int i = 0; i < g.dim(); ++i) {
      const double ki = g.derivative_symbol(i)[m];
      kk += ki * ki;
      kf += ki * spec.component(static_cast<std::size_t>(i))[m];
    }
    // Delta P = div F  <=>  -|k|^2 P = i k.F
    if (kk > 0.0) p[m] = -Complex{0.0, 1.0} * kf / kk;
  }
  ScalarField out(s.u.grid_ptr());
  g.inverse(p, out.values());
  return out;
}

FieldState prepare_initial_state(FieldState s, bool dealias) {
  auto us = Spectrum::of(s.u);
  auto ds = Spectrum::of(s.d);
  if (dealias) {
    us.apply_dealias_mask();
    ds.apply_dealias_mask();
  }
  us.project_divergence_free();
  us.to_real(s.u);
  ds.to_real(s.d);
  return s;
}

Trajectory run(const ElModel& model, FieldState initial, const TimeStepperConfig& cfg,
               const RegularizationConfig& reg, const RunHooks& hooks) {
  Integrator it(model, cfg, reg);
  reg.validate(initial.grid());
  const auto nsteps = cfg.step_count();
  const auto cadence = std::max<std::int64_t>(hooks.cadence, 1);
  const double t0 = initial.time;

  Trajectory traj{std::move(initial), 0, false, {}};
  if (hooks.observe) hooks.observe(traj.final_state, 0);

  for (std::int64_t k = 1; k <= nsteps; ++k) {
    try {
      auto next = it.step(traj.final_state);
      // Avoid accumulating rounding in the clock.
      next.time = t0 + static_cast<double>(k) * cfg.dt;
      traj.final_state = std::move(next);
    } catch (const BlowupDetected& e) {
      traj.blew_up = true;
      traj.blowup_reason = e.what();
      return traj;
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "step " << k << " (t = " << traj.final_state.time << "): " << e.what();
      throw Error(msg.str());
    }
    traj.steps = k;
    if (hooks.observe && (k % cadence == 0 || k == nsteps)) hooks.observe(traj.final_state, k);
  }
  return traj;
}

}  // namespace elsim
