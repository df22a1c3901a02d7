#include "elsim/diagnostics.hpp"

#include <cmath>
#include <numbers>

#include "elsim/errors.hpp"
#include "elsim/spectral.hpp"

namespace elsim {

namespace {

double pointwise_power_mean(const TensorField& t, double r) {
  const std::size_t np = t.points();
  double acc = 0.0;
  for (std::size_t p = 0; p < np; ++p) {
    double q = 0.0;
    for (std::size_t c = 0; c < t.components(); ++c) q += t.component(c)[p] * t.component(c)[p];
    acc += r == 4.0 ? q * q : std::pow(q, 0.5 * r);
  }
  return acc / static_cast<double>(np);
}

void fill_energies(EnergyReport& e, const FieldState& s, const TensorField& grad_d,
                   const ScalarField& W) {
  e.time = s.time;
  e.E_kinetic = 0.5 * inner(s.u, s.u);
  e.E_elastic = 0.5 * inner(grad_d, grad_d);
  e.E_penalty = mean(W.values());
  e.E_total = e.E_kinetic + e.E_elastic + e.E_penalty;
}

void require_same_grid(const FieldState& a, const FieldState& b) {
  if (!a.grid().same_shape(b.grid())) {
    throw GridMismatchError("energy audit: states live on different grids");
  }
}

}  // namespace

EnergyReport total_energy(const ElModel& model, const FieldState& s) {
  EnergyReport e;
  const auto grad_d = gradient(s.d);
  const auto pen = model.penalty(s.d);
  fill_energies(e, s, grad_d, pen.W_val);
  return e;
}

EnergyReport dissipation_report(const ElModel& model, const FieldState& s,
                                const std::optional<Regularization>& reg) {
  return dissipation_report(model, s, model.bundle(s), reg);
}

EnergyReport dissipation_report(const ElModel& model, const FieldState& s,
                                const ConstitutiveBundle& b,
                                const std::optional<Regularization>& reg) {
  const auto& c = model.coefficients();
  EnergyReport e;
  fill_energies(e, s, b.grad_d, b.W_val);

  e.norm2_Ad = inner(b.Ad, b.Ad);
  e.norm2_N = inner(b.N, b.N);
  const double n_ad = inner(b.N, b.Ad);
  const double h2 = inner(b.h, b.h);

  e.D_mu1 = c.mu1 * inner(b.dAd, b.dAd);
  e.D_visc = 0.5 * c.mu4 * inner(b.grad_u, b.grad_u);
  e.D_Ad = (c.mu5 + c.mu6) * e.norm2_Ad;
  e.D_N = -c.lambda1 * e.norm2_N;
  e.D_cross = -(c.lambda2 - c.mu2 - c.mu3) * n_ad;
  e.D_case1_director = -h2 / c.lambda1;
  e.D_case1_Ad = (c.mu5 + c.mu6 + c.lambda2 * c.lambda2 / c.lambda1) * e.norm2_Ad;
  e.D_reg = reg ? pointwise_power_mean(b.grad_u, reg->r) / reg->max_mode : 0.0;
  return e;
}

void apply_energy_residuals(const EnergyReport& prev, EnergyReport& next, double dt) {
  if (!(dt > 0.0)) throw ParameterError("energy audit: dt must be positive");
  const double rate = (next.E_total - prev.E_total) / dt;
  next.residual_general = rate + prev.dissipation_general();
  next.residual_case1 = rate + prev.dissipation_case1();
}

EnergyReport energy_law_audit(const ElModel& model, const FieldState& prev, const FieldState& next,
                              double dt, const std::optional<Regularization>& reg) {
  require_same_grid(prev, next);
  const auto before = dissipation_report(model, prev, reg);
  auto out = before;
  const auto after = total_energy(model, next);
  out.time = after.time;
  out.E_total = after.E_total;
  out.E_kinetic = after.E_kinetic;
  out.E_elastic = after.E_elastic;
  out.E_penalty = after.E_penalty;
  apply_energy_residuals(before, out, dt);
  return out;
}

bool case2_lower_bound_check(const EnergyReport& report, double eta, double tol) {
  const double lhs = report.D_N + report.D_cross + report.D_Ad;
  return lhs >= eta * (report.norm2_Ad + report.norm2_N) - tol;
}

double quantity_A(const ElModel& model, const FieldState& s) {
  const auto b = model.bundle(s);
  return inner(b.grad_u, b.grad_u) + inner(b.h, b.h);
}

double quantity_Ys(const FieldState& s, double sobolev_index) {
  const double a = sobolev_norm(s.u, sobolev_index);
  const double g = sobolev_gradient_norm(s.d, sobolev_index);
  return a * a + g * g;
}

MonitorSample sample_sup_norms(const FieldState& s) {
  return MonitorSample{s.time, sup_norm(curl(s.u)), sup_norm(gradient(s.d)),
                       sup_norm(gradient(s.u))};
}

BlowupMonitorState blowup_update(BlowupMonitorState mon, const ElModel& model,
                                 const FieldState& s) {
  if (!mon.history.empty() && !(s.time > mon.history.back().time)) {
    throw ParameterError("blow-up monitor: sample times must increase strictly");
  }
  const auto now = sample_sup_norms(s);
  if (!mon.history.empty()) {
    const auto& last = mon.history.back();
    const double h = now.time - last.time;
    const auto f = [](const MonitorSample& m) {
      const double g2 = m.sup_grad_d * m.sup_grad_d;
      return m.sup_curl_u + g2 * g2;
    };
    mon.B_integral += 0.5 * h * (f(last) + f(now));
    mon.B_vorticity_integral += 0.5 * h * (last.sup_curl_u + now.sup_curl_u);
  }
  mon.history.push_back(now);

  const auto& c = model.coefficients();
  const double gd = now.sup_grad_d;
  const double m56 = c.mu5 + c.mu6;
  mon.G_bracket = 1.0 + now.sup_curl_u + gd * gd + m56 * m56 * std::pow(gd, 8.0 / 3.0) +
                  c.mu1 * gd * gd * gd * gd;

  const auto b = model.bundle(s);
  mon.A_qty = inner(b.grad_u, b.grad_u) + inner(b.h, b.h);
  mon.Y3 = quantity_Ys(s, 3.0);
  const double curl_l2 = l2_norm(curl(s.u));
  const double h3 = sobolev_norm(s.u, 3.0);
  mon.logsob_ratio =
      now.sup_grad_u / (1.0 + curl_l2 + now.sup_curl_u * std::log(std::numbers::e + h3));
  return mon;
}

DiagnosticsRecorder::DiagnosticsRecorder(ElModel model, std::optional<Regularization> reg,
                                         double dt, std::int64_t cadence,
                                         double monotonicity_slack, std::int64_t final_step)
    : model_(std::move(model)),
      reg_(reg),
      dt_(dt),
      cadence_(cadence < 1 ? 1 : cadence),
      slack_(monotonicity_slack),
      final_step_(final_step) {
  if (!(dt > 0.0)) throw ParameterError("diagnostics: dt must be positive");
}

bool DiagnosticsRecorder::records(std::int64_t step) const {
  return step % cadence_ == 0 || step == final_step_;
}

void DiagnosticsRecorder::observe(const FieldState& s, std::int64_t step) {
  if (prev_ && step != prev_step_ + 1) {
    throw ParameterError("diagnostics recorder must observe every step in order");
  }
  const bool record = records(step);
  // Channels are needed for the row itself and for the residual of the next row.
  const bool channels = record || records(step + 1);
  auto report = channels ? dissipation_report(model_, s, reg_) : total_energy(model_, s);

  if (prev_) {
    const double increase = report.E_total - prev_->E_total;
    if (increase > max_increase_) max_increase_ = increase;
    if (increase > slack_) {
      ++violations_;
      pending_violation_ = true;
    }
    if (prev_->has_channels()) apply_energy_residuals(*prev_, report, dt_);
  }

  if (record) {
    monitor_ = blowup_update(std::move(monitor_), model_, s);
    DiagnosticRow row;
    row.step = step;
    row.energy = report;
    row.sample = monitor_.history.back();
    row.B_integral = monitor_.B_integral;
    row.G_bracket = monitor_.G_bracket;
    row.Y3 = monitor_.Y3;
    row.A_qty = monitor_.A_qty;
    row.logsob_ratio = monitor_.logsob_ratio;
    row.energy_violation = pending_violation_;
    pending_violation_ = false;
    rows_.push_back(std::move(row));
  }

  prev_ = std::move(report);
  prev_step_ = step;
}

}  // namespace elsim
