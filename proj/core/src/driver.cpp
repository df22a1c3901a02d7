#include "elsim/driver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "elsim/coeffs.hpp"
#include "elsim/errors.hpp"
#include "elsim/output.hpp"
#include "elsim/presets.hpp"
#include "elsim/snapshot.hpp"
#include "elsim/spectral.hpp"

namespace elsim {

namespace {

std::string num(double v, int digits = 17) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v + 0.0);  // + 0.0 folds -0 into 0
  return buf;
}

nlohmann::json json_number(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

/// sqrt(||u_a - u_b||^2 + ||d_a - d_b||^2), resampling the finer state onto the
/// coarser grid when the resolutions differ.
double state_distance(const FieldState& a, const FieldState& b) {
  const FieldState* fine = &a;
  const FieldState* coarse = &b;
  if (a.grid().n() < b.grid().n()) std::swap(fine, coarse);
  FieldState proj = FieldState::zeros(coarse->u.grid_ptr());
  resample_into(fine->u, proj.u);
  resample_into(fine->d, proj.d);
  proj.u -= coarse->u;
  proj.d -= coarse->d;
  return std::sqrt(inner(proj.u, proj.u) + inner(proj.d, proj.d));
}

nlohmann::ordered_json check_json(const ConstraintCheck& c) {
  nlohmann::ordered_json j;
  j["name"] = c.name;
  j["satisfied"] = c.satisfied;
  j["residual"] = c.residual;
  return j;
}

void print_regime(const LeslieCoefficients& c, const RegimeReport& r, bool structured,
                  std::ostream& out) {
  const auto form = dissipation_form(c);
  std::optional<double> eta;
  if (form.psd) eta = eta_margin(form);

  if (structured) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json coeffs;
    coeffs["lambda1"] = c.lambda1;
    coeffs["lambda2"] = c.lambda2;
    coeffs["mu1"] = c.mu1;
    coeffs["mu2"] = c.mu2;
    coeffs["mu3"] = c.mu3;
    coeffs["mu4"] = c.mu4;
    coeffs["mu5"] = c.mu5;
    coeffs["mu6"] = c.mu6;
    coeffs["epsilon"] = c.epsilon;
    j["coefficients"] = coeffs;
    auto base = nlohmann::ordered_json::array();
    for (const auto& b : r.base) base.push_back(check_json(b));
    j["base"] = base;
    j["parodi"] = check_json(r.parodi);
    j["case1_inequality"] = check_json(r.case1_inequality);
    j["case2_inequality"] = check_json(r.case2_inequality);
    j["base_ok"] = r.base_ok;
    j["parodi_holds"] = r.parodi_holds;
    j["case1"] = r.case1;
    j["case2"] = r.case2;
    auto viol = nlohmann::ordered_json::array();
    for (const auto& v : r.violations) viol.push_back(check_json(v));
    j["violations"] = viol;
    nlohmann::ordered_json f;
    f["a_nn"] = form.a_nn;
    f["a_na"] = form.a_na;
    f["a_aa"] = form.a_aa;
    f["discriminant"] = form.discriminant;
    f["psd"] = form.psd;
    f["eta"] = eta ? nlohmann::json(*eta) : nlohmann::json(nullptr);
    j["dissipation_form"] = f;
    j["regime"] = r.regime();
    j["dissipative"] = r.dissipative();
    out << j.dump(2) << '\n';
    return;
  }

  auto row = [&](const ConstraintCheck& k) {
    out << "  " << std::left << std::setw(48) << k.name << std::setw(6)
        << (k.satisfied ? "ok" : "FAIL") << num(k.residual, 6) << '\n';
  };
  out << "coefficients: lambda1=" << num(c.lambda1, 10) << " lambda2=" << num(c.lambda2, 10)
      << " mu1=" << num(c.mu1, 10) << " mu2=" << num(c.mu2, 10) << " mu3=" << num(c.mu3, 10)
      << " mu4=" << num(c.mu4, 10) << " mu5=" << num(c.mu5, 10) << " mu6=" << num(c.mu6, 10)
      << " epsilon=" << num(c.epsilon, 10) << '\n';
  out << "  " << std::left << std::setw(48) << "constraint" << std::setw(6) << "state"
      << "residual\n";
  for (const auto& b : r.base) row(b);
  row(r.parodi);
  row(r.case1_inequality);
  row(r.case2_inequality);
  out << "dissipation form: a_nn=" << num(form.a_nn, 10) << " a_na=" << num(form.a_na, 10)
      << " a_aa=" << num(form.a_aa, 10) << " psd=" << (form.psd ? "yes" : "no");
  if (eta) out << " eta=" << num(*eta, 6);
  out << '\n';
  out << "regime: " << r.regime() << '\n';
}

std::optional<RunConfig> load_or_report(const CliOptions& opts, std::ostream& err) {
  if (opts.config_path.empty()) {
    err << "error: --config is required\n";
    return std::nullopt;
  }
  try {
    auto cfg = load_config(opts.config_path);
    if (opts.cadence > 0) cfg.diagnostics.cadence = opts.cadence;
    return cfg;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const ParameterError& e) {
    err << "config error: " << opts.config_path << ": " << e.what() << '\n';
  }
  return std::nullopt;
}

std::string output_dir_for(const CliOptions& opts, const RunConfig& cfg) {
  return opts.output_dir.empty() ? effective_output_dir(cfg) : opts.output_dir;
}

}  // namespace

double RunOutcome::mean_abs_residual_case1() const {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : rows) {
    if (std::isfinite(r.energy.residual_case1)) {
      sum += std::abs(r.energy.residual_case1);
      ++count;
    }
  }
  return count ? sum / static_cast<double>(count) : kNotEvaluated;
}

double RunOutcome::max_abs_residual_case1() const {
  double m = kNotEvaluated;
  for (const auto& r : rows) {
    const double v = std::abs(r.energy.residual_case1);
    if (std::isfinite(v) && !(v <= m)) m = v;
  }
  return m;
}

RunOutcome execute_run(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  cfg.validate();
  const auto grid = SpectralGrid::create(cfg.grid.dim, cfg.grid.n);
  const auto coeffs = cfg.coefficients.resolve();
  const auto report = validate(coeffs);
  if (!report.dissipative()) {
    throw RegimeError("coefficients are neither Case 1 nor Case 2 (regime " + report.regime() +
                      ")");
  }
  ModelOptions mopts;
  mopts.dealias = cfg.stepper.dealias;
  const ElModel model(coeffs, mopts);
  const auto reg = cfg.regularization.active();

  auto initial = make_initial_state(cfg, grid);
  TimeStepperConfig stepper = cfg.stepper;
  stepper.t_end = std::max(0.0, cfg.stepper.t_end - initial.time);
  const auto nsteps = stepper.step_count();

  std::vector<std::filesystem::path> files;
  DiagnosticsRecorder recorder(model, reg, stepper.dt, cfg.diagnostics.cadence,
                               cfg.diagnostics.monotonicity_slack, nsteps);
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  const auto snap_dir = out_dir / "snapshots";

  auto checkpoint = [&](const FieldState& s, std::int64_t k) {
    if (out_dir.empty()) return;
    std::optional<ScalarField> p;
    if (cfg.stepper.reconstruct_pressure) p = reconstruct_pressure(model, s, reg);
    auto written = write_checkpoint(snap_dir, s, k, cfg, p ? &*p : nullptr);
    files.insert(files.end(), written.begin(), written.end());
  };

  RunHooks hooks;
  hooks.cadence = 1;
  const auto every = cfg.diagnostics.snapshot_every;
  hooks.observe = [&](const FieldState& s, std::int64_t k) {
    recorder.observe(s, k);
    if (every > 0 && k > 0 && k % every == 0 && k != nsteps) checkpoint(s, k);
  };

  const auto start = std::chrono::steady_clock::now();
  RunOutcome outcome{run(model, std::move(initial), stepper, cfg.regularization, hooks),
                     {}, {}, 0, 0.0, 0.0, {}};
  outcome.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  checkpoint(outcome.trajectory.final_state, outcome.trajectory.steps);

  outcome.files = std::move(files);
  outcome.rows = recorder.rows();
  outcome.monitor = recorder.monitor();
  outcome.energy_violations = recorder.energy_violations();
  outcome.max_energy_increase = recorder.max_energy_increase();

  if (!out_dir.empty()) {
    const auto csv = out_dir / "timeseries.csv";
    write_timeseries_csv(csv, outcome.rows);
    outcome.files.insert(outcome.files.begin(), csv);
    ManifestInfo info;
    info.steps = outcome.trajectory.steps;
    info.final_time = outcome.trajectory.final_state.time;
    info.blew_up = outcome.trajectory.blew_up;
    info.blowup_reason = outcome.trajectory.blowup_reason;
    info.wall_seconds = outcome.wall_seconds;
    info.energy_violations = outcome.energy_violations;
    info.max_energy_increase = outcome.max_energy_increase;
    info.monitor = outcome.monitor;
    info.files = outcome.files;
    write_manifest(out_dir / "run_manifest.json", cfg, info);
  }
  return outcome;
}

SweepAxis parse_sweep_axis(std::string_view name) {
  if (name == "dt") return SweepAxis::Dt;
  if (name == "M") return SweepAxis::M;
  if (name == "n") return SweepAxis::N;
  throw ParameterError("unknown sweep axis '" + std::string(name) + "' (expected dt, M or n)");
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Dt:
      return "dt";
    case SweepAxis::M:
      return "M";
    case SweepAxis::N:
      return "n";
  }
  return "?";
}

double fitted_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count < 2) return kNotEvaluated;
  const double den = count * sxx - sx * sx;
  return den == 0.0 ? kNotEvaluated : (count * sxy - sx * sy) / den;
}

SweepResult run_sweep(const RunConfig& base, SweepAxis axis, const std::vector<double>& values,
                      const std::filesystem::path& out_dir) {
  if (values.empty()) throw ParameterError("sweep needs at least one value");
  SweepResult result;
  result.axis = axis;

  auto member_dir = [&](const std::string& label) {
    return out_dir.empty() ? std::filesystem::path{} : out_dir / label;
  };

  std::optional<FieldState> plain;
  if (axis == SweepAxis::M) {
    auto cfg = base;
    cfg.regularization.enabled = false;
    plain = execute_run(cfg, member_dir("plain")).trajectory.final_state;
  }

  std::optional<FieldState> previous;
  for (const double v : values) {
    SweepRow row;
    row.value = v;
    auto cfg = base;
    const std::string label = to_string(axis) + "=" + num(v, 6);
    try {
      switch (axis) {
        case SweepAxis::Dt:
          cfg.stepper.dt = v;
          break;
        case SweepAxis::M:
          if (v != std::floor(v)) throw ParameterError("M must be an integer");
          cfg.regularization.enabled = true;
          cfg.regularization.M = static_cast<int>(v);
          break;
        case SweepAxis::N:
          if (v != std::floor(v)) throw ParameterError("n must be an integer");
          cfg.grid.n = static_cast<int>(v);
          break;
      }
      const auto out = execute_run(cfg, member_dir(label));
      const auto& fin = out.trajectory.final_state;
      row.steps = out.trajectory.steps;
      if (!out.rows.empty()) row.E_final = out.rows.back().energy.E_total;
      row.residual_max = out.max_abs_residual_case1();
      row.residual_mean = out.mean_abs_residual_case1();
      if (previous) row.diff_prev = state_distance(fin, *previous);
      if (plain) row.gap_plain = state_distance(fin, *plain);
      if (out.trajectory.blew_up) {
        row.failed = true;
        row.error = out.trajectory.blowup_reason;
      }
      previous = fin;
    } catch (const Error& e) {
      row.failed = true;
      row.error = label + ": " + e.what();
      previous.reset();
    }
    result.any_failed = result.any_failed || row.failed;
    result.rows.push_back(std::move(row));
  }

  std::vector<double> xs, ys;
  for (const auto& r : result.rows) {
    xs.push_back(r.value);
    ys.push_back(axis == SweepAxis::M ? r.gap_plain : r.residual_mean);
  }
  if (axis == SweepAxis::Dt) result.fitted_order = fitted_log_slope(xs, ys);
  if (axis == SweepAxis::M) {
    result.fitted_order = -fitted_log_slope(xs, ys);
    result.gap_monotone = true;
    for (std::size_t i = 1; i < ys.size(); ++i) {
      if (!(ys[i] < ys[i - 1])) result.gap_monotone = false;
    }
  }
  return result;
}

int cli_validate(const CliOptions& opts, std::ostream& out, std::ostream& err) {
  const auto cfg = load_or_report(opts, err);
  if (!cfg) return kExitConfigError;
  LeslieCoefficients c;
  try {
    c = cfg->coefficients.resolve();
  } catch (const ParameterError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  const auto report = validate(c);
  print_regime(c, report, opts.structured, out);
  return report.dissipative() ? kExitOk : kExitNotDissipative;
}

int cli_run(const CliOptions& opts, std::ostream& out, std::ostream& err) {
  const auto cfg = load_or_report(opts, err);
  if (!cfg) return kExitConfigError;
  const auto coeffs = cfg->coefficients.resolve();
  const auto report = validate(coeffs);
  if (!report.dissipative()) {
    print_regime(coeffs, report, opts.structured, err);
    err << "error: refusing to run, coefficients are neither Case 1 nor Case 2\n";
    return kExitNotDissipative;
  }
  set_fft_threads(opts.threads);
  const std::filesystem::path dir = output_dir_for(opts, *cfg);
  try {
    const auto o = execute_run(*cfg, dir);
    const auto& t = o.trajectory;
    if (opts.structured) {
      nlohmann::ordered_json j;
      j["output_dir"] = dir.string();
      j["steps"] = t.steps;
      j["final_time"] = t.final_state.time;
      j["blew_up"] = t.blew_up;
      if (t.blew_up) j["blowup_reason"] = t.blowup_reason;
      j["energy_violations"] = o.energy_violations;
      j["E_final"] = o.rows.empty() ? nlohmann::json(nullptr)
                                    : json_number(o.rows.back().energy.E_total);
      j["max_abs_residual_case1"] = json_number(o.max_abs_residual_case1());
      j["wall_seconds"] = o.wall_seconds;
      out << j.dump(2) << '\n';
    } else {
      out << "steps " << t.steps << ", t = " << num(t.final_state.time, 10);
      if (!o.rows.empty()) out << ", E = " << num(o.rows.back().energy.E_total, 10);
      out << ", energy increases above slack: " << o.energy_violations << '\n';
      out << "outputs in " << dir.string() << '\n';
    }
    if (t.blew_up) {
      err << "blow-up detected: " << t.blowup_reason << '\n';
      return kExitBlowup;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}

int cli_sweep(const CliOptions& opts, const std::string& axis_name,
              const std::vector<std::string>& values, std::ostream& out, std::ostream& err) {
  if (values.empty()) {
    err << "usage error: sweep needs at least one value\n";
    return kExitConfigError;
  }
  SweepAxis axis;
  std::vector<double> parsed;
  try {
    axis = parse_sweep_axis(axis_name);
    for (const auto& v : values) {
      std::size_t used = 0;
      parsed.push_back(std::stod(v, &used));
      if (used != v.size()) throw ParameterError("bad sweep value '" + v + "'");
    }
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitConfigError;
  }
  const auto cfg = load_or_report(opts, err);
  if (!cfg) return kExitConfigError;
  set_fft_threads(opts.threads);
  const std::filesystem::path dir = output_dir_for(opts, *cfg);

  SweepResult res;
  try {
    res = run_sweep(*cfg, axis, parsed, dir);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }

  std::ostringstream table;
  table << "value,steps,E_final,residual_case1_max,residual_case1_mean,diff_prev,gap_plain,status\n";
  for (const auto& r : res.rows) {
    table << num(r.value) << ',' << r.steps << ',' << num(r.E_final) << ','
          << num(r.residual_max) << ',' << num(r.residual_mean) << ',' << num(r.diff_prev) << ','
          << num(r.gap_plain) << ',' << (r.failed ? "failed" : "ok") << '\n';
  }
  if (!dir.empty()) {
    std::filesystem::create_directories(dir);
    std::ofstream f(dir / "sweep.csv");
    f << table.str();
  }

  if (opts.structured) {
    nlohmann::ordered_json j;
    j["axis"] = to_string(axis);
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : res.rows) {
      nlohmann::ordered_json jr;
      jr["value"] = r.value;
      jr["steps"] = r.steps;
      jr["E_final"] = json_number(r.E_final);
      jr["residual_case1_max"] = json_number(r.residual_max);
      jr["residual_case1_mean"] = json_number(r.residual_mean);
      jr["diff_prev"] = json_number(r.diff_prev);
      jr["gap_plain"] = json_number(r.gap_plain);
      jr["failed"] = r.failed;
      if (r.failed) jr["error"] = r.error;
      rows.push_back(jr);
    }
    j["rows"] = rows;
    j["fitted_order"] = json_number(res.fitted_order);
    if (axis == SweepAxis::M) j["gap_monotone"] = res.gap_monotone;
    out << j.dump(2) << '\n';
  } else {
    out << table.str();
    if (std::isfinite(res.fitted_order)) out << "fitted order: " << num(res.fitted_order, 4) << '\n';
    if (axis == SweepAxis::M) {
      out << "gap to plain scheme " << (res.gap_monotone ? "decreases" : "does not decrease")
          << " monotonically\n";
    }
  }
  for (const auto& r : res.rows) {
    if (r.failed) err << "member failed: " << r.error << '\n';
  }
  return res.any_failed ? kExitRuntimeError : kExitOk;
}

int cli_inspect(const std::vector<std::string>& paths, bool structured, std::ostream& out,
                std::ostream& err) {
  if (paths.empty()) {
    err << "usage error: inspect needs at least one snapshot file\n";
    return kExitConfigError;
  }
  auto all = nlohmann::ordered_json::array();
  for (const auto& path : paths) {
    try {
      const auto header = read_snapshot_header(path);
      const auto grid =
          SpectralGrid::create(static_cast<int>(header.dim), static_cast<int>(header.n));
      const auto f = load_field(path, grid, header.components);
      nlohmann::ordered_json j;
      j["path"] = path;
      j["version"] = header.version;
      j["dim"] = header.dim;
      j["n"] = header.n;
      j["components"] = header.components;
      j["time"] = header.time;
      j["l2_norm"] = l2_norm(f);
      j["sup_norm"] = sup_norm(f);
      j["h1_norm"] = sobolev_norm(f, 1.0);
      auto means = nlohmann::ordered_json::array();
      for (std::size_t c = 0; c < f.components(); ++c) means.push_back(mean(f.component(c)));
      j["component_means"] = means;
      if (header.components == header.dim) j["sup_divergence"] = sup_norm(divergence(f));
      if (structured) {
        all.push_back(j);
      } else {
        out << path << ": dim=" << header.dim << " n=" << header.n
            << " components=" << header.components << " time=" << num(header.time, 10) << '\n'
            << "  L2=" << num(l2_norm(f), 10) << " sup=" << num(sup_norm(f), 10)
            << " H1=" << num(sobolev_norm(f, 1.0), 10);
        if (j.contains("sup_divergence")) {
          out << " sup|div|=" << num(j["sup_divergence"].get<double>(), 3);
        }
        out << '\n';
      }
    } catch (const Error& e) {
      err << "error: " << path << ": " << e.what() << '\n';
      return kExitRuntimeError;
    }
  }
  if (structured) out << all.dump(2) << '\n';
  return kExitOk;
}

}  // namespace elsim
