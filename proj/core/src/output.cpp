#include "elsim/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "elsim/errors.hpp"
#include "elsim/snapshot.hpp"

#ifndef ELSIM_VERSION_STRING
#define ELSIM_VERSION_STRING "unknown"
#endif

namespace elsim {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);  // + 0.0 folds -0 into 0
  return buf;
}

std::string step_tag(std::int64_t step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%08lld", static_cast<long long>(step));
  return buf;
}

nlohmann::json json_number(double v) {
  // JSON has no NaN; unevaluated quantities become null.
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  return f;
}

}  // namespace

const std::vector<std::string>& timeseries_columns() {
  static const std::vector<std::string> cols{
      "step",           "time[t]",           "E_total[E]",         "E_kinetic[E]",
      "E_elastic[E]",   "E_penalty[E]",      "D_mu1[E/t]",         "D_visc[E/t]",
      "D_Ad[E/t]",      "D_N[E/t]",          "D_cross[E/t]",       "D_case1_director[E/t]",
      "D_case1_Ad[E/t]", "D_reg[E/t]",       "residual_general[E/t]", "residual_case1[E/t]",
      "sup_curl_u[1/t]", "sup_grad_d[1/L]",  "sup_grad_u[1/t]",    "B_integral[1/L^4*t]",
      "G_bracket_C1[1]", "Y3[E*L^-6]",       "A_qty[E/t]",         "logsob_ratio_C1[1]",
      "energy_violation[bool]"};
  return cols;
}

void write_timeseries_csv(std::ostream& out, const std::vector<DiagnosticRow>& rows) {
  const auto& cols = timeseries_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : rows) {
    const auto& e = r.energy;
    out << r.step;
    for (const double v :
         {e.time, e.E_total, e.E_kinetic, e.E_elastic, e.E_penalty, e.D_mu1, e.D_visc, e.D_Ad,
          e.D_N, e.D_cross, e.D_case1_director, e.D_case1_Ad, e.D_reg, e.residual_general,
          e.residual_case1, r.sample.sup_curl_u, r.sample.sup_grad_d, r.sample.sup_grad_u,
          r.B_integral, r.G_bracket, r.Y3, r.A_qty, r.logsob_ratio}) {
      out << ',' << num(v);
    }
    out << ',' << (r.energy_violation ? 1 : 0) << '\n';
  }
}

void write_timeseries_csv(const std::filesystem::path& path,
                          const std::vector<DiagnosticRow>& rows) {
  auto f = open_for_write(path);
  write_timeseries_csv(f, rows);
  if (!f) throw IoError("short write to " + path.string());
}

std::vector<std::filesystem::path> write_checkpoint(const std::filesystem::path& dir,
                                                    const FieldState& s, std::int64_t step,
                                                    const RunConfig& cfg,
                                                    const ScalarField* pressure) {
  std::filesystem::create_directories(dir);
  const auto tag = step_tag(step);
  std::vector<std::filesystem::path> files{dir / ("u_" + tag + ".snap"),
                                           dir / ("d_" + tag + ".snap")};
  write_snapshot(files[0], s.u, s.time);
  write_snapshot(files[1], s.d, s.time);
  if (pressure != nullptr) {
    files.push_back(dir / ("p_" + tag + ".snap"));
    write_snapshot(files.back(), *pressure, s.time);
  }

  nlohmann::ordered_json meta;
  meta["time"] = s.time;
  meta["step"] = step;
  meta["config_hash"] = config_hash(cfg);
  meta["u"] = files[0].filename().string();
  meta["d"] = files[1].filename().string();
  files.push_back(dir / ("checkpoint_" + tag + ".json"));
  auto f = open_for_write(files.back());
  f << meta.dump(2) << '\n';
  return files;
}

std::string build_version() { return ELSIM_VERSION_STRING; }

void write_manifest(const std::filesystem::path& path, const RunConfig& cfg,
                    const ManifestInfo& info) {
  nlohmann::ordered_json j;
  j["version"] = build_version();
  j["config_hash"] = config_hash(cfg);
  j["seed"] = cfg.seed;
  j["config"] = serialize_config(cfg);
  j["wall_seconds"] = info.wall_seconds;
  j["steps"] = info.steps;
  j["final_time"] = info.final_time;
  j["blew_up"] = info.blew_up;
  if (info.blew_up) j["blowup_reason"] = info.blowup_reason;
  j["energy_violations"] = info.energy_violations;
  j["max_energy_increase"] = json_number(info.max_energy_increase);

  const auto& m = info.monitor;
  nlohmann::ordered_json mon;
  mon["samples"] = m.history.size();
  mon["B_integral"] = m.B_integral;
  mon["B_vorticity_integral"] = m.B_vorticity_integral;
  mon["G_bracket_C1"] = json_number(m.G_bracket);
  mon["Y3"] = json_number(m.Y3);
  mon["A_qty"] = json_number(m.A_qty);
  mon["logsob_ratio_C1"] = json_number(m.logsob_ratio);
  if (!m.history.empty()) {
    mon["last_sup_curl_u"] = m.history.back().sup_curl_u;
    mon["last_sup_grad_d"] = m.history.back().sup_grad_d;
  }
  j["monitor"] = mon;

  auto files = nlohmann::json::array();
  for (const auto& p : info.files) {
    files.push_back(p.lexically_relative(path.parent_path()).generic_string());
  }
  j["files"] = files;

  auto f = open_for_write(path);
  f << j.dump(2) << '\n';
}

}  // namespace elsim
