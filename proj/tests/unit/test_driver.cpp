#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "elsim/driver.hpp"
#include "elsim/errors.hpp"
#include "elsim/output.hpp"
#include "elsim/snapshot.hpp"
#include "support.hpp"

using namespace elsim;
using namespace elsim::testing;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

RunConfig small_config() {
  RunConfig c;
  c.grid.n = 16;
  c.coefficients.alpha = 1.0;
  c.stepper.dt = 1e-3;
  c.stepper.t_end = 0.01;
  c.initial.preset = "perturbed-director";
  c.initial.amplitude = 0.2;
  c.seed = 5;
  return c;
}

}  // namespace

TEST_CASE("quiescent run writes zero energies") {
  TempDir tmp("elsim_test_quiescent");
  RunConfig c;
  c.grid.n = 16;
  c.stepper.t_end = 0.005;
  const auto out = execute_run(c, tmp.path);
  CHECK(out.trajectory.steps == 5);
  CHECK(out.rows.size() == 6);
  CHECK(out.energy_violations == 0);

  std::ifstream csv(tmp.path / "timeseries.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header.starts_with("step,time[t],E_total[E]"));
  std::string line;
  int rows = 0;
  while (std::getline(csv, line)) {
    std::istringstream fields(line);
    std::string step, time, energy;
    std::getline(fields, step, ',');
    std::getline(fields, time, ',');
    std::getline(fields, energy, ',');
    CHECK(std::stod(energy) == 0.0);
    ++rows;
  }
  CHECK(rows == 6);
  CHECK(fs::exists(tmp.path / "snapshots" / "u_00000005.snap"));
  CHECK(fs::exists(tmp.path / "snapshots" / "checkpoint_00000005.json"));

  const auto manifest = nlohmann::json::parse(slurp(tmp.path / "run_manifest.json"));
  CHECK(manifest["config_hash"] == config_hash(c));
  CHECK(manifest["steps"] == 5);
  CHECK(manifest["blew_up"] == false);
}

TEST_CASE("CSV columns") {
  const auto& cols = timeseries_columns();
  CHECK(cols.front() == "step");
  CHECK(cols.back() == "energy_violation[bool]");
  std::ostringstream s;
  write_timeseries_csv(s, {});
  std::string header = s.str();
  CHECK(std::count(header.begin(), header.end(), ',') + 1 ==
        static_cast<std::ptrdiff_t>(cols.size()));
}

TEST_CASE("Taylor-Green kinetic energy in the time series") {
  RunConfig c;
  c.grid.n = 32;
  c.coefficients.alpha = 0.5;
  c.coefficients.nu = 0.02;
  c.stepper.dt = 1e-3;
  c.stepper.t_end = 0.05;
  c.initial.preset = "taylor-green-uniform-director";
  c.diagnostics.cadence = 10;
  const auto out = execute_run(c);
  REQUIRE(out.rows.size() == 6);
  for (const auto& r : out.rows) {
    const double expect = 0.25 * std::exp(-16 * kPi * kPi * 0.5 * c.coefficients.nu * r.energy.time);
    CHECK(rel_err(r.energy.E_kinetic, expect) <= 1e-4);
    CHECK(r.energy.E_elastic == 0.0);
  }
}

TEST_CASE("runs are bit-reproducible") {
  TempDir a("elsim_test_det_a");
  TempDir b("elsim_test_det_b");
  auto c = small_config();
  c.stepper.scheme = Scheme::ImexBdf2;
  execute_run(c, a.path);
  execute_run(c, b.path);
  CHECK(slurp(a.path / "timeseries.csv") == slurp(b.path / "timeseries.csv"));
  CHECK(slurp(a.path / "snapshots" / "d_00000010.snap") ==
        slurp(b.path / "snapshots" / "d_00000010.snap"));

  auto other = c;
  other.seed = 6;
  TempDir o("elsim_test_det_o");
  execute_run(other, o.path);
  CHECK(slurp(a.path / "timeseries.csv") != slurp(o.path / "timeseries.csv"));
}

TEST_CASE("snapshot resume continues the trajectory") {
  TempDir tmp("elsim_test_resume");
  auto c = small_config();
  c.stepper.t_end = 0.02;
  c.diagnostics.snapshot_every = 10;
  const auto full = execute_run(c, tmp.path / "full");
  const auto snaps = tmp.path / "full" / "snapshots";
  REQUIRE(fs::exists(snaps / "u_00000010.snap"));
  CHECK(read_snapshot_header(snaps / "u_00000010.snap").time == doctest::Approx(0.01));

  auto r = c;
  r.initial.preset = "snapshot";
  r.initial.u_path = (snaps / "u_00000010.snap").string();
  r.initial.d_path = (snaps / "d_00000010.snap").string();
  const auto resumed = execute_run(r);
  CHECK(resumed.trajectory.steps == 10);
  CHECK(resumed.trajectory.final_state.time == doctest::Approx(0.02));
  CHECK(max_abs_difference(resumed.trajectory.final_state.d, full.trajectory.final_state.d) <
        1e-13);
  CHECK(max_abs_difference(resumed.trajectory.final_state.u, full.trajectory.final_state.u) <
        1e-13);

  r.initial.u_path = (snaps / "missing.snap").string();
  CHECK_THROWS_AS(execute_run(r), IoError);
}

TEST_CASE("non-dissipative coefficients are refused by the driver") {
  auto c = small_config();
  c.coefficients.mode = CoefficientConfig::Mode::Explicit;
  c.coefficients.values = from_alpha(1.0, 1.0);
  c.coefficients.values.mu5 = 0.0;
  CHECK_THROWS_AS(execute_run(c), RegimeError);
}

TEST_CASE("sweeps") {
  auto c = small_config();
  CHECK_THROWS_AS(run_sweep(c, SweepAxis::Dt, {}), ParameterError);
  CHECK(parse_sweep_axis("M") == SweepAxis::M);
  CHECK(to_string(SweepAxis::N) == "n");
  CHECK_THROWS_AS(parse_sweep_axis("alpha"), ParameterError);

  SUBCASE("dt axis") {
    TempDir tmp("elsim_test_sweep_dt");
    auto d = c;
    d.grid.n = 32;
    d.coefficients.epsilon = 0.3;
    d.stepper.t_end = 0.1;
    const auto res = run_sweep(d, SweepAxis::Dt, {1e-2, 5e-3, 2.5e-3}, tmp.path);
    REQUIRE(res.rows.size() == 3);
    CHECK_FALSE(res.any_failed);
    CHECK(res.rows[2].steps == 40);
    CHECK(std::isnan(res.rows[0].diff_prev));
    CHECK(res.rows[2].diff_prev < res.rows[1].diff_prev);
    CHECK(res.fitted_order >= 0.9);
    CHECK(fs::exists(tmp.path / "dt=0.0025" / "timeseries.csv"));
  }
  SUBCASE("M axis") {
    auto m = c;
    m.initial.preset = "taylor-green-uniform-director";
    m.initial.velocity_amplitude = 0.2;
    m.regularization.r = 4.0;
    const auto res = run_sweep(m, SweepAxis::M, {2, 4, 8});
    REQUIRE(res.rows.size() == 3);
    CHECK(res.gap_monotone);
    CHECK(res.rows[2].gap_plain < res.rows[0].gap_plain);
  }
  SUBCASE("failed members are recorded") {
    const auto res = run_sweep(c, SweepAxis::N, {16, 12});
    CHECK(res.any_failed);
    CHECK(res.rows[1].failed);
    CHECK_FALSE(res.rows[1].error.empty());
  }
}

TEST_CASE("log slope fit") {
  CHECK(fitted_log_slope({1, 2, 4}, {3, 12, 48}) == doctest::Approx(2.0));
  CHECK(fitted_log_slope({1, 2, 4, 8}, {1, 0.5, -1, 0.125}) == doctest::Approx(-1.0));
  CHECK(std::isnan(fitted_log_slope({1}, {1})));
}

TEST_CASE("command front end") {
  TempDir tmp("elsim_test_cli");
  std::ostringstream out;
  std::ostringstream err;
  CliOptions o;

  SUBCASE("validate exit codes") {
    o.config_path = write_text(tmp.path / "a.cfg", "[coefficients]\nalpha = 1\n").string();
    CHECK(cli_validate(o, out, err) == kExitOk);
    CHECK(out.str().find("case1") != std::string::npos);

    o.config_path = write_text(tmp.path / "b.cfg",
                               "[coefficients]\nmode = explicit\nlambda1 = 1\nmu4 = 1\n")
                        .string();
    CHECK(cli_validate(o, out, err) == kExitNotDissipative);

    o.config_path = write_text(tmp.path / "c.cfg", "[grid]\nn = banana\n").string();
    CHECK(cli_validate(o, out, err) == kExitConfigError);
    CHECK(err.str().find("grid.n") != std::string::npos);

    o.config_path = (tmp.path / "absent.cfg").string();
    CHECK(cli_validate(o, out, err) == kExitConfigError);
  }
  SUBCASE("structured validate is JSON") {
    o.config_path = write_text(tmp.path / "a.cfg", "[coefficients]\nalpha = 0\n").string();
    o.structured = true;
    CHECK(cli_validate(o, out, err) == kExitOk);
    const auto j = nlohmann::json::parse(out.str());
    CHECK(j["dissipative"] == true);
  }
  SUBCASE("run exit codes") {
    o.config_path = write_text(tmp.path / "tg.cfg",
                               "[grid]\nn = 16\n[stepper]\nt_end = 0.01\nvorticity_cap = 1\n"
                               "[initial_condition]\npreset = taylor-green-uniform-director\n")
                        .string();
    o.output_dir = (tmp.path / "out").string();
    CHECK(cli_run(o, out, err) == kExitBlowup);
    CHECK(fs::exists(tmp.path / "out" / "run_manifest.json"));

    o.config_path = write_text(tmp.path / "ok.cfg", "[grid]\nn = 16\n[stepper]\nt_end = 0.002\n")
                        .string();
    CHECK(cli_run(o, out, err) == kExitOk);

    o.config_path = write_text(tmp.path / "bad.cfg",
                               "[coefficients]\nmode = explicit\nlambda1 = -1\nmu5 = 1\n")
                        .string();
    CHECK(cli_run(o, out, err) == kExitNotDissipative);
  }
  SUBCASE("sweep usage errors") {
    o.config_path = write_text(tmp.path / "s.cfg", "[grid]\nn = 16\n").string();
    CHECK(cli_sweep(o, "dt", {}, out, err) == kExitConfigError);
    CHECK(cli_sweep(o, "alpha", {"1"}, out, err) == kExitConfigError);
    CHECK(cli_sweep(o, "dt", {"x"}, out, err) == kExitConfigError);
  }
  SUBCASE("inspect") {
    const auto g = SpectralGrid::create(2, 8);
    const auto s = random_state(g, 2);
    write_snapshot(tmp.path / "d.snap", s.d, 0.5);
    CHECK(cli_inspect({(tmp.path / "d.snap").string()}, true, out, err) == kExitOk);
    CHECK(cli_inspect({(tmp.path / "nope.snap").string()}, false, out, err) != kExitOk);
  }
}
