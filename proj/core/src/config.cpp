#include "elsim/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

#include "elsim/errors.hpp"

namespace elsim {

namespace {

struct Ctx {
  const std::string& source;
  int line;
  std::string field;

  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(source, line, field, msg); }
};

double to_double(std::string_view v, const Ctx& ctx) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end) ctx.fail("expected a number, got '" + std::string(v) + "'");
  return out;
}

template <class T>
T to_int(std::string_view v, const Ctx& ctx) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec == std::errc::result_out_of_range) ctx.fail("integer out of range");
  if (ec != std::errc{} || ptr != end) ctx.fail("expected an integer, got '" + std::string(v) + "'");
  return out;
}

bool to_bool(std::string_view v, const Ctx& ctx) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  ctx.fail("expected true or false, got '" + std::string(v) + "'");
}

// Shortest text that parses back to the same double.
std::string fmt_double(double v) {
  char buf[40];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

using Setter = std::function<void(RunConfig&, std::string_view, const Ctx&)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Key {
  std::string section;
  std::string name;
  Setter set;
  Getter get;
};

template <class Proj>
Key real_key(std::string section, std::string name, Proj proj) {
  return {std::move(section), std::move(name),
          [proj](RunConfig& c, std::string_view v, const Ctx& ctx) { proj(c) = to_double(v, ctx); },
          [proj](const RunConfig& c) { return fmt_double(proj(c)); }};
}

template <class T, class Proj>
Key int_key(std::string section, std::string name, Proj proj) {
  return {std::move(section), std::move(name),
          [proj](RunConfig& c, std::string_view v, const Ctx& ctx) {
            proj(c) = to_int<T>(v, ctx);
          },
          [proj](const RunConfig& c) { return std::to_string(proj(c)); }};
}

template <class Proj>
Key bool_key(std::string section, std::string name, Proj proj) {
  return {std::move(section), std::move(name),
          [proj](RunConfig& c, std::string_view v, const Ctx& ctx) { proj(c) = to_bool(v, ctx); },
          [proj](const RunConfig& c) {
            return std::string(proj(c) ? "true" : "false");
          }};
}

template <class Proj>
Key string_key(std::string section, std::string name, Proj proj) {
  return {std::move(section), std::move(name),
          [proj](RunConfig& c, std::string_view v, const Ctx&) { proj(c) = std::string(v); },
          [proj](const RunConfig& c) { return proj(c); }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    k.push_back(int_key<int>("grid", "dim", [](auto& c) -> auto& { return c.grid.dim; }));
    k.push_back(int_key<int>("grid", "n", [](auto& c) -> auto& { return c.grid.n; }));

    k.push_back({"coefficients", "mode",
                 [](RunConfig& c, std::string_view v, const Ctx& ctx) {
                   if (v == "alpha") {
                     c.coefficients.mode = CoefficientConfig::Mode::Alpha;
                   } else if (v == "explicit") {
                     c.coefficients.mode = CoefficientConfig::Mode::Explicit;
                   } else {
                     ctx.fail("expected alpha or explicit, got '" + std::string(v) + "'");
                   }
                 },
                 [](const RunConfig& c) {
                   return std::string(c.coefficients.mode == CoefficientConfig::Mode::Alpha
                                          ? "alpha"
                                          : "explicit");
                 }});
    k.push_back(real_key("coefficients", "alpha",
                         [](auto& c) -> auto& { return c.coefficients.alpha; }));
    k.push_back(real_key("coefficients", "nu",
                         [](auto& c) -> auto& { return c.coefficients.nu; }));
    k.push_back(real_key("coefficients", "epsilon",
                         [](auto& c) -> auto& { return c.coefficients.epsilon; }));
#define ELSIM_COEFF_KEY(name)                                                               \
  k.push_back(real_key("coefficients", #name,                                               \
                       [](auto& c) -> auto& { return c.coefficients.values.name; }))
    ELSIM_COEFF_KEY(lambda1);
    ELSIM_COEFF_KEY(lambda2);
    ELSIM_COEFF_KEY(mu1);
    ELSIM_COEFF_KEY(mu2);
    ELSIM_COEFF_KEY(mu3);
    ELSIM_COEFF_KEY(mu4);
    ELSIM_COEFF_KEY(mu5);
    ELSIM_COEFF_KEY(mu6);
#undef ELSIM_COEFF_KEY

    k.push_back(real_key("stepper", "dt", [](auto& c) -> auto& { return c.stepper.dt; }));
    k.push_back(
        real_key("stepper", "t_end", [](auto& c) -> auto& { return c.stepper.t_end; }));
    k.push_back({"stepper", "scheme",
                 [](RunConfig& c, std::string_view v, const Ctx& ctx) {
                   try {
                     c.stepper.scheme = parse_scheme(v);
                   } catch (const ParameterError& e) {
                     ctx.fail(e.what());
                   }
                 },
                 [](const RunConfig& c) { return to_string(c.stepper.scheme); }});
    k.push_back(
        bool_key("stepper", "dealias", [](auto& c) -> auto& { return c.stepper.dealias; }));
    k.push_back(bool_key("stepper", "reconstruct_pressure",
                         [](auto& c) -> auto& { return c.stepper.reconstruct_pressure; }));
    k.push_back(real_key("stepper", "vorticity_cap",
                         [](auto& c) -> auto& { return c.stepper.vorticity_cap; }));

    k.push_back(bool_key("regularization", "enabled",
                         [](auto& c) -> auto& { return c.regularization.enabled; }));
    k.push_back(
        int_key<int>("regularization", "M", [](auto& c) -> auto& { return c.regularization.M; }));
    k.push_back(
        real_key("regularization", "r", [](auto& c) -> auto& { return c.regularization.r; }));

    k.push_back(string_key("initial_condition", "preset",
                           [](auto& c) -> auto& { return c.initial.preset; }));
    k.push_back(real_key("initial_condition", "amplitude",
                         [](auto& c) -> auto& { return c.initial.amplitude; }));
    k.push_back(int_key<int>("initial_condition", "modes",
                             [](auto& c) -> auto& { return c.initial.modes; }));
    k.push_back(real_key("initial_condition", "velocity_amplitude",
                         [](auto& c) -> auto& { return c.initial.velocity_amplitude; }));
    k.push_back(string_key("initial_condition", "u_path",
                           [](auto& c) -> auto& { return c.initial.u_path; }));
    k.push_back(string_key("initial_condition", "d_path",
                           [](auto& c) -> auto& { return c.initial.d_path; }));

    k.push_back(int_key<std::int64_t>("diagnostics", "cadence", [](auto& c) -> auto& {
      return c.diagnostics.cadence;
    }));
    k.push_back(string_key("diagnostics", "output_dir",
                           [](auto& c) -> auto& { return c.diagnostics.output_dir; }));
    k.push_back(int_key<std::int64_t>(
        "diagnostics", "snapshot_every",
        [](auto& c) -> auto& { return c.diagnostics.snapshot_every; }));
    k.push_back(real_key("diagnostics", "monotonicity_slack",
                         [](auto& c) -> auto& { return c.diagnostics.monotonicity_slack; }));

    k.push_back(int_key<std::uint64_t>("run", "seed",
                                       [](auto& c) -> auto& { return c.seed; }));
    return k;
  }();
  return table;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

LeslieCoefficients CoefficientConfig::resolve() const {
  if (mode == Mode::Alpha) return from_alpha(alpha, nu, epsilon);
  auto c = values;
  c.epsilon = epsilon;
  return c;
}

void RunConfig::validate(const std::string& source) const {
  auto bad = [&](const std::string& field, const std::string& msg) {
    throw ConfigError(source, 0, field, msg);
  };
  if (grid.dim != 2 && grid.dim != 3) bad("grid.dim", "must be 2 or 3");
  if (grid.n < 8 || !is_power_of_two(grid.n)) bad("grid.n", "must be a power of two >= 8");
  if (!(coefficients.epsilon > 0.0)) bad("coefficients.epsilon", "must be positive");
  if (coefficients.mode == CoefficientConfig::Mode::Alpha) {
    if (!(coefficients.alpha >= 0.0 && coefficients.alpha <= 1.0)) {
      bad("coefficients.alpha", "must lie in [0, 1]");
    }
    if (!(coefficients.nu > 0.0)) bad("coefficients.nu", "must be positive");
  }
  if (!(stepper.dt > 0.0)) bad("stepper.dt", "must be positive");
  if (!(stepper.t_end >= 0.0)) bad("stepper.t_end", "must be >= 0");
  if (regularization.enabled) {
    if (regularization.M < 1 || regularization.M > grid.n / 2) {
      bad("regularization.M", "must lie in [1, n/2]");
    }
    if (!(regularization.r > 10.0 / 3.0)) bad("regularization.r", "must exceed 10/3");
  }
  static const std::set<std::string> presets{"quiescent", "taylor-green-uniform-director",
                                             "perturbed-director", "snapshot"};
  if (!presets.contains(initial.preset)) {
    bad("initial_condition.preset", "unknown preset '" + initial.preset + "'");
  }
  if (initial.preset == "snapshot" && (initial.u_path.empty() || initial.d_path.empty())) {
    bad("initial_condition", "snapshot preset needs u_path and d_path");
  }
  if (initial.modes < 1) bad("initial_condition.modes", "must be >= 1");
  if (!(initial.amplitude >= 0.0)) bad("initial_condition.amplitude", "must be >= 0");
  if (diagnostics.cadence < 1) bad("diagnostics.cadence", "must be >= 1");
  if (diagnostics.snapshot_every < 0) bad("diagnostics.snapshot_every", "must be >= 0");
  if (!(diagnostics.monotonicity_slack >= 0.0)) {
    bad("diagnostics.monotonicity_slack", "must be >= 0");
  }
}

RunConfig parse_config(std::string_view text, const std::string& source) {
  RunConfig cfg;
  std::string section;
  std::set<std::string> seen;
  std::set<std::string> sections;
  for (const auto& k : keys()) sections.insert(k.section);

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    auto raw = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto line = trim(raw);
    if (line.empty()) continue;

    Ctx ctx{source, line_no, {}};
    if (line.front() == '[') {
      if (line.back() != ']') ctx.fail("unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!sections.contains(section)) {
        ctx.field = section;
        ctx.fail("unknown section");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) ctx.fail("expected 'key = value'");
    const std::string name(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    ctx.field = section.empty() ? name : section + "." + name;
    if (section.empty()) ctx.fail("key outside of any section");
    if (name.empty()) ctx.fail("empty key");

    const Key* key = nullptr;
    for (const auto& k : keys()) {
      if (k.section == section && k.name == name) key = &k;
    }
    if (key == nullptr) ctx.fail("unknown key");
    if (!seen.insert(ctx.field).second) ctx.fail("duplicate key");
    key->set(cfg, value, ctx);
  }
  cfg.coefficients.values.epsilon = cfg.coefficients.epsilon;
  cfg.validate(source);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "", "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  auto cfg = parse_config(buf.str(), path.string());
  const auto base = path.parent_path();
  for (auto* p : {&cfg.initial.u_path, &cfg.initial.d_path}) {
    if (!p->empty() && std::filesystem::path(*p).is_relative()) *p = (base / *p).string();
  }
  return cfg;
}

std::string serialize_config(const RunConfig& c) {
  std::string out;
  std::string section;
  for (const auto& k : keys()) {
    if (k.section != section) {
      if (!section.empty()) out += "\n";
      section = k.section;
      out += "[" + section + "]\n";
    }
    out += k.name + " = " + k.get(c) + "\n";
  }
  return out;
}

std::string config_hash(const RunConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : serialize_config(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string effective_output_dir(const RunConfig& c) {
  if (const char* env = std::getenv("ELSIM_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return c.diagnostics.output_dir;
}

}  // namespace elsim
