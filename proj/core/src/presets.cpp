#include "elsim/presets.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "elsim/errors.hpp"
#include "elsim/snapshot.hpp"
#include "elsim/solver.hpp"

namespace elsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void set_uniform_director(FieldState& s) {
  auto dz = s.d.component(2);
  std::fill(dz.begin(), dz.end(), 1.0);
}

}  // namespace

FieldState make_quiescent(const GridPtr& grid) {
  auto s = FieldState::zeros(grid);
  set_uniform_director(s);
  return s;
}

FieldState make_taylor_green(const GridPtr& grid, double amplitude) {
  auto s = make_quiescent(grid);
  const auto& g = *grid;
  auto u0 = s.u.component(0);
  auto u1 = s.u.component(1);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double X = kTwoPi * g.coordinate(p, 0);
    const double Y = kTwoPi * g.coordinate(p, 1);
    const double cz = g.dim() == 3 ? std::cos(kTwoPi * g.coordinate(p, 2)) : 1.0;
    u0[p] = amplitude * std::sin(X) * std::cos(Y) * cz;
    u1[p] = -amplitude * std::cos(X) * std::sin(Y) * cz;
  }
  return s;
}

FieldState make_perturbed_director(const GridPtr& grid, double amplitude, int modes,
                                   std::uint64_t seed) {
  if (modes < 1) throw ParameterError("perturbed-director: modes must be >= 1");
  if (!(amplitude >= 0.0)) throw ParameterError("perturbed-director: amplitude must be >= 0");
  const auto& g = *grid;
  const int dim = g.dim();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);

  VectorField p(grid, 3);
  // Enumerate wavevectors in a fixed order so the draw sequence is reproducible.
  std::array<int, 3> k{0, 0, 0};
  const int span = 2 * modes + 1;
  const int total = dim == 3 ? span * span * span : span * span;
  for (int idx = 0; idx < total; ++idx) {
    int rest = idx;
    for (int a = dim - 1; a >= 0; --a) {
      k[static_cast<std::size_t>(a)] = rest % span - modes;
      rest /= span;
    }
    if (k == std::array<int, 3>{0, 0, 0}) continue;
    for (std::size_t c = 0; c < 3; ++c) {
      const double a = coef(rng);
      const double b = coef(rng);
      auto pc = p.component(c);
      for (std::size_t q = 0; q < g.size(); ++q) {
        double phase = 0.0;
        for (int ax = 0; ax < dim; ++ax) {
          phase += k[static_cast<std::size_t>(ax)] * g.coordinate(q, ax);
        }
        phase *= kTwoPi;
        pc[q] += a * std::cos(phase) + b * std::sin(phase);
      }
    }
  }
  const double sup = sup_norm(p);
  if (sup > 0.0) p *= 1.0 / sup;

  auto s = FieldState::zeros(grid);
  for (std::size_t q = 0; q < g.size(); ++q) {
    std::array<double, 3> v{amplitude * p.component(0)[q], amplitude * p.component(1)[q],
                            1.0 + amplitude * p.component(2)[q]};
    const double len = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (!(len > 0.0)) throw ParameterError("perturbed-director: perturbation cancels e3");
    for (std::size_t c = 0; c < 3; ++c) s.d.component(c)[q] = v[c] / len;
  }
  return s;
}

FieldState make_initial_state(const RunConfig& cfg, const GridPtr& grid) {
  const auto& ic = cfg.initial;
  FieldState s = FieldState::zeros(grid);
  if (ic.preset == "quiescent") {
    s = make_quiescent(grid);
  } else if (ic.preset == "taylor-green-uniform-director") {
    s = make_taylor_green(grid, ic.velocity_amplitude);
  } else if (ic.preset == "perturbed-director") {
    s = make_perturbed_director(grid, ic.amplitude, ic.modes, cfg.seed);
  } else if (ic.preset == "snapshot") {
    double t_u = 0.0;
    double t_d = 0.0;
    s.u = load_field(ic.u_path, grid, static_cast<std::size_t>(grid->dim()), &t_u);
    s.d = load_field(ic.d_path, grid, 3, &t_d);
    if (t_u != t_d) throw IoError("snapshot times of u and d differ");
    s.time = t_u;
  } else {
    throw ParameterError("unknown initial-condition preset '" + ic.preset + "'");
  }
  return prepare_initial_state(std::move(s), cfg.stepper.dealias);
}

}  // namespace elsim
