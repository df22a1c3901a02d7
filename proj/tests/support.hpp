#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>

#include "elsim/field.hpp"
#include "elsim/physics.hpp"
#include "elsim/spectral.hpp"

namespace elsim::testing {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Samples f(x) into every point of component c.
template <class F>
void sample(FieldData& field, std::size_t c, F f) {
  const auto& g = field.grid();
  auto out = field.component(c);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const std::array<double, 3> x{g.coordinate(p, 0), g.coordinate(p, 1),
                                  g.dim() == 3 ? g.coordinate(p, 2) : 0.0};
    out[p] = f(x);
  }
}

/// Random trigonometric polynomial with |k_j| <= kmax in every component,
/// coefficients uniform in [-scale, scale].
inline void fill_random_smooth(FieldData& field, std::mt19937_64& rng, int kmax,
                               double scale = 1.0) {
  std::uniform_real_distribution<double> coef(-scale, scale);
  const auto& g = field.grid();
  const int dim = g.dim();
  const int span = 2 * kmax + 1;
  const int total = dim == 3 ? span * span * span : span * span;
  for (std::size_t c = 0; c < field.components(); ++c) {
    auto out = field.component(c);
    std::fill(out.begin(), out.end(), coef(rng));
    for (int idx = 0; idx < total; ++idx) {
      std::array<int, 3> k{0, 0, 0};
      int rest = idx;
      for (int a = dim - 1; a >= 0; --a) {
        k[static_cast<std::size_t>(a)] = rest % span - kmax;
        rest /= span;
      }
      if (k == std::array<int, 3>{0, 0, 0}) continue;
      const double a = coef(rng) / (1.0 + k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
      const double b = coef(rng) / (1.0 + k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
      for (std::size_t p = 0; p < g.size(); ++p) {
        double ph = 0.0;
        for (int ax = 0; ax < dim; ++ax) ph += k[static_cast<std::size_t>(ax)] * g.coordinate(p, ax);
        ph *= kTwoPi;
        out[p] += a * std::cos(ph) + b * std::sin(ph);
      }
    }
  }
}

/// Smooth state: divergence-free u, d close to the unit sphere.
inline FieldState random_state(const GridPtr& grid, std::uint64_t seed, int kmax = 3,
                               double u_scale = 1.0, double d_scale = 0.4) {
  std::mt19937_64 rng(seed);
  auto s = FieldState::zeros(grid);
  fill_random_smooth(s.u, rng, kmax, u_scale);
  s.u = leray_project(s.u);
  fill_random_smooth(s.d, rng, kmax, d_scale);
  auto dz = s.d.component(2);
  for (auto& v : dz) v += 1.0;
  return s;
}

inline double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace elsim::testing
