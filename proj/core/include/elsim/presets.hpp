#pragma once

#include <cstdint>

#include "elsim/config.hpp"
#include "elsim/physics.hpp"

namespace elsim {

/// u = 0, d = (0, 0, 1).
FieldState make_quiescent(const GridPtr& grid);

/// d = (0, 0, 1) and the Taylor-Green vortex of amplitude U:
/// 2D  u = U (sin X cos Y, -cos X sin Y),
/// 3D  u = U (sin X cos Y cos Z, -cos X sin Y cos Z, 0),  X = 2 pi x1 etc.
FieldState make_taylor_green(const GridPtr& grid, double amplitude = 1.0);

/// u = 0, d = (e3 + amplitude p) / |e3 + amplitude p| with p a seeded random
/// trigonometric field (|k_j| <= modes) scaled to unit sup norm.
FieldState make_perturbed_director(const GridPtr& grid, double amplitude, int modes,
                                   std::uint64_t seed);

/// Builds the configured initial condition and applies prepare_initial_state.
/// Snapshot presets take their start time from the u file.
FieldState make_initial_state(const RunConfig& cfg, const GridPtr& grid);

}  // namespace elsim
