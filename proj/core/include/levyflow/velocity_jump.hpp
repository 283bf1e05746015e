#pragma once

#include <cstddef>
#include <vector>

#include "levyflow/micro_sim.hpp"

namespace levyflow {

/// 1D velocity-jump process on a periodic interval [0, L): particles move at
/// velocities[i] and, at the events of a Poisson clock of the given rate, jump
/// to the neighbouring index i - 1 or i + 1 (cyclically, probability 1/2 each).
/// The phase-space density p_i(t, x) solves the transport system
///   d_t p_i + v_i d_x p_i = rate (p_{i-1} / 2 + p_{i+1} / 2 - p_i).
struct VelocityJumpConfig {
    double L = 1.0;
    std::vector<double> velocities{-2.0, -1.0, 1.0, 2.0};
    double rate = 4.0;
    /// Initial positions ~ N(x0, sigma0^2) wrapped onto the interval; initial
    /// velocity index uniform.
    double x0 = 0.5;
    double sigma0 = 0.05;
};

/// Simulates M independent particles exactly (event by event) up to time t.
/// The returned state carries the particles (X[0] = position, V[0] = velocity)
/// and zero He/N fields on `grid`. Throws InvalidArgument.
[[nodiscard]] MicroState velocity_jump_ensemble(const VelocityJumpConfig& cfg, const Grid& grid, std::size_t M,
                                                double t, RngStream& rng);

} // namespace levyflow
