#pragma once

#include <array>
#include <string>
#include <variant>

#include "levyflow/rng.hpp"

namespace levyflow {

struct GaussianNoise {
    double mean = 0.0;
    double sd = 1.0;
};

/// Draws U ~ Uniform(0,1) and picks N(0,1) on [0, w0), Laplace(0,1) on
/// [w0, w0+w1) and Triangular(left, mode, right) otherwise.
struct SwitchingNoise {
    std::array<double, 3> weights{0.3, 0.2, 0.5};
    double laplace_loc = 0.0;
    double laplace_scale = 1.0;
    double tri_left = -4.0;
    double tri_mode = 0.0;
    double tri_right = 8.0;
};

/// amplitude * sin(sigma) * N(0,1) with sigma ~ Cauchy(loc, scale), redrawn per increment.
struct CauchyModulatedNoise {
    double amplitude = 10.0;
    double cauchy_loc = 0.0;
    double cauchy_scale = 1.0;
};

using NoiseModel = std::variant<GaussianNoise, SwitchingNoise, CauchyModulatedNoise>;

enum class SwitchBranch { Gaussian, Laplace, Triangular };

/// Throws ConfigInvalid when weights do not sum to one or the triangle is malformed.
void validate(const NoiseModel& model);

[[nodiscard]] std::string noise_name(const NoiseModel& model);
/// Accepts "gaussian", "switching", "cauchy_modulated".
[[nodiscard]] NoiseModel noise_from_name(const std::string& name);

[[nodiscard]] SwitchBranch select_switch_branch(const SwitchingNoise& model, double u) noexcept;

/// One velocity increment over a step of length dt. Every law is scaled by sqrt(dt).
/// Throws NonpositiveDt.
[[nodiscard]] double draw_noise(const NoiseModel& model, RngStream& rng, double dt);

/// Increment with the selector U forced (switching law only).
[[nodiscard]] double draw_switching_with_selector(const SwitchingNoise& model, double u, RngStream& rng, double dt);

/// Increment with the modulator sigma and the Gaussian factor z forced.
[[nodiscard]] double cauchy_modulated_increment(const CauchyModulatedNoise& model, double sigma, double z, double dt);

} // namespace levyflow
