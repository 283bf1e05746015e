#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "levyflow/grid.hpp"
#include "levyflow/noise.hpp"
#include "levyflow/rng.hpp"

namespace levyflow {

struct Particle {
    std::array<double, 2> X{};
    std::array<double, 2> V{};
    double Hi = 0.0;
    bool alive = true;
};

/// Parameters of the particle model
///
///   dV = s grad N dt + sigma_L dL,   dX = V dt,
///   dHi/dt = -T(Hi, He) - S1(Hi) + Q(Hi),
///   dHe/dt = sum_cells T(Hi, He) delta_X - S2(He),
///   dN/dt  = -gamma N He  (under the cells),
///
/// with T = k_T Hi / (1 + He), S1 = k_B Hi, Q = q0 / (1 + Hi), S2 = k_V He.
/// He and N are grid fields coupled to the particles through bilinear gather/scatter;
/// the sequestration S2 acts on every node.
struct MicroConfig {
    int M = 2500;
    int steps = 25;
    double tau = 0.1;
    NoiseModel noise = GaussianNoise{};
    double noise_intensity = 0.05;
    double taxis_sign = 1.0;

    double h1 = 0.2;
    double h2 = 1.0;
    double h3 = 0.8;

    double k_T = 1.0;
    double k_B = 0.5;
    double q0 = 1.0;
    double k_V = 0.5;
    double gamma = 0.1;

    double L = 1.0;
    int field_cells = 50;
    double sigma_dep = 0.04;

    // Initial condition.
    double lattice_width = 0.5;
    double hi0 = 0.5;
    double he_amplitude = 0.5;
    double he_width = 0.15;
    double n_smoothing = 0.3;
    /// Seed of the tissue field; fixed so every run of a config sees the same tissue.
    std::uint64_t tissue_seed = 7;

    /// Throws ConfigInvalid.
    void validate() const;
    [[nodiscard]] Grid field_grid() const { return Grid::plane(L, L, field_cells, field_cells); }
};

struct MicroState {
    std::vector<Particle> particles;
    GridField He;
    GridField N;
    double t = 0.0;
    int step = 0;
    /// Clamp events applied to Hi, He and N so far.
    std::size_t clamp_events = 0;
};

/// Stream index reserved for initial-condition randomness (keyed by tissue_seed).
/// Sample ids never reach it.
inline constexpr std::uint64_t kInitialConditionStream = ~std::uint64_t{0};

/// Particles on a centered square lattice of side lattice_width, V = 0, Hi = hi0;
/// He a centered Gaussian bump; N = 0.5 + 0.5 * (smoothed uniform noise rescaled to [0, 1]).
[[nodiscard]] MicroState initial_micro_state(const MicroConfig& cfg);

/// One explicit step; noise increments come from the stream (x then y per alive particle).
/// Throws ConfigInvalid.
void micro_step(MicroState& state, const MicroConfig& cfg, RngStream& rng);

/// Same step with prescribed velocity increments, two per alive particle in particle order.
/// The increments are used as given (no intensity or sqrt(dt) scaling).
void micro_step_with_increments(MicroState& state, const MicroConfig& cfg, std::span<const double> increments);

[[nodiscard]] std::size_t alive_count(const MicroState& state) noexcept;

/// (#alive) / M0.
[[nodiscard]] double survival_fraction(const MicroState& state, std::size_t M0);

struct MicroRun {
    MicroState final_state;
    std::vector<std::size_t> alive_per_step; ///< entry 0 is the initial count
};

/// initial_micro_state followed by cfg.steps steps on stream (base_seed, sample).
[[nodiscard]] MicroRun run_micro(const MicroConfig& cfg, std::uint64_t base_seed, std::uint64_t sample);

/// Gaussian-kernel smoothed (He, N) with bandwidth sigma_dep.
[[nodiscard]] std::pair<GridField, GridField> deposit_fields(const MicroState& state, const MicroConfig& cfg);

/// Nearest-node histogram of alive particle positions normalized to sum to one.
/// On a 1D grid only X[0] is used. Throws NoAliveParticles.
[[nodiscard]] GridField density_histogram(const MicroState& state, const Grid& grid);

/// Bilinear interpolation weights of position (x, y) on a periodic plane grid:
/// four (node index, weight) pairs.
[[nodiscard]] std::array<std::pair<std::size_t, double>, 4> bilinear_stencil(const Grid& grid, double x, double y);

} // namespace levyflow
