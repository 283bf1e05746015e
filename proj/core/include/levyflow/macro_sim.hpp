#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "levyflow/drivers.hpp"
#include "levyflow/frac_laplacian.hpp"
#include "levyflow/grid.hpp"
#include "levyflow/qwiener.hpp"
#include "levyflow/rng.hpp"
#include "levyflow/sparse_solver.hpp"

namespace levyflow {

/// Rates of the macroscopic system
///
///   dH = sigma_H Delta H dt + gamma_1 H (1 - H) dt + gamma_f f(C) grad H . grad C dt + sigma_W H dW,
///   dC = -sigma_C (-Delta)^{alpha_t} C dt + gamma_2 C (1 - C) dt + div(g grad N) dt - div(h grad H) dt,
///   dN = -gamma_3 (C + H) N dt,
///
/// with f = C / (1 + C), g = gamma_g N C / (1 + (C + N)^2), h = gamma_h H C / (1 + (C + H)^2)
/// and alpha_t = alpha_of_h(mean H).
struct MacroRates {
    double gamma_1 = 0.005;
    double gamma_2 = 0.05;
    double gamma_3 = 0.015;
    double sigma_W = 0.131;
    double sigma_H = 0.0008;
    double gamma_C = 0.00035; ///< used as sigma_C
    double gamma_g = 0.0007;
    double gamma_h = 0.0037;
    double gamma_f = 0.0082;
};

struct MacroInitial {
    double h_amplitude = 0.1;
    double h_width = 0.3;
    double c_amplitude = 1.0;
    double c_width = 0.3;
    double n_smoothing = 0.2;
    /// Seed of the tissue field N(0).
    std::uint64_t tissue_seed = 7;
};

struct MacroConfig {
    Grid grid = Grid::plane(2.1, 2.1, 21, 21);
    double tau = 0.1;
    int steps = 150;
    MacroRates rates;
    AlphaOfH alpha;
    QWienerSpec qwiener{2.1, 2.1, 4};
    SolverSettings solver;
    FracLapOptions frac;
    MacroInitial initial;
    bool noise = true;
    /// Pair g with H-differences and h with N-differences, and add R3 instead of subtracting it,
    /// exactly as the printed discretization does.
    bool scheme_literal = false;
    /// Steps at which run_macro records a snapshot; the final state is always recorded.
    std::vector<int> snapshot_steps{0, 50, 100, 150};

    /// Throws ConfigInvalid.
    void validate() const;
};

struct MacroState {
    GridField H;
    GridField C;
    GridField N;
    double t = 0.0;
    int step = 0;
    double alpha = 0.0;
};

struct MacroDiagnostics {
    std::size_t clamp_events = 0;
    std::size_t n_monotonicity_violations = 0;
    double max_residual = 0.0;
    double alpha_min = 1.0;
    double alpha_max = 0.0;
};

/// Centered Gaussian bumps for H and C, N = 0.5 + 0.5 * (smoothed seeded noise rescaled to [0, 1]).
/// The tissue noise uses the reserved initial-condition stream of initial.tissue_seed.
[[nodiscard]] MacroState initial_macro_state(const MacroConfig& cfg);

/// N^{n+1} = N^n - tau gamma_3 (C^n + H^n) N^n, clamped at zero.
[[nodiscard]] GridField step_N(const MacroState& state, const MacroConfig& cfg, std::size_t* clamps = nullptr);

/// Operator (I - tau sigma_H Delta_h - tau gamma_f F) of the implicit H update, where
/// (F u)_{k,j} = f_{k,j} [(u_{k+1,j} - u_{k-1,j})(C_{k+1,j} - C_{k-1,j}) / (4 dx^2) + (same in y)].
[[nodiscard]] SparseMatrix h_operator(const GridField& C, const MacroConfig& cfg);

/// Implicit H update with right-hand side H + tau gamma_1 H (1 - H) + sigma_W H dW.
/// dW is drawn from the stream when cfg.noise is set (otherwise no draws happen).
[[nodiscard]] SolveResult step_H(const MacroState& state, const MacroConfig& cfg, RngStream& rng);

/// Same with a prescribed noise increment.
[[nodiscard]] SolveResult step_H_with_noise(const MacroState& state, const MacroConfig& cfg, const GridField& dW);

/// Explicit taxis term tau [div(g grad N) - div(h grad H)] in conservative two-point flux form.
[[nodiscard]] GridField taxis_term(const MacroState& state, const GridField& N_next, const GridField& H_next,
                                   const MacroConfig& cfg);

/// Implicit fractional C update with exponent p = 2 alpha(mean H^n).
[[nodiscard]] SolveResult step_C(const MacroState& state, const GridField& N_next, const GridField& H_next,
                                 const MacroConfig& cfg);

/// One full N, H, C step. Throws SolverDiverged.
void macro_step(MacroState& state, const MacroConfig& cfg, RngStream& rng, MacroDiagnostics& diag);

struct MacroTrajectory {
    std::vector<MacroState> snapshots;
    MacroDiagnostics diagnostics;
};

using MacroObserver = std::function<void(const MacroState&)>;

/// Runs cfg.steps steps on stream (base_seed, sample). The observer, if set,
/// sees the initial state and the state after every step.
[[nodiscard]] MacroTrajectory run_macro(const MacroConfig& cfg, std::uint64_t base_seed, std::uint64_t sample,
                                        const MacroObserver& observe = {});

/// Runs from a given initial state.
[[nodiscard]] MacroTrajectory run_macro_from(MacroState initial, const MacroConfig& cfg, RngStream& rng,
                                             const MacroObserver& observe = {});

} // namespace levyflow
