#include "levyflow/micro_sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "levyflow/errors.hpp"

namespace levyflow {

void MicroConfig::validate() const {
    const auto check = [](bool ok, const std::string& what) { require(ok, ErrorCode::ConfigInvalid, what); };
    check(M >= 1, "M must be at least 1");
    check(steps >= 0, "step count must be nonnegative");
    check(tau > 0.0, "tau must be positive");
    check(tau * k_V <= 1.0, "tau * k_V must not exceed 1");
    check(h1 >= 0.0 && h1 < h2, "kill thresholds need 0 <= h1 < h2");
    check(h3 > 0.0, "h3 must be positive");
    check(k_T >= 0.0 && k_B >= 0.0 && q0 >= 0.0 && k_V >= 0.0 && gamma >= 0.0, "rates must be nonnegative");
    check(noise_intensity >= 0.0, "noise intensity must be nonnegative");
    check(taxis_sign == 1.0 || taxis_sign == -1.0, "taxis sign must be +1 or -1");
    check(L > 0.0 && field_cells >= 2, "field grid needs L > 0 and at least 2 cells");
    check(sigma_dep > 0.0, "sigma_dep must be positive");
    check(lattice_width > 0.0 && lattice_width <= L, "lattice width must lie in (0, L]");
    check(hi0 >= 0.0 && he_amplitude >= 0.0 && he_width > 0.0 && n_smoothing > 0.0, "bad initial-condition parameters");
    levyflow::validate(noise);
}

std::array<std::pair<std::size_t, double>, 4> bilinear_stencil(const Grid& grid, double x, double y) {
    const double fx = x / grid.dx();
    const double fy = y / grid.dy();
    const double kx = std::floor(fx);
    const double ky = std::floor(fy);
    const double a = fx - kx;
    const double b = fy - ky;
    const int k = static_cast<int>(kx);
    const int j = static_cast<int>(ky);
    return {{{grid.index(k, j), (1.0 - a) * (1.0 - b)},
             {grid.index(k + 1, j), a * (1.0 - b)},
             {grid.index(k, j + 1), (1.0 - a) * b},
             {grid.index(k + 1, j + 1), a * b}}};
}

namespace {

double wrap_position(double x, double L) {
    double r = std::fmod(x, L);
    if (r < 0.0) r += L;
    if (r >= L) r = 0.0;
    return r;
}

double gather(const GridField& f, const std::array<std::pair<std::size_t, double>, 4>& st) {
    double v = 0.0;
    for (const auto& [i, w] : st) v += w * f[i];
    return v;
}

template <class Increment>
void step_impl(MicroState& state, const MicroConfig& cfg, Increment&& next_increment) {
    cfg.validate();
    const Grid& g = state.N.grid();
    require(state.He.grid() == g, ErrorCode::GridMismatch, "He and N live on different grids");
    const double tau = cfg.tau;

    // Centered-difference tissue gradient at the nodes, frozen for this step.
    GridField gx(g);
    GridField gy(g);
    for (int j = 0; j < g.My(); ++j)
        for (int k = 0; k < g.Mx(); ++k) {
            gx.at(k, j) = (state.N.at(k + 1, j) - state.N.at(k - 1, j)) / (2.0 * g.dx());
            gy.at(k, j) = (state.N.at(k, j + 1) - state.N.at(k, j - 1)) / (2.0 * g.dy());
        }

    for (Particle& p : state.particles) {
        if (!p.alive) continue;
        const auto st = bilinear_stencil(g, p.X[0], p.X[1]);
        const double dLx = next_increment();
        const double dLy = next_increment();
        p.V[0] += cfg.taxis_sign * gather(gx, st) * tau + dLx;
        p.V[1] += cfg.taxis_sign * gather(gy, st) * tau + dLy;
        p.X[0] = wrap_position(p.X[0] + p.V[0] * tau, cfg.L);
        p.X[1] = wrap_position(p.X[1] + p.V[1] * tau, cfg.L);
    }

    // Proton and tissue exchange, all gathers from the start-of-step fields.
    GridField He = state.He;
    GridField N = state.N;
    for (Particle& p : state.particles) {
        if (!p.alive) continue;
        const auto st = bilinear_stencil(g, p.X[0], p.X[1]);
        const double he = gather(state.He, st);
        const double T = cfg.k_T * p.Hi / (1.0 + he);
        const double dHi = -T - cfg.k_B * p.Hi + cfg.q0 / (1.0 + p.Hi);
        p.Hi += tau * dHi;
        if (p.Hi < 0.0) {
            p.Hi = 0.0;
            ++state.clamp_events;
        }
        for (const auto& [i, w] : st) {
            He[i] += w * tau * T;
            N[i] -= w * tau * cfg.gamma * state.N[i] * he;
        }
    }
    // Vascular sequestration acts on the whole tissue, not only under the cells.
    for (std::size_t i = 0; i < He.size(); ++i) He[i] -= tau * cfg.k_V * state.He[i];
    state.clamp_events += He.clamp_nonnegative();
    state.clamp_events += N.clamp_nonnegative();
    state.He = std::move(He);
    state.N = std::move(N);

    for (Particle& p : state.particles) {
        if (!p.alive) continue;
        const double he = gather(state.He, bilinear_stencil(g, p.X[0], p.X[1]));
        if (p.Hi < cfg.h1 || p.Hi > cfg.h2 || he > cfg.h3) p.alive = false;
    }
    ++state.step;
    state.t = tau * state.step;
}

} // namespace

MicroState initial_micro_state(const MicroConfig& cfg) {
    cfg.validate();
    const Grid g = cfg.field_grid();
    const double c = 0.5 * cfg.L;

    MicroState state{{}, GridField(g), GridField(g)};
    const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(cfg.M))));
    const double spacing = cfg.lattice_width / side;
    state.particles.reserve(static_cast<std::size_t>(cfg.M));
    for (int n = 0; n < cfg.M; ++n) {
        Particle p;
        p.X = {c - 0.5 * cfg.lattice_width + (n % side + 0.5) * spacing,
               c - 0.5 * cfg.lattice_width + (n / side + 0.5) * spacing};
        p.Hi = cfg.hi0;
        state.particles.push_back(p);
    }

    for (int j = 0; j < g.My(); ++j)
        for (int k = 0; k < g.Mx(); ++k) {
            const double dx = g.x(k) - c;
            const double dy = g.y(j) - c;
            state.He.at(k, j) = cfg.he_amplitude * std::exp(-0.5 * (dx * dx + dy * dy) / (cfg.he_width * cfg.he_width));
        }

    RngStream init(cfg.tissue_seed, kInitialConditionStream);
    GridField noise(g);
    for (double& v : noise.values()) v = init.uniform();
    noise = gaussian_smooth(noise, cfg.n_smoothing);
    const double lo = noise.min();
    const double hi = noise.max();
    for (std::size_t i = 0; i < noise.size(); ++i) {
        const double s = hi > lo ? (noise[i] - lo) / (hi - lo) : 0.5;
        state.N[i] = 0.5 + 0.5 * s;
    }
    return state;
}

void micro_step(MicroState& state, const MicroConfig& cfg, RngStream& rng) {
    step_impl(state, cfg, [&] { return cfg.noise_intensity * draw_noise(cfg.noise, rng, cfg.tau); });
}

void micro_step_with_increments(MicroState& state, const MicroConfig& cfg, std::span<const double> increments) {
    const auto needed = 2 * alive_count(state);
    require(increments.size() == needed, ErrorCode::InvalidArgument,
            "expected " + std::to_string(needed) + " increments, got " + std::to_string(increments.size()));
    std::size_t next = 0;
    step_impl(state, cfg, [&] { return increments[next++]; });
}

std::size_t alive_count(const MicroState& state) noexcept {
    return static_cast<std::size_t>(
        std::count_if(state.particles.begin(), state.particles.end(), [](const Particle& p) { return p.alive; }));
}

double survival_fraction(const MicroState& state, std::size_t M0) {
    require(M0 >= 1, ErrorCode::InvalidArgument, "initial population must be positive");
    return static_cast<double>(alive_count(state)) / static_cast<double>(M0);
}

MicroRun run_micro(const MicroConfig& cfg, std::uint64_t base_seed, std::uint64_t sample) {
    MicroRun run{initial_micro_state(cfg), {}};
    RngStream rng(base_seed, sample);
    run.alive_per_step.reserve(static_cast<std::size_t>(cfg.steps) + 1);
    run.alive_per_step.push_back(alive_count(run.final_state));
    for (int n = 0; n < cfg.steps; ++n) {
        micro_step(run.final_state, cfg, rng);
        run.alive_per_step.push_back(alive_count(run.final_state));
    }
    return run;
}

std::pair<GridField, GridField> deposit_fields(const MicroState& state, const MicroConfig& cfg) {
    require(cfg.sigma_dep > 0.0, ErrorCode::ConfigInvalid, "sigma_dep must be positive");
    return {gaussian_smooth(state.He, cfg.sigma_dep), gaussian_smooth(state.N, cfg.sigma_dep)};
}

GridField density_histogram(const MicroState& state, const Grid& grid) {
    GridField h(grid);
    std::size_t count = 0;
    for (const Particle& p : state.particles) {
        if (!p.alive) continue;
        const int k = static_cast<int>(std::lround(p.X[0] / grid.dx()));
        const int j = grid.dim() == 2 ? static_cast<int>(std::lround(p.X[1] / grid.dy())) : 0;
        h.at(k, j) += 1.0;
        ++count;
    }
    require(count > 0, ErrorCode::NoAliveParticles, "histogram needs at least one alive particle");
    h *= 1.0 / static_cast<double>(count);
    return h;
}

} // namespace levyflow
