#include "levyflow/velocity_jump.hpp"

#include <algorithm>
#include <cmath>

#include "levyflow/errors.hpp"

namespace levyflow {

MicroState velocity_jump_ensemble(const VelocityJumpConfig& cfg, const Grid& grid, std::size_t M, double t,
                                  RngStream& rng) {
    require(cfg.L > 0.0 && !cfg.velocities.empty(), ErrorCode::InvalidArgument, "need L > 0 and a velocity set");
    require(cfg.rate >= 0.0 && cfg.sigma0 >= 0.0 && t >= 0.0, ErrorCode::InvalidArgument,
            "rate, sigma0 and t must be nonnegative");
    const auto n = static_cast<int>(cfg.velocities.size());

    MicroState state{{}, GridField(grid), GridField(grid)};
    state.t = t;
    state.particles.resize(M);
    for (Particle& p : state.particles) {
        double x = cfg.x0 + cfg.sigma0 * rng.normal();
        int i = std::min(static_cast<int>(rng.uniform() * n), n - 1);
        double now = 0.0;
        while (true) {
            const double wait = cfg.rate > 0.0 ? rng.exponential(cfg.rate) : INFINITY;
            if (now + wait >= t) {
                x += cfg.velocities[static_cast<std::size_t>(i)] * (t - now);
                break;
            }
            x += cfg.velocities[static_cast<std::size_t>(i)] * wait;
            now += wait;
            i = (i + (rng.uniform() < 0.5 ? n - 1 : 1)) % n;
        }
        x = std::fmod(x, cfg.L);
        if (x < 0.0) x += cfg.L;
        if (x >= cfg.L) x = 0.0;
        p.X = {x, 0.0};
        p.V = {cfg.velocities[static_cast<std::size_t>(i)], 0.0};
    }
    return state;
}

} // namespace levyflow
