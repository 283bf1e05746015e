#include "levyflow/macro_sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "levyflow/errors.hpp"
#include "levyflow/micro_sim.hpp"

namespace levyflow {

void MacroConfig::validate() const {
    const auto check = [](bool ok, const std::string& what) { require(ok, ErrorCode::ConfigInvalid, what); };
    check(tau > 0.0, "tau must be positive");
    check(steps >= 0, "step count must be nonnegative");
    const MacroRates& r = rates;
    for (double v : {r.gamma_1, r.gamma_2, r.gamma_3, r.sigma_W, r.sigma_H, r.gamma_C, r.gamma_g, r.gamma_h, r.gamma_f})
        check(v >= 0.0, "rates must be nonnegative");
    check(alpha.a >= 0.0, "alpha driver needs a >= 0");
    check(alpha.a1 > 0.5 && alpha.a1 < alpha.a2 && alpha.a2 < 1.0, "alpha driver needs 1/2 < a1 < a2 < 1");
    check(solver.tolerance > 0.0 && solver.max_iterations >= 0, "bad solver settings");
    check(initial.h_amplitude >= 0.0 && initial.c_amplitude >= 0.0, "initial amplitudes must be nonnegative");
    check(initial.h_width > 0.0 && initial.c_width > 0.0 && initial.n_smoothing > 0.0, "initial widths must be positive");
    check(qwiener.modes >= 1, "Q-Wiener truncation must be positive");
}

MacroState initial_macro_state(const MacroConfig& cfg) {
    cfg.validate();
    const Grid& g = cfg.grid;
    MacroState s{GridField(g), GridField(g), GridField(g)};
    const double cx = g.x(g.Mx() / 2);
    const double cy = g.y(g.My() / 2);
    const MacroInitial& ic = cfg.initial;
    for (int j = 0; j < g.My(); ++j)
        for (int k = 0; k < g.Mx(); ++k) {
            const double dx = g.x(k) - cx;
            const double dy = g.dim() == 2 ? g.y(j) - cy : 0.0;
            const double r2 = dx * dx + dy * dy;
            s.H.at(k, j) = ic.h_amplitude * std::exp(-0.5 * r2 / (ic.h_width * ic.h_width));
            s.C.at(k, j) = ic.c_amplitude * std::exp(-0.5 * r2 / (ic.c_width * ic.c_width));
        }

    RngStream init(ic.tissue_seed, kInitialConditionStream);
    GridField noise(g);
    for (double& v : noise.values()) v = init.uniform();
    noise = gaussian_smooth(noise, ic.n_smoothing);
    const double lo = noise.min();
    const double hi = noise.max();
    for (std::size_t i = 0; i < noise.size(); ++i) s.N[i] = 0.5 + 0.5 * (hi > lo ? (noise[i] - lo) / (hi - lo) : 0.5);

    s.alpha = alpha_of_h(cfg.alpha, s.H.mean());
    return s;
}

GridField step_N(const MacroState& state, const MacroConfig& cfg, std::size_t* clamps) {
    const double sign = cfg.scheme_literal ? 1.0 : -1.0;
    GridField N = state.N;
    for (std::size_t i = 0; i < N.size(); ++i)
        N[i] += sign * cfg.tau * cfg.rates.gamma_3 * (state.C[i] + state.H[i]) * state.N[i];
    const std::size_t n = N.clamp_nonnegative();
    if (clamps) *clamps += n;
    return N;
}

SparseMatrix h_operator(const GridField& C, const MacroConfig& cfg) {
    const Grid& g = cfg.grid;
    require(C.grid() == g, ErrorCode::GridMismatch, "C lives on another grid");
    const double tau = cfg.tau;
    SparseMatrix A = identity_matrix(g) - (tau * cfg.rates.sigma_H) * laplacian_matrix(g);
    if (cfg.rates.gamma_f == 0.0) return A;

    std::vector<Eigen::Triplet<double>> t;
    const double cx = tau * cfg.rates.gamma_f / (4.0 * g.dx() * g.dx());
    const double cy = tau * cfg.rates.gamma_f / (4.0 * g.dy() * g.dy());
    for (int j = 0; j < g.My(); ++j)
        for (int k = 0; k < g.Mx(); ++k) {
            const auto row = static_cast<int>(g.index(k, j));
            const double f = C.at(k, j) / (1.0 + C.at(k, j));
            const double dCx = C.at(k + 1, j) - C.at(k - 1, j);
            t.emplace_back(row, static_cast<int>(g.index(k + 1, j)), -cx * f * dCx);
            t.emplace_back(row, static_cast<int>(g.index(k - 1, j)), cx * f * dCx);
            if (g.dim() == 2) {
                const double dCy = C.at(k, j + 1) - C.at(k, j - 1);
                t.emplace_back(row, static_cast<int>(g.index(k, j + 1)), -cy * f * dCy);
                t.emplace_back(row, static_cast<int>(g.index(k, j - 1)), cy * f * dCy);
            }
        }
    const auto n = static_cast<Eigen::Index>(g.size());
    SparseMatrix F(n, n);
    F.setFromTriplets(t.begin(), t.end());
    return A + F;
}

SolveResult step_H_with_noise(const MacroState& state, const MacroConfig& cfg, const GridField& dW) {
    require(dW.grid() == cfg.grid, ErrorCode::GridMismatch, "noise field lives on another grid");
    GridField rhs = state.H;
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        const double h = state.H[i];
        rhs[i] += cfg.tau * cfg.rates.gamma_1 * h * (1.0 - h) + cfg.rates.sigma_W * h * dW[i];
    }
    return solve({h_operator(state.C, cfg), std::move(rhs)}, state.H, cfg.solver);
}

SolveResult step_H(const MacroState& state, const MacroConfig& cfg, RngStream& rng) {
    if (!cfg.noise) return step_H_with_noise(state, cfg, GridField(cfg.grid));
    return step_H_with_noise(state, cfg, sample_qwiener_increment(cfg.qwiener, cfg.grid, cfg.tau, rng));
}

namespace {

// tau/(2 d^2) [(a_{-} + a_0)(u_{-} - u_0) + (a_{+} + a_0)(u_{+} - u_0)] summed over the active axes.
GridField flux_divergence(const GridField& a, const GridField& u, double tau) {
    const Grid& g = a.grid();
    GridField out(g);
    const double wx = tau / (2.0 * g.dx() * g.dx());
    const double wy = tau / (2.0 * g.dy() * g.dy());
    for (int j = 0; j < g.My(); ++j)
        for (int k = 0; k < g.Mx(); ++k) {
            const double a0 = a.at(k, j);
            const double u0 = u.at(k, j);
            double v = wx * ((a.at(k - 1, j) + a0) * (u.at(k - 1, j) - u0) + (a.at(k + 1, j) + a0) * (u.at(k + 1, j) - u0));
            if (g.dim() == 2)
                v += wy * ((a.at(k, j - 1) + a0) * (u.at(k, j - 1) - u0) + (a.at(k, j + 1) + a0) * (u.at(k, j + 1) - u0));
            out.at(k, j) = v;
        }
    return out;
}

} // namespace

GridField taxis_term(const MacroState& state, const GridField& N_next, const GridField& H_next, const MacroConfig& cfg) {
    const Grid& g = cfg.grid;
    GridField gcoef(g);
    GridField hcoef(g);
    for (std::size_t i = 0; i < gcoef.size(); ++i) {
        const double c = state.C[i];
        const double sn = c + state.N[i];
        const double sh = c + state.H[i];
        gcoef[i] = cfg.rates.gamma_g * N_next[i] * c / (1.0 + sn * sn);
        hcoef[i] = cfg.rates.gamma_h * H_next[i] * c / (1.0 + sh * sh);
    }
    if (cfg.scheme_literal) return flux_divergence(gcoef, state.H, cfg.tau) - flux_divergence(hcoef, state.N, cfg.tau);
    return flux_divergence(gcoef, state.N, cfg.tau) - flux_divergence(hcoef, state.H, cfg.tau);
}

SolveResult step_C(const MacroState& state, const GridField& N_next, const GridField& H_next, const MacroConfig& cfg) {
    const double alpha = alpha_of_h(cfg.alpha, state.H.mean());
    const FracLapOperator op(cfg.grid, 2.0 * alpha, cfg.frac);
    SparseMatrix A = identity_matrix(cfg.grid) - (cfg.tau * cfg.rates.gamma_C) * op.assemble();

    GridField rhs = state.C;
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        const double c = state.C[i];
        rhs[i] += cfg.tau * cfg.rates.gamma_2 * c * (1.0 - c);
    }
    rhs += taxis_term(state, N_next, H_next, cfg);
    return solve({std::move(A), std::move(rhs)}, state.C, cfg.solver);
}

void macro_step(MacroState& state, const MacroConfig& cfg, RngStream& rng, MacroDiagnostics& diag) {
    state.alpha = alpha_of_h(cfg.alpha, state.H.mean());
    diag.alpha_min = std::min(diag.alpha_min, state.alpha);
    diag.alpha_max = std::max(diag.alpha_max, state.alpha);

    GridField N = step_N(state, cfg, &diag.clamp_events);
    bool nonneg = state.C.min() >= 0.0 && state.H.min() >= 0.0;
    if (nonneg && !cfg.scheme_literal)
        for (std::size_t i = 0; i < N.size(); ++i)
            if (N[i] > state.N[i]) ++diag.n_monotonicity_violations;

    SolveResult H = step_H(state, cfg, rng);
    diag.max_residual = std::max(diag.max_residual, H.residual);
    diag.clamp_events += H.x.clamp_nonnegative();

    SolveResult C = step_C(state, N, H.x, cfg);
    diag.max_residual = std::max(diag.max_residual, C.residual);
    diag.clamp_events += C.x.clamp_nonnegative();

    require(N.all_finite() && H.x.all_finite() && C.x.all_finite(), ErrorCode::InvariantViolation,
            "non-finite value in macro fields at step " + std::to_string(state.step + 1));
    state.N = std::move(N);
    state.H = std::move(H.x);
    state.C = std::move(C.x);
    ++state.step;
    state.t = cfg.tau * state.step;
}

MacroTrajectory run_macro_from(MacroState initial, const MacroConfig& cfg, RngStream& rng, const MacroObserver& observe) {
    cfg.validate();
    MacroTrajectory traj;
    MacroState state = std::move(initial);
    state.alpha = alpha_of_h(cfg.alpha, state.H.mean());
    const auto wanted = [&](int step) {
        return std::find(cfg.snapshot_steps.begin(), cfg.snapshot_steps.end(), step) != cfg.snapshot_steps.end();
    };
    if (wanted(0) || cfg.steps == 0) traj.snapshots.push_back(state);
    if (observe) observe(state);
    for (int n = 1; n <= cfg.steps; ++n) {
        macro_step(state, cfg, rng, traj.diagnostics);
        if (observe) observe(state);
        if (wanted(n) || n == cfg.steps) traj.snapshots.push_back(state);
    }
    return traj;
}

MacroTrajectory run_macro(const MacroConfig& cfg, std::uint64_t base_seed, std::uint64_t sample,
                          const MacroObserver& observe) {
    RngStream rng(base_seed, sample);
    return run_macro_from(initial_macro_state(cfg), cfg, rng, observe);
}

} // namespace levyflow
