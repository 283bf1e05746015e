#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "levyflow/errors.hpp"
#include "levyflow/macro_sim.hpp"

using namespace levyflow;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::Io;
}

MacroState uniform_state(const Grid& g, double H, double C, double N) {
    return {GridField(g, H), GridField(g, C), GridField(g, N)};
}

MacroState random_state(const Grid& g, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(0.1, 0.9);
    MacroState s = uniform_state(g, 0, 0, 0);
    for (auto* f : {&s.H, &s.C, &s.N})
        for (double& v : f->values()) v = u(gen);
    return s;
}

double rel_diff(const GridField& a, const GridField& b) {
    return (a - b).max_abs() / std::max(1e-300, b.max_abs());
}

// FNV-1a over the raw bytes of the fields.
std::uint64_t fnv(const MacroState& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto* f : {&s.H, &s.C, &s.N})
        for (double v : f->values()) {
            unsigned char b[8];
            std::memcpy(b, &v, 8);
            for (unsigned char c : b) {
                h ^= c;
                h *= 1099511628211ull;
            }
        }
    return h;
}

} // namespace

TEST_CASE("N update by hand") {
    MacroConfig cfg;
    const auto s = uniform_state(cfg.grid, 0.5, 1.5, 1.0);
    // 1 - 0.1 * 0.015 * 2
    const auto N = step_N(s, cfg);
    CHECK(N.min() == doctest::Approx(0.997).epsilon(1e-15));
    CHECK(N.max() == doctest::Approx(0.997).epsilon(1e-15));

    cfg.scheme_literal = true;
    CHECK(step_N(s, cfg).max() == doctest::Approx(1.003).epsilon(1e-15));

    MacroConfig strong;
    strong.rates.gamma_3 = 100.0;
    std::size_t clamps = 0;
    const auto Z = step_N(s, strong, &clamps);
    CHECK(Z.max() == 0.0);
    CHECK(clamps == s.N.size());
}

TEST_CASE("H update on a homogeneous state") {
    MacroConfig cfg;
    cfg.noise = false;
    const auto s = uniform_state(cfg.grid, 0.5, 0.7, 0.9);
    RngStream rng(1, 0);
    const auto r = step_H(s, cfg, rng);
    // 0.5 + 0.1 * 0.005 * 0.5 * 0.5
    CHECK(r.x.min() == doctest::Approx(0.500125).epsilon(1e-12));
    CHECK(r.x.max() == doctest::Approx(0.500125).epsilon(1e-12));
    CHECK(r.residual <= cfg.solver.tolerance);

    // multiplicative noise: H + sigma_W H dW on top of the logistic term
    const GridField dW(cfg.grid, 0.2);
    const auto n = step_H_with_noise(s, cfg, dW);
    CHECK(n.x.max() == doctest::Approx(0.500125 + 0.131 * 0.5 * 0.2).epsilon(1e-12));
    CHECK(code_of([&] { (void)step_H_with_noise(s, cfg, GridField(Grid::line(1.0, 4))); }) == ErrorCode::GridMismatch);
}

TEST_CASE("H operator rows") {
    MacroConfig cfg;
    const auto s = random_state(cfg.grid, 4);
    const auto A = h_operator(s.C, cfg);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(A.cols());
    const Eigen::VectorXd rows = A * ones;
    for (Eigen::Index i = 0; i < rows.size(); ++i) CHECK(rows[i] == doctest::Approx(1.0).epsilon(1e-14));

    // action on a field against the stencil written out
    const auto& g = cfg.grid;
    Eigen::VectorXd h(A.cols());
    for (std::size_t i = 0; i < s.H.size(); ++i) h[static_cast<Eigen::Index>(i)] = s.H[i];
    const Eigen::VectorXd Ah = A * h;
    const double tau = cfg.tau;
    const double d2 = g.dx() * g.dx();
    for (auto [k, j] : {std::pair{0, 0}, {5, 7}, {20, 20}}) {
        const auto H = [&](int a, int b) { return s.H.at(a, b); };
        const auto C = [&](int a, int b) { return s.C.at(a, b); };
        const double lap = (H(k + 1, j) + H(k - 1, j) + H(k, j + 1) + H(k, j - 1) - 4.0 * H(k, j)) / d2;
        const double f = C(k, j) / (1.0 + C(k, j));
        const double cross = ((H(k + 1, j) - H(k - 1, j)) * (C(k + 1, j) - C(k - 1, j)) +
                              (H(k, j + 1) - H(k, j - 1)) * (C(k, j + 1) - C(k, j - 1))) / (4.0 * d2);
        const double expected = H(k, j) - tau * cfg.rates.sigma_H * lap - tau * cfg.rates.gamma_f * f * cross;
        CHECK(Ah[static_cast<Eigen::Index>(g.index(k, j))] == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("C update conserves mass without logistic growth") {
    MacroConfig cfg;
    cfg.rates.gamma_2 = 0.0;
    cfg.rates.gamma_C = 0.01;
    cfg.rates.gamma_g = 0.05;
    cfg.rates.gamma_h = 0.05;
    cfg.solver.tolerance = 1e-13;
    for (bool literal : {false, true}) {
        cfg.scheme_literal = literal;
        const auto s = random_state(cfg.grid, 9);
        const auto Nn = random_state(cfg.grid, 10).N;
        const auto Hn = random_state(cfg.grid, 11).H;
        CHECK(std::abs(taxis_term(s, Nn, Hn, cfg).sum()) < 1e-13);
        const auto r = step_C(s, Nn, Hn, cfg);
        CHECK(r.x.sum() == doctest::Approx(s.C.sum()).epsilon(1e-11));
    }
}

TEST_CASE("homogeneous states stay homogeneous") {
    MacroConfig cfg;
    cfg.noise = false;
    cfg.steps = 20;
    auto init = uniform_state(cfg.grid, 0.3, 0.6, 0.8);
    RngStream rng(1, 1);
    const auto traj = run_macro_from(init, cfg, rng);
    const auto& last = traj.snapshots.back();
    for (const auto* f : {&last.H, &last.C, &last.N}) CHECK(f->max() - f->min() < 1e-10);
    CHECK(last.N.max() < 0.8);
}

TEST_CASE("translation equivariance without noise") {
    MacroConfig cfg;
    cfg.noise = false;
    cfg.steps = 5;
    const auto base = initial_macro_state(cfg);
    auto moved = base;
    moved.H = shifted(base.H, 4, -3);
    moved.C = shifted(base.C, 4, -3);
    moved.N = shifted(base.N, 4, -3);
    RngStream r1(1, 0);
    RngStream r2(1, 0);
    const auto a = run_macro_from(base, cfg, r1).snapshots.back();
    const auto b = run_macro_from(moved, cfg, r2).snapshots.back();
    CHECK(rel_diff(shifted(a.H, 4, -3), b.H) < 1e-9);
    CHECK(rel_diff(shifted(a.C, 4, -3), b.C) < 1e-9);
    CHECK(rel_diff(shifted(a.N, 4, -3), b.N) < 1e-9);
}

TEST_CASE("default run invariants") {
    MacroConfig cfg;
    int calls = 0;
    double prev_t = -1.0;
    GridField prevN = initial_macro_state(cfg).N;
    const auto traj = run_macro(cfg, 1, 0, [&](const MacroState& s) {
        CHECK(s.step == calls);
        CHECK(s.t == doctest::Approx(cfg.tau * calls));
        CHECK(s.t > prev_t);
        prev_t = s.t;
        for (std::size_t i = 0; i < s.N.size(); ++i) CHECK(s.N[i] <= prevN[i]);
        prevN = s.N;
        CHECK(s.H.min() >= 0.0);
        CHECK(s.C.min() >= 0.0);
        CHECK((s.alpha >= 0.6 && s.alpha <= 0.9));
        ++calls;
    });
    CHECK(calls == cfg.steps + 1);
    CHECK(traj.snapshots.size() == 4);
    CHECK(traj.snapshots[1].step == 50);
    CHECK(traj.diagnostics.n_monotonicity_violations == 0);
    CHECK(traj.diagnostics.max_residual <= cfg.solver.tolerance);
    CHECK(traj.diagnostics.alpha_min >= 0.6);
    CHECK(traj.diagnostics.alpha_max <= 0.9);
}

TEST_CASE("zero steps keep the initial state") {
    MacroConfig cfg;
    cfg.steps = 0;
    const auto traj = run_macro(cfg, 1, 0);
    REQUIRE(traj.snapshots.size() == 1);
    const auto init = initial_macro_state(cfg);
    CHECK(traj.snapshots[0].H == init.H);
    CHECK(traj.snapshots[0].C == init.C);
    CHECK(traj.snapshots[0].N == init.N);
    CHECK(traj.snapshots[0].alpha == doctest::Approx(alpha_of_h(cfg.alpha, init.H.mean())));
}

TEST_CASE("initial state") {
    MacroConfig cfg;
    const auto s = initial_macro_state(cfg);
    CHECK(s.H.at(10, 10) == doctest::Approx(0.1));
    CHECK(s.C.at(10, 10) == doctest::Approx(1.0));
    CHECK(s.H.at(10, 13) == doctest::Approx(0.1 * std::exp(-0.5 * 0.09 / 0.09)));
    CHECK(s.N.min() == doctest::Approx(0.5));
    CHECK(s.N.max() == doctest::Approx(1.0));
}

TEST_CASE("solver failure surfaces as SolverDiverged") {
    MacroConfig cfg;
    cfg.solver.tolerance = 1e-16;
    cfg.solver.max_iterations = 1;
    auto s = random_state(cfg.grid, 3);
    RngStream rng(1, 0);
    MacroDiagnostics d;
    CHECK(code_of([&] { macro_step(s, cfg, rng, d); }) == ErrorCode::SolverDiverged);
}

TEST_CASE("validation") {
    const auto bad = [](auto mutate) {
        MacroConfig c;
        mutate(c);
        return code_of([&] { c.validate(); });
    };
    CHECK(bad([](MacroConfig& c) { c.tau = 0.0; }) == ErrorCode::ConfigInvalid);
    CHECK(bad([](MacroConfig& c) { c.steps = -1; }) == ErrorCode::ConfigInvalid);
    CHECK(bad([](MacroConfig& c) { c.rates.sigma_H = -1.0; }) == ErrorCode::ConfigInvalid);
    CHECK(bad([](MacroConfig& c) { c.alpha.a1 = 0.4; }) == ErrorCode::ConfigInvalid);
    CHECK(bad([](MacroConfig& c) { c.alpha.a2 = 1.0; }) == ErrorCode::ConfigInvalid);
    CHECK(bad([](MacroConfig& c) { c.initial.h_width = 0.0; }) == ErrorCode::ConfigInvalid);
    CHECK(bad([](MacroConfig& c) { c.qwiener.modes = 0; }) == ErrorCode::ConfigInvalid);

    MacroConfig nyq;
    nyq.qwiener.modes = 11;
    RngStream rng(1, 0);
    const auto s = initial_macro_state(nyq);
    CHECK(code_of([&] { (void)step_H(s, nyq, rng); }) == ErrorCode::NyquistViolation);
}

TEST_CASE("golden trajectory digest") {
    // Regression pin for the default configuration (seed 1, sample 0, 10 steps).
    // Bit-level: x86-64 with IEEE double and no fast-math.
    MacroConfig cfg;
    cfg.steps = 10;
    const auto traj = run_macro(cfg, 1, 0);
    const auto h = fnv(traj.snapshots.back());
    CHECK(h == 450632435680250554ull);
}
