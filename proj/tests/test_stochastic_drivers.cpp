#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "levyflow/drivers.hpp"
#include "levyflow/errors.hpp"
#include "levyflow/noise.hpp"
#include "levyflow/qwiener.hpp"
#include "levyflow/rng.hpp"

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

struct Stats {
    double mean = 0.0;
    double var = 0.0;
};

template <class F>
Stats sample_stats(int n, F&& draw) {
    double s = 0.0;
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = draw();
        s += x;
        s2 += x * x;
    }
    const double m = s / n;
    return {m, s2 / n - m * m};
}

} // namespace

TEST_CASE("philox known answers") {
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
    RngStream a(42, 3);
    RngStream b(42, 3);
    RngStream c(42, 4);
    RngStream d(43, 3);
    int same_c = 0;
    int same_d = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        same_c += x == c.next_u64();
        same_d += x == d.next_u64();
    }
    CHECK(same_c == 0);
    CHECK(same_d == 0);

    RngStream n1(9, 0);
    RngStream n2(9, 0);
    for (int i = 0; i < 101; ++i) CHECK(n1.normal() == n2.normal());
}

TEST_CASE("neighbouring streams are uncorrelated") {
    RngStream a(2024, 0);
    RngStream b(2024, 1);
    const int n = 100000;
    double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
    for (int i = 0; i < n; ++i) {
        const double x = a.uniform();
        const double y = b.uniform();
        sa += x;
        sb += y;
        sab += x * y;
        saa += x * x;
        sbb += y * y;
    }
    const double cov = sab / n - sa / n * sb / n;
    const double corr = cov / std::sqrt((saa / n - sa * sa / n / n) * (sbb / n - sb * sb / n / n));
    CHECK(std::abs(corr) < 0.015);
}

TEST_CASE("uniform ranges") {
    RngStream r(1, 1);
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform();
        const double v = r.uniform_open();
        CHECK((u >= 0.0 && u < 1.0));
        CHECK((v > 0.0 && v < 1.0));
    }
}

TEST_CASE("quantile functions") {
    CHECK(laplace_quantile(0.5, 1.0, 2.0) == doctest::Approx(1.0));
    // P(X <= loc + b ln 2) = 1 - exp(-ln 2) / 2 = 3/4
    CHECK(laplace_quantile(0.75, 0.0, 1.0) == doctest::Approx(std::log(2.0)));
    CHECK(cauchy_quantile(0.75, 0.0, 3.0) == doctest::Approx(3.0));
    CHECK(triangular_quantile(0.0, -4, 0, 8) == doctest::Approx(-4.0));
    CHECK(triangular_quantile(1.0, -4, 0, 8) == doctest::Approx(8.0));
    // F(mode) = (mode - left) / (right - left)
    CHECK(triangular_quantile(1.0 / 3.0, -4, 0, 8) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gaussian increments have variance dt") {
    RngStream r(77, 0);
    const double dt = 0.25;
    const auto s = sample_stats(1'000'000, [&] { return draw_noise(GaussianNoise{}, r, dt); });
    CHECK(std::abs(s.mean) < 2.5e-3);
    CHECK(s.var == doctest::Approx(dt).epsilon(8e-3));
}

TEST_CASE("switching selector") {
    const SwitchingNoise m{};
    CHECK(select_switch_branch(m, 0.0) == SwitchBranch::Gaussian);
    CHECK(select_switch_branch(m, 0.1) == SwitchBranch::Gaussian);
    CHECK(select_switch_branch(m, 0.2999999) == SwitchBranch::Gaussian);
    CHECK(select_switch_branch(m, 0.3) == SwitchBranch::Laplace);
    CHECK(select_switch_branch(m, 0.4999999) == SwitchBranch::Laplace);
    CHECK(select_switch_branch(m, 0.5) == SwitchBranch::Triangular);
    CHECK(select_switch_branch(m, 0.999) == SwitchBranch::Triangular);

    // Forcing U = 0.1 draws from the Gaussian branch: the stream continues with one normal.
    RngStream a(5, 5);
    RngStream b(5, 5);
    const double dt = 0.04;
    CHECK(draw_switching_with_selector(m, 0.1, a, dt) == std::sqrt(dt) * b.normal());
    RngStream c(5, 6);
    RngStream d(5, 6);
    CHECK(draw_switching_with_selector(m, 0.4, c, dt) == std::sqrt(dt) * d.laplace(0.0, 1.0));
    RngStream e(5, 7);
    RngStream f(5, 7);
    CHECK(draw_switching_with_selector(m, 0.9, e, dt) == std::sqrt(dt) * f.triangular(-4.0, 0.0, 8.0));
}

TEST_CASE("switching mixture moments") {
    // mixture of N(0,1) w 0.3, Laplace(0,1) w 0.2, Triangular(-4,0,8) w 0.5
    const double tri_mean = (-4.0 + 0.0 + 8.0) / 3.0;
    const double tri_var = (16.0 + 0.0 + 64.0 - 0.0 + 32.0 - 0.0) / 18.0;
    const double mean = 0.5 * tri_mean;
    const double second = 0.3 * 1.0 + 0.2 * 2.0 + 0.5 * (tri_var + tri_mean * tri_mean);
    RngStream r(8, 1);
    const int n = 400000;
    int branch[3] = {0, 0, 0};
    RngStream sel(8, 2);
    for (int i = 0; i < n; ++i) ++branch[static_cast<int>(select_switch_branch(SwitchingNoise{}, sel.uniform()))];
    CHECK(branch[0] / double(n) == doctest::Approx(0.3).epsilon(0.02));
    CHECK(branch[1] / double(n) == doctest::Approx(0.2).epsilon(0.02));
    CHECK(branch[2] / double(n) == doctest::Approx(0.5).epsilon(0.02));

    const auto s = sample_stats(n, [&] { return draw_noise(SwitchingNoise{}, r, 1.0); });
    CHECK(s.mean == doctest::Approx(mean).epsilon(0.02));
    CHECK(s.var == doctest::Approx(second - mean * mean).epsilon(0.02));
}

TEST_CASE("cauchy modulated increments") {
    const CauchyModulatedNoise m{};
    CHECK(cauchy_modulated_increment(m, 0.0, 1.3, 0.1) == 0.0);
    CHECK(cauchy_modulated_increment(m, std::numbers::pi / 2, 1.0, 0.25) == doctest::Approx(10.0 * 0.5));
    CHECK(code_of([&] { (void)cauchy_modulated_increment(m, 1.0, 1.0, 0.0); }) == ErrorCode::NonpositiveDt);

    // sin(sigma) is bounded, so the increment has finite variance
    // E[100 sin^2(sigma)] dt with sigma standard Cauchy: E cos(2 sigma) = e^{-2}
    RngStream r(3, 3);
    const auto s = sample_stats(400000, [&] { return draw_noise(m, r, 1.0); });
    CHECK(s.var == doctest::Approx(100.0 * 0.5 * (1.0 - std::exp(-2.0))).epsilon(0.02));
}

TEST_CASE("noise validation and names") {
    CHECK(code_of([] { RngStream r(1, 1); (void)draw_noise(GaussianNoise{}, r, -1.0); }) == ErrorCode::NonpositiveDt);
    SwitchingNoise bad{};
    bad.weights = {0.5, 0.5, 0.5};
    CHECK(code_of([&] { validate(bad); }) == ErrorCode::ConfigInvalid);
    SwitchingNoise tri{};
    tri.tri_mode = 10.0;
    CHECK(code_of([&] { validate(tri); }) == ErrorCode::ConfigInvalid);
    CHECK(code_of([] { validate(CauchyModulatedNoise{10.0, 0.0, 0.0}); }) == ErrorCode::ConfigInvalid);
    CHECK(code_of([] { validate(GaussianNoise{0.0, -1.0}); }) == ErrorCode::ConfigInvalid);
    for (const char* n : {"gaussian", "switching", "cauchy_modulated"}) CHECK(noise_name(noise_from_name(n)) == n);
    CHECK(code_of([] { (void)noise_from_name("levy"); }) == ErrorCode::ConfigInvalid);
}

TEST_CASE("brownian bridge") {
    const BetaBridge d{};
    CHECK(bridge_value(d, 0.0, 0.0, 0.7) == d.beta3);
    CHECK(bridge_value(d, 1.0, 0.7, 0.7) == d.beta4);
    // t = T/2: (0.5 beta3 + W + 0.5 (beta4 - W_T))
    CHECK(bridge_value(d, 0.5, 0.3, 0.7) == doctest::Approx(0.5 * 0.5 + 0.3 + 0.5 * (1.0 - 0.7)));
    CHECK(code_of([&] { (void)bridge_value(d, 1.5, 0.0, 0.0); }) == ErrorCode::OutOfHorizon);
    CHECK(code_of([&] { (void)bridge_value(d, -0.1, 0.0, 0.0); }) == ErrorCode::OutOfHorizon);

    // endpoints hold for sampled paths as well
    RngStream r(4, 4);
    const auto path = WienerPath::sample(1.0, 1e-3, r);
    CHECK(path.values().size() == 1001);
    CHECK(bridge_value(d, 0.0, path) == d.beta3);
    CHECK(bridge_value(d, 1.0, path) == d.beta4);
}

TEST_CASE("bridge marginal variance") {
    // Var B_t = t (T - t) / T
    const BetaBridge d{};
    const int n = 20000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        RngStream r(10, static_cast<std::uint64_t>(i));
        const auto path = WienerPath::sample(1.0, 0.01, r);
        const double b = bridge_value(d, 0.3, path);
        s += b;
        s2 += b * b;
    }
    const double m = s / n;
    CHECK(m == doctest::Approx(0.7 * 0.5 + 0.3 * 1.0).epsilon(0.02));
    CHECK(s2 / n - m * m == doctest::Approx(0.3 * 0.7).epsilon(0.05));
}

TEST_CASE("beta process") {
    const BetaBridge d{};
    CHECK(beta_from_integral(d, 0.0) == 1.0);
    CHECK(beta_from_integral(d, 1.0) == doctest::Approx(2.0));
    CHECK(beta_from_integral(d, INFINITY) == 3.0);

    RngStream r(12, 0);
    BetaBridge longer = d;
    longer.horizon = 100.0;
    BetaProcess proc(longer, 1e-3, r);
    double prev = proc.value();
    for (int i = 0; i < 100000; ++i) {
        const double b = proc.step(1e-3);
        CHECK((b >= 1.0 && b <= 3.0));
        CHECK(b >= prev);
        prev = b;
        if (i % 10000 == 0) CHECK(proc.integral() >= 0.0);
    }
    CHECK(code_of([&] { proc.step(1.0); }) == ErrorCode::OutOfHorizon);
    CHECK(code_of([&] { proc.step(0.0); }) == ErrorCode::NonpositiveDt);

    // the left-endpoint rule on a deterministic path: B_0 = beta3, so I after one step is sin^2(0.5) dt
    BetaProcess det(d, WienerPath(0.5, {0.0, 0.0, 0.0}));
    det.step(0.5);
    CHECK(det.integral() == doctest::Approx(std::pow(std::sin(0.5), 2) * 0.5));
}

TEST_CASE("alpha of H") {
    const AlphaOfH d{};
    CHECK(alpha_of_h(d, 1.0) == doctest::Approx(0.75));
    CHECK(alpha_of_h(d, 0.0) == doctest::Approx(0.6));
    CHECK(alpha_of_h(d, -3.0) == doctest::Approx(0.6));
    CHECK(alpha_of_h(d, INFINITY) == 0.9);
    double prev = 0.0;
    for (double h = 0.0; h < 50.0; h += 0.25) {
        const double a = alpha_of_h(d, h);
        CHECK(a >= prev);
        CHECK((a >= 0.6 && a < 0.9));
        prev = a;
    }
}

TEST_CASE("random symbol process") {
    const RandomSymbolProcess p(levy::SymbolSpec::stable(2.0), 1.0);
    const std::vector<double> xi{1.0};
    CHECK(p.eval(2.0, xi) == doctest::Approx(std::sqrt(3.0)));
    CHECK(levy::eval_symbol(p.frozen(2.0), xi).real() == doctest::Approx(std::sqrt(3.0)));
    const RandomSymbolProcess drift(levy::SymbolSpec::poisson(1.0), 1.0);
    CHECK(code_of([&] { (void)drift.eval(1.0, xi); }) == ErrorCode::NotRealValued);
    CHECK(code_of([] { RandomSymbolProcess(levy::SymbolSpec::stable(1.0), 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("q-wiener increments") {
    const Grid g = Grid::plane(2.1, 2.1, 21, 21);
    const QWienerSpec spec{2.1, 2.1, 4};

    std::vector<double> zero(16, 0.0);
    CHECK(qwiener_field_from_coefficients(spec, g, 0.1, zero).max_abs() == 0.0);

    const QWienerSpec one{2.1, 2.1, 1};
    const std::vector<double> z{1.0};
    const auto f = qwiener_field_from_coefficients(one, g, 0.25, z);
    for (int j = 0; j < 21; j += 5)
        for (int k = 0; k < 21; k += 3) {
            const double e1x = std::sqrt(2.0 / 2.1) * std::cos(2.0 * std::numbers::pi * g.x(k) / 2.1);
            const double e1y = std::sqrt(2.0 / 2.1) * std::cos(2.0 * std::numbers::pi * g.y(j) / 2.1);
            CHECK(f.at(k, j) == doctest::Approx(0.5 * 0.25 * e1x * e1y).epsilon(1e-12));
        }

    CHECK(code_of([&] { (void)qwiener_field_from_coefficients(QWienerSpec{2.1, 2.1, 11}, g, 0.1, std::vector<double>(121)); }) ==
          ErrorCode::NyquistViolation);
    CHECK_NOTHROW(check_nyquist(QWienerSpec{2.1, 2.1, 10}, g));
    CHECK(code_of([&] { (void)qwiener_field_from_coefficients(spec, g, 0.1, std::vector<double>(3)); }) ==
          ErrorCode::InvalidArgument);
    CHECK(code_of([&] { (void)qwiener_field_from_coefficients(spec, g, 0.0, zero); }) == ErrorCode::NonpositiveDt);
}

TEST_CASE("q-wiener trace is finite") {
    for (int K : {1, 4, 50, 5000}) {
        const QWienerSpec s{1.0, 1.0, K};
        CHECK(s.truncated_trace() < std::numbers::pi * std::numbers::pi / 6.0 - 1.0);
    }
    CHECK(QWienerSpec{1, 1, 3}.truncated_trace() == doctest::Approx(0.25 + 1.0 / 9 + 1.0 / 16));
}

TEST_CASE("q-wiener basis is discretely orthonormal") {
    const int M = 32;
    const double L = 2.0;
    const double dx = L / M;
    for (int a = 1; a < M / 2; ++a)
        for (int b = 1; b < M / 2; ++b) {
            double s = 0.0;
            for (int k = 0; k < M; ++k) s += qwiener_basis(a, k * dx, L) * qwiener_basis(b, k * dx, L) * dx;
            CHECK(s == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
        }
}

TEST_CASE("q-wiener pointwise variance") {
    // Var dW(x, y) = dt sum_{m,n} lambda_m^2 lambda_n^2 e_n(x)^2 e_m(y)^2
    const Grid g = Grid::plane(2.1, 2.1, 21, 21);
    const QWienerSpec spec{2.1, 2.1, 4};
    const double dt = 0.1;
    const int kx = 3;
    const int jy = 8;
    double expected = 0.0;
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 4; ++n) {
            const double lm = 1.0 / (1.0 + m);
            const double ln = 1.0 / (1.0 + n);
            const double ex = qwiener_basis(n, g.x(kx), 2.1);
            const double ey = qwiener_basis(m, g.y(jy), 2.1);
            expected += dt * lm * lm * ln * ln * ex * ex * ey * ey;
        }
    RngStream r(99, 0);
    const auto s = sample_stats(40000, [&] { return sample_qwiener_increment(spec, g, dt, r).at(kx, jy); });
    CHECK(std::abs(s.mean) < 4.0 * std::sqrt(expected / 40000));
    CHECK(s.var == doctest::Approx(expected).epsilon(0.03));
}
