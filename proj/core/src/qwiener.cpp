#include "levyflow/qwiener.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "levyflow/errors.hpp"

namespace levyflow {

double QWienerSpec::truncated_trace() const noexcept {
    double s = 0.0;
    for (int k = 1; k <= modes; ++k) s += eigenvalue(k) * eigenvalue(k);
    return s;
}

double qwiener_basis(int k, double x, double L) noexcept {
    return std::sqrt(2.0 / L) * std::cos(2.0 * std::numbers::pi * k * x / L);
}

void check_nyquist(const QWienerSpec& spec, const Grid& grid) {
    require(spec.modes >= 1, ErrorCode::InvalidArgument, "Q-Wiener truncation must be positive");
    // 2 pi K / L < pi / delta  <=>  2 K < M
    require(2 * spec.modes < grid.Mx(), ErrorCode::NyquistViolation,
            std::to_string(spec.modes) + " modes exceed the x Nyquist limit of " + std::to_string(grid.Mx()) + " nodes");
    if (grid.dim() == 2)
        require(2 * spec.modes < grid.My(), ErrorCode::NyquistViolation,
                std::to_string(spec.modes) + " modes exceed the y Nyquist limit of " + std::to_string(grid.My()) + " nodes");
}

namespace {

std::vector<double> basis_table(int K, int M, double delta, double L) {
    std::vector<double> table(static_cast<std::size_t>(K * M));
    for (int n = 1; n <= K; ++n)
        for (int k = 0; k < M; ++k)
            table[static_cast<std::size_t>((n - 1) * M + k)] = QWienerSpec::eigenvalue(n) * qwiener_basis(n, k * delta, L);
    return table;
}

} // namespace

GridField qwiener_field_from_coefficients(const QWienerSpec& spec, const Grid& grid, double dt, std::span<const double> z) {
    require(dt > 0.0, ErrorCode::NonpositiveDt, "dt must be positive");
    check_nyquist(spec, grid);
    const int K = spec.modes;
    const bool planar = grid.dim() == 2;
    const std::size_t expected = planar ? static_cast<std::size_t>(K * K) : static_cast<std::size_t>(K);
    require(z.size() == expected, ErrorCode::InvalidArgument, "wrong number of Q-Wiener coefficients");

    const double sq = std::sqrt(dt);
    const int Mx = grid.Mx();
    const int My = grid.My();
    const auto ex = basis_table(K, Mx, grid.dx(), spec.Lx);
    GridField out(grid);

    if (!planar) {
        for (int k = 0; k < Mx; ++k) {
            double acc = 0.0;
            for (int n = 1; n <= K; ++n) acc += z[static_cast<std::size_t>(n - 1)] * ex[static_cast<std::size_t>((n - 1) * Mx + k)];
            out.at(k) = sq * acc;
        }
        return out;
    }

    const auto ey = basis_table(K, My, grid.dy(), spec.Ly);
    // Contract over n first: a_m(x_k) = sum_n z_{m,n} lambda_n e_n(x_k).
    std::vector<double> partial(static_cast<std::size_t>(K * Mx), 0.0);
    for (int m = 1; m <= K; ++m)
        for (int k = 0; k < Mx; ++k) {
            double acc = 0.0;
            for (int n = 1; n <= K; ++n)
                acc += z[static_cast<std::size_t>((m - 1) * K + (n - 1))] * ex[static_cast<std::size_t>((n - 1) * Mx + k)];
            partial[static_cast<std::size_t>((m - 1) * Mx + k)] = acc;
        }
    for (int j = 0; j < My; ++j)
        for (int k = 0; k < Mx; ++k) {
            double acc = 0.0;
            for (int m = 1; m <= K; ++m)
                acc += ey[static_cast<std::size_t>((m - 1) * My + j)] * partial[static_cast<std::size_t>((m - 1) * Mx + k)];
            out.at(k, j) = sq * acc;
        }
    return out;
}

GridField sample_qwiener_increment(const QWienerSpec& spec, const Grid& grid, double dt, RngStream& rng) {
    require(dt > 0.0, ErrorCode::NonpositiveDt, "dt must be positive");
    check_nyquist(spec, grid);
    const std::size_t count = grid.dim() == 2 ? static_cast<std::size_t>(spec.modes * spec.modes)
                                              : static_cast<std::size_t>(spec.modes);
    std::vector<double> z(count);
    for (double& v : z) v = rng.normal();
    return qwiener_field_from_coefficients(spec, grid, dt, z);
}

} // namespace levyflow
