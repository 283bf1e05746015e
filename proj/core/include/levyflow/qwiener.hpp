#pragma once

#include <span>
#include <vector>

#include "levyflow/grid.hpp"
#include "levyflow/rng.hpp"

namespace levyflow {

/// Truncated Q-Wiener field on a periodic box. Eigenpairs per axis are
/// lambda_k = 1 / (1 + k) and e_k(x) = sqrt(2/L) cos(2 pi k x / L), k = 1..K;
/// the 2D eigenvalues factor as lambda_{m,n} = lambda_m * lambda_n.
struct QWienerSpec {
    double Lx = 1.0;
    double Ly = 1.0;
    int modes = 4;

    [[nodiscard]] static double eigenvalue(int k) noexcept { return 1.0 / (1.0 + k); }
    /// sum_{k=1..K} lambda_k^2
    [[nodiscard]] double truncated_trace() const noexcept;
};

[[nodiscard]] double qwiener_basis(int k, double x, double L) noexcept;

/// Throws NyquistViolation unless 2 pi K / L < pi / delta on every active axis.
void check_nyquist(const QWienerSpec& spec, const Grid& grid);

/// dW(x_k, y_j) = sum_{m,n=1..K} sqrt(dt) z_{m,n} lambda_m lambda_n e_n(x_k) e_m(y_j).
/// z is indexed z[(m-1) * K + (n-1)] (K entries on a 1D grid).
[[nodiscard]] GridField qwiener_field_from_coefficients(const QWienerSpec& spec, const Grid& grid, double dt,
                                                       std::span<const double> z);

/// Draws z ~ N(0,1) i.i.d. from the stream (m outer, n inner) and builds the increment.
[[nodiscard]] GridField sample_qwiener_increment(const QWienerSpec& spec, const Grid& grid, double dt, RngStream& rng);

} // namespace levyflow
