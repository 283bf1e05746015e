#include "levyflow/spectral.hpp"

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <vector>

#include <fftw3.h>

#include "levyflow/errors.hpp"

namespace levyflow {

namespace {

// The FFTW planner is not reentrant; execution on a private plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

double wavenumber(int k, int M, double L) {
    const int signed_k = k <= M / 2 ? k : k - M;
    return 2.0 * std::numbers::pi * signed_k / L;
}

} // namespace

GridField spectral_oracle(const Grid& grid, double p, const GridField& f, SpectralMultiplier mode) {
    require(f.grid() == grid, ErrorCode::GridMismatch, "field grid differs from oracle grid");
    require(p > 0.0 && p <= 2.0, ErrorCode::ExponentOutOfRange, "spectral exponent must lie in (0, 2]");

    const int Mx = grid.Mx();
    const int My = grid.My();
    const int half = Mx / 2 + 1;
    std::vector<double> real(f.values().begin(), f.values().end());
    std::vector<std::complex<double>> spec(static_cast<std::size_t>(My) * static_cast<std::size_t>(half));
    auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());

    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
    {
        std::lock_guard lock(planner_mutex());
        if (grid.dim() == 1) {
            fwd = fftw_plan_dft_r2c_1d(Mx, real.data(), cplx, FFTW_ESTIMATE);
            inv = fftw_plan_dft_c2r_1d(Mx, cplx, real.data(), FFTW_ESTIMATE);
        } else {
            // Row-major with x fastest: FFTW sees an (My, Mx) array.
            fwd = fftw_plan_dft_r2c_2d(My, Mx, real.data(), cplx, FFTW_ESTIMATE);
            inv = fftw_plan_dft_c2r_2d(My, Mx, cplx, real.data(), FFTW_ESTIMATE);
        }
    }
    // ESTIMATE plans do not touch the arrays, so the input is still intact.
    fftw_execute(fwd);

    const double norm = 1.0 / static_cast<double>(grid.size());
    for (int j = 0; j < My; ++j) {
        const double ky = grid.dim() == 2 ? wavenumber(j, My, grid.Ly()) : 0.0;
        for (int k = 0; k < half; ++k) {
            const double kx = wavenumber(k, Mx, grid.Lx());
            double m = 0.0;
            if (mode == SpectralMultiplier::Isotropic)
                m = std::pow(kx * kx + ky * ky, 0.5 * p);
            else
                m = std::pow(std::abs(kx), p) + std::pow(std::abs(ky), p);
            spec[static_cast<std::size_t>(j) * static_cast<std::size_t>(half) + static_cast<std::size_t>(k)] *= -m * norm;
        }
    }

    fftw_execute(inv);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(inv);
    }
    return GridField(grid, std::move(real));
}

} // namespace levyflow
