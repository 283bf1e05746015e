#pragma once

#include "levyflow/grid.hpp"

namespace levyflow {

/// How the 2D multiplier combines the two wavenumbers.
enum class SpectralMultiplier {
    Isotropic, ///< -|xi|^p, the true fractional Laplacian
    AxisSplit, ///< -(|xi_x|^p + |xi_y|^p), the per-axis splitting the finite-difference operator uses
};

/// Applies the Fourier multiplier -|2 pi k / L|^p (0 at k = 0) through a
/// discrete Fourier transform. Ground truth for the finite-difference operator.
/// Throws GridMismatch, ExponentOutOfRange (p must lie in (0, 2]).
[[nodiscard]] GridField spectral_oracle(const Grid& grid, double p, const GridField& f,
                                        SpectralMultiplier mode = SpectralMultiplier::Isotropic);

} // namespace levyflow
