#pragma once

#include <optional>
#include <vector>

#include <Eigen/Sparse>

#include "levyflow/frac_constant.hpp"
#include "levyflow/grid.hpp"

namespace levyflow {

/// Hurwitz zeta sum_{q>=0} (q + a)^{-s} for s > 1, a > 0.
[[nodiscard]] double hurwitz_zeta(double s, double a);

struct FracLapOptions {
    /// Singular/tail split radius in grid cells (h = cutoff_cells * delta).
    int cutoff_cells = 1;
    /// Number of tail quadrature terms per side. Unset means the full
    /// periodic tail, folded onto the torus in closed form.
    std::optional<long> tail_terms;
};

/// Discrete -(-Delta)^{p/2} on a periodic grid.
///
/// Per axis the operator is the three-point singular part
///   c_{1,p} h^{2-p} / ((2-p) delta^2) * (f_{k+1} - 2 f_k + f_{k-1})
/// plus the tail quadrature
///   c_{1,p} h^{-p} sum_{i>=1} i^{-1-p} (f_{k+i s} + f_{k-i s} - 2 f_k),  s = cutoff_cells,
/// with tail nodes wrapped periodically. In 2D the operator is the sum of the
/// per-axis operators.
class FracLapOperator {
public:
    FracLapOperator(Grid grid, double p, FracLapOptions options = {});

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] double exponent() const noexcept { return p_; }
    [[nodiscard]] double constant() const noexcept { return c_; }
    [[nodiscard]] const FracLapOptions& options() const noexcept { return options_; }

    /// Circulant row of the x (or y) axis operator: weight of f_{k+r} in out_k, r = 0..M-1.
    [[nodiscard]] const std::vector<double>& stencil_x() const noexcept { return wx_; }
    [[nodiscard]] const std::vector<double>& stencil_y() const noexcept { return wy_; }

    /// Throws GridMismatch.
    [[nodiscard]] GridField apply(const GridField& f) const;

    /// The same operator as a sparse matrix on the node ordering of Grid.
    [[nodiscard]] Eigen::SparseMatrix<double, Eigen::RowMajor> assemble() const;

    /// Eigenvalue of the discrete operator on the Fourier mode (kx, ky).
    [[nodiscard]] double symbol(int kx, int ky = 0) const;

private:
    Grid grid_;
    double p_;
    double c_;
    FracLapOptions options_;
    std::vector<double> wx_;
    std::vector<double> wy_;
};

[[nodiscard]] GridField apply_frac_laplacian(const FracLapOperator& op, const GridField& f);

/// Standard 3-point (5-point in 2D) periodic Laplacian.
[[nodiscard]] GridField apply_standard_laplacian(const GridField& f);

} // namespace levyflow
