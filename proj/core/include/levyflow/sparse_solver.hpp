#pragma once

#include <Eigen/Sparse>

#include "levyflow/grid.hpp"

namespace levyflow {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct SolverSettings {
    double tolerance = 1e-10;
    /// 0 means 10 * (number of unknowns).
    int max_iterations = 0;
};

struct LinearSystem {
    SparseMatrix A;
    GridField rhs;
};

struct SolveResult {
    GridField x;
    /// ||A x - b||_2 / ||b||_2, recomputed after the iteration (0 when b = 0).
    double residual = 0.0;
    int iterations = 0;
};

/// Identity matrix on the grid's node ordering.
[[nodiscard]] SparseMatrix identity_matrix(const Grid& grid);

/// Periodic 3-point (5-point in 2D) Laplacian as a sparse matrix.
[[nodiscard]] SparseMatrix laplacian_matrix(const Grid& grid);

/// Stabilized bi-conjugate gradients with a Jacobi preconditioner, started from `guess`.
/// Throws SolverDiverged if the recomputed relative residual exceeds the tolerance.
[[nodiscard]] SolveResult solve(const LinearSystem& system, const GridField& guess, const SolverSettings& settings);

} // namespace levyflow
