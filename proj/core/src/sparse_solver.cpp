#include "levyflow/sparse_solver.hpp"

#include <string>
#include <vector>

#include <Eigen/IterativeLinearSolvers>

#include "levyflow/errors.hpp"

namespace levyflow {

SparseMatrix identity_matrix(const Grid& grid) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    SparseMatrix I(n, n);
    I.setIdentity();
    return I;
}

SparseMatrix laplacian_matrix(const Grid& grid) {
    std::vector<Eigen::Triplet<double>> t;
    const double ix2 = 1.0 / (grid.dx() * grid.dx());
    const double iy2 = 1.0 / (grid.dy() * grid.dy());
    for (int j = 0; j < grid.My(); ++j)
        for (int k = 0; k < grid.Mx(); ++k) {
            const auto row = static_cast<int>(grid.index(k, j));
            t.emplace_back(row, static_cast<int>(grid.index(k - 1, j)), ix2);
            t.emplace_back(row, static_cast<int>(grid.index(k + 1, j)), ix2);
            t.emplace_back(row, row, -2.0 * ix2);
            if (grid.dim() == 2) {
                t.emplace_back(row, static_cast<int>(grid.index(k, j - 1)), iy2);
                t.emplace_back(row, static_cast<int>(grid.index(k, j + 1)), iy2);
                t.emplace_back(row, row, -2.0 * iy2);
            }
        }
    const auto n = static_cast<Eigen::Index>(grid.size());
    SparseMatrix L(n, n);
    L.setFromTriplets(t.begin(), t.end()); // duplicates are summed
    return L;
}

SolveResult solve(const LinearSystem& system, const GridField& guess, const SolverSettings& settings) {
    const Grid& grid = system.rhs.grid();
    require(guess.grid() == grid, ErrorCode::GridMismatch, "initial guess lives on another grid");
    const auto n = static_cast<Eigen::Index>(grid.size());
    require(system.A.rows() == n && system.A.cols() == n, ErrorCode::DimensionMismatch, "matrix size differs from grid");

    const Eigen::Map<const Eigen::VectorXd> b(system.rhs.values().data(), n);
    const double bnorm = b.norm();
    if (bnorm == 0.0) return {GridField(grid), 0.0, 0};

    Eigen::BiCGSTAB<SparseMatrix, Eigen::DiagonalPreconditioner<double>> solver;
    solver.setTolerance(settings.tolerance);
    solver.setMaxIterations(settings.max_iterations > 0 ? settings.max_iterations : static_cast<int>(10 * n));
    solver.compute(system.A);
    require(solver.info() == Eigen::Success, ErrorCode::SolverDiverged, "preconditioner setup failed");

    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(guess.values().data(), n);
    int iterations = 0;
    double residual = 0.0;
    // BiCGSTAB's internal residual drifts from the true one; restart once from the iterate if needed.
    for (int attempt = 0; attempt < 2; ++attempt) {
        x = solver.solveWithGuess(b, x);
        iterations += static_cast<int>(solver.iterations());
        residual = (system.A * x - b).norm() / bnorm;
        if (residual <= settings.tolerance) break;
    }
    require(residual <= settings.tolerance, ErrorCode::SolverDiverged,
            "relative residual " + std::to_string(residual) + " above tolerance after " + std::to_string(iterations) +
                " iterations");
    return {GridField(grid, std::vector<double>(x.data(), x.data() + n)), residual, iterations};
}

} // namespace levyflow
