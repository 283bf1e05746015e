#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace levyflow {

/// Uniform periodic grid on [0, Lx) (x [0, Ly) in 2D). Nodes sit at x_k = k * dx.
/// Storage order is row-major with x fastest: index = j * Mx + k.
class Grid {
public:
    static Grid line(double Lx, int Mx);
    static Grid plane(double Lx, double Ly, int Mx, int My);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] double Lx() const noexcept { return Lx_; }
    [[nodiscard]] double Ly() const noexcept { return Ly_; }
    [[nodiscard]] int Mx() const noexcept { return Mx_; }
    [[nodiscard]] int My() const noexcept { return My_; }
    [[nodiscard]] double dx() const noexcept { return Lx_ / Mx_; }
    [[nodiscard]] double dy() const noexcept { return Ly_ / My_; }
    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(Mx_) * static_cast<std::size_t>(My_); }

    [[nodiscard]] static int wrap(int k, int M) noexcept { return ((k % M) + M) % M; }
    [[nodiscard]] std::size_t index(int k, int j) const noexcept {
        return static_cast<std::size_t>(wrap(j, My_)) * static_cast<std::size_t>(Mx_) + static_cast<std::size_t>(wrap(k, Mx_));
    }
    [[nodiscard]] double x(int k) const noexcept { return k * dx(); }
    [[nodiscard]] double y(int j) const noexcept { return j * dy(); }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    Grid(int dim, double Lx, double Ly, int Mx, int My);

    int dim_;
    double Lx_;
    double Ly_;
    int Mx_;
    int My_;
};

/// Scalar field on a Grid.
class GridField {
public:
    explicit GridField(Grid grid, double fill = 0.0);
    GridField(Grid grid, std::vector<double> values);

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<double> values() noexcept { return values_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

    double& operator[](std::size_t i) noexcept { return values_[i]; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double& at(int k, int j = 0) noexcept { return values_[grid_.index(k, j)]; }
    [[nodiscard]] double at(int k, int j = 0) const noexcept { return values_[grid_.index(k, j)]; }

    [[nodiscard]] double sum() const noexcept;
    [[nodiscard]] double mean() const noexcept { return sum() / static_cast<double>(values_.size()); }
    [[nodiscard]] double max_abs() const noexcept;
    [[nodiscard]] double min() const noexcept;
    [[nodiscard]] double max() const noexcept;
    [[nodiscard]] bool all_finite() const noexcept;

    /// Clamps entries below zero to zero; returns how many were clamped.
    std::size_t clamp_nonnegative() noexcept;

    GridField& operator+=(const GridField& other);
    GridField& operator-=(const GridField& other);
    GridField& operator*=(double s) noexcept;

    friend bool operator==(const GridField&, const GridField&) = default;

private:
    Grid grid_;
    std::vector<double> values_;
};

[[nodiscard]] GridField operator+(GridField a, const GridField& b);
[[nodiscard]] GridField operator-(GridField a, const GridField& b);
[[nodiscard]] GridField operator*(double s, GridField a);

/// Euclidean inner product of the node values (no cell-volume weight).
[[nodiscard]] double dot(const GridField& a, const GridField& b);

/// Same field shifted by (sx, sy) cells: out(k + sx, j + sy) = in(k, j).
[[nodiscard]] GridField shifted(const GridField& f, int sx, int sy = 0);

/// Periodic convolution with a separable Gaussian of standard deviation sigma
/// (physical units). The discrete kernel is normalized to sum to one, so the
/// total mass is preserved; sigma far below the spacing returns the input.
[[nodiscard]] GridField gaussian_smooth(const GridField& f, double sigma);

} // namespace levyflow
