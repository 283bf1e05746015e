#include "levyflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "levyflow/errors.hpp"

namespace levyflow {

Grid::Grid(int dim, double Lx, double Ly, int Mx, int My) : dim_(dim), Lx_(Lx), Ly_(Ly), Mx_(Mx), My_(My) {
    require(Lx_ > 0.0 && Ly_ > 0.0, ErrorCode::InvalidArgument, "grid lengths must be positive");
    require(Mx_ >= 1 && My_ >= 1, ErrorCode::InvalidArgument, "grid resolutions must be positive");
}

Grid Grid::line(double Lx, int Mx) { return Grid(1, Lx, 1.0, Mx, 1); }

Grid Grid::plane(double Lx, double Ly, int Mx, int My) { return Grid(2, Lx, Ly, Mx, My); }

GridField::GridField(Grid grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

GridField::GridField(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    require(values_.size() == grid_.size(), ErrorCode::GridMismatch,
            "field has " + std::to_string(values_.size()) + " values for " + std::to_string(grid_.size()) + " nodes");
}

double GridField::sum() const noexcept { return std::accumulate(values_.begin(), values_.end(), 0.0); }

double GridField::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double GridField::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }

double GridField::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

bool GridField::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

std::size_t GridField::clamp_nonnegative() noexcept {
    std::size_t n = 0;
    for (double& v : values_) {
        if (v < 0.0) {
            v = 0.0;
            ++n;
        }
    }
    return n;
}

GridField& GridField::operator+=(const GridField& other) {
    require(grid_ == other.grid_, ErrorCode::GridMismatch, "fields live on different grids");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

GridField& GridField::operator-=(const GridField& other) {
    require(grid_ == other.grid_, ErrorCode::GridMismatch, "fields live on different grids");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

GridField& GridField::operator*=(double s) noexcept {
    for (double& v : values_) v *= s;
    return *this;
}

GridField operator+(GridField a, const GridField& b) { return a += b; }
GridField operator-(GridField a, const GridField& b) { return a -= b; }
GridField operator*(double s, GridField a) { return a *= s; }

double dot(const GridField& a, const GridField& b) {
    require(a.grid() == b.grid(), ErrorCode::GridMismatch, "fields live on different grids");
    const auto va = a.values();
    const auto vb = b.values();
    return std::inner_product(va.begin(), va.end(), vb.begin(), 0.0);
}

GridField shifted(const GridField& f, int sx, int sy) {
    const Grid& g = f.grid();
    GridField out(g);
    for (int j = 0; j < g.My(); ++j)
        for (int k = 0; k < g.Mx(); ++k) out.at(k + sx, j + sy) = f.at(k, j);
    return out;
}

namespace {

std::vector<double> gaussian_kernel(int M, double delta, double sigma) {
    std::vector<double> w(static_cast<std::size_t>(M), 0.0);
    double total = 0.0;
    for (int r = 0; r < M; ++r) {
        const double d = std::min(r, M - r) * delta;
        w[static_cast<std::size_t>(r)] = std::exp(-0.5 * d * d / (sigma * sigma));
        total += w[static_cast<std::size_t>(r)];
    }
    for (double& v : w) v /= total;
    return w;
}

} // namespace

GridField gaussian_smooth(const GridField& f, double sigma) {
    require(sigma > 0.0, ErrorCode::InvalidArgument, "smoothing width must be positive");
    const Grid& g = f.grid();
    const int Mx = g.Mx();
    const int My = g.My();
    const auto wx = gaussian_kernel(Mx, g.dx(), sigma);
    GridField tmp(g);
    for (int j = 0; j < My; ++j)
        for (int k = 0; k < Mx; ++k) {
            double acc = 0.0;
            for (int r = 0; r < Mx; ++r) acc += wx[static_cast<std::size_t>(r)] * f.at(k - r, j);
            tmp.at(k, j) = acc;
        }
    if (g.dim() == 1) return tmp;
    const auto wy = gaussian_kernel(My, g.dy(), sigma);
    GridField out(g);
    for (int j = 0; j < My; ++j)
        for (int k = 0; k < Mx; ++k) {
            double acc = 0.0;
            for (int r = 0; r < My; ++r) acc += wy[static_cast<std::size_t>(r)] * tmp.at(k, j - r);
            out.at(k, j) = acc;
        }
    return out;
}

} // namespace levyflow
