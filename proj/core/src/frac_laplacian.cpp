#include "levyflow/frac_laplacian.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "levyflow/errors.hpp"

namespace levyflow {

double hurwitz_zeta(double s, double a) {
    require(s > 1.0 && a > 0.0, ErrorCode::InvalidArgument, "Hurwitz zeta needs s > 1 and a > 0");
    // Direct head plus Euler–Maclaurin remainder.
    constexpr int kHead = 16;
    double sum = 0.0;
    for (int q = 0; q < kHead; ++q) sum += std::pow(q + a, -s);
    const double x = kHead + a;
    sum += std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
    // B_{2k} / (2k)!
    static constexpr double kCoeff[] = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0, 1.0 / 47900160.0,
                                        -691.0 / 1307674368000.0};
    double rising = s; // s (s+1) ... (s + 2k - 2)
    double xpow = std::pow(x, -s - 1.0);
    for (int k = 0; k < 6; ++k) {
        sum += kCoeff[k] * rising * xpow;
        rising *= (s + 2 * k + 1) * (s + 2 * k + 2);
        xpow /= x * x;
    }
    return sum;
}

namespace {

std::vector<double> axis_stencil(int M, double delta, double p, double c, const FracLapOptions& opt) {
    std::vector<double> w(static_cast<std::size_t>(M), 0.0);
    if (M == 1) return w;
    const int stride = opt.cutoff_cells;
    const double h = stride * delta;
    const auto slot = [M](long r) { return static_cast<std::size_t>(((r % M) + M) % M); };

    const double singular = c * std::pow(h, 2.0 - p) / ((2.0 - p) * delta * delta);
    w[slot(1)] += singular;
    w[slot(-1)] += singular;

    const double tail = c * std::pow(h, -p);
    if (opt.tail_terms) {
        for (long i = 1; i <= *opt.tail_terms; ++i) {
            const double wi = tail * std::pow(static_cast<double>(i), -1.0 - p);
            w[slot(i * stride)] += wi;
            w[slot(-i * stride)] += wi;
        }
    } else {
        // i and i + P land on the same residue; sum each residue class in closed form.
        const long period = M / std::gcd(M, stride);
        const double scale = std::pow(static_cast<double>(period), -1.0 - p);
        for (long i0 = 1; i0 <= period; ++i0) {
            const long r = i0 * stride;
            if (slot(r) == 0) continue; // f_k - f_k
            const double wi = tail * scale * hurwitz_zeta(1.0 + p, static_cast<double>(i0) / static_cast<double>(period));
            w[slot(r)] += wi;
            w[slot(-r)] += wi;
        }
    }

    double off = 0.0;
    for (std::size_t r = 1; r < w.size(); ++r) off += w[r];
    w[0] = -off;
    return w;
}

} // namespace

FracLapOperator::FracLapOperator(Grid grid, double p, FracLapOptions options)
    : grid_(grid), p_(p), c_(frac_constant(1, p)), options_(options) {
    require(options_.cutoff_cells >= 1, ErrorCode::InvalidArgument, "cutoff must be at least one grid cell");
    require(!options_.tail_terms || *options_.tail_terms >= 0, ErrorCode::InvalidArgument, "tail term count must be nonnegative");
    require(options_.cutoff_cells * grid_.dx() <= 1.0 + 1e-12, ErrorCode::InvalidArgument, "cutoff radius must not exceed 1");
    wx_ = axis_stencil(grid_.Mx(), grid_.dx(), p_, c_, options_);
    if (grid_.dim() == 2) wy_ = axis_stencil(grid_.My(), grid_.dy(), p_, c_, options_);
}

GridField FracLapOperator::apply(const GridField& f) const {
    require(f.grid() == grid_, ErrorCode::GridMismatch, "field grid differs from operator grid");
    const int Mx = grid_.Mx();
    const int My = grid_.My();
    GridField out(grid_);
    const auto in = f.values();
    auto o = out.values();
    for (int j = 0; j < My; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * static_cast<std::size_t>(Mx);
        for (int k = 0; k < Mx; ++k) {
            double acc = 0.0;
            for (int r = 0; r < Mx; ++r) acc += wx_[static_cast<std::size_t>(r)] * in[row + static_cast<std::size_t>((k + r) % Mx)];
            o[row + static_cast<std::size_t>(k)] = acc;
        }
    }
    if (grid_.dim() == 2) {
        for (int j = 0; j < My; ++j)
            for (int k = 0; k < Mx; ++k) {
                double acc = 0.0;
                for (int r = 0; r < My; ++r) acc += wy_[static_cast<std::size_t>(r)] * f.at(k, (j + r) % My);
                out.at(k, j) += acc;
            }
    }
    return out;
}

Eigen::SparseMatrix<double, Eigen::RowMajor> FracLapOperator::assemble() const {
    const int Mx = grid_.Mx();
    const int My = grid_.My();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(grid_.size() * static_cast<std::size_t>(Mx + (grid_.dim() == 2 ? My : 0)));
    for (int j = 0; j < My; ++j)
        for (int k = 0; k < Mx; ++k) {
            const auto row = static_cast<int>(grid_.index(k, j));
            for (int r = 0; r < Mx; ++r)
                if (wx_[static_cast<std::size_t>(r)] != 0.0)
                    triplets.emplace_back(row, static_cast<int>(grid_.index(k + r, j)), wx_[static_cast<std::size_t>(r)]);
            if (grid_.dim() == 2)
                for (int r = 0; r < My; ++r)
                    if (wy_[static_cast<std::size_t>(r)] != 0.0)
                        triplets.emplace_back(row, static_cast<int>(grid_.index(k, j + r)), wy_[static_cast<std::size_t>(r)]);
        }
    const auto n = static_cast<Eigen::Index>(grid_.size());
    Eigen::SparseMatrix<double, Eigen::RowMajor> A(n, n);
    A.setFromTriplets(triplets.begin(), triplets.end());
    return A;
}

double FracLapOperator::symbol(int kx, int ky) const {
    const auto axis = [](const std::vector<double>& w, int k) {
        const auto M = static_cast<double>(w.size());
        double acc = 0.0;
        for (std::size_t r = 0; r < w.size(); ++r) acc += w[r] * std::cos(2.0 * std::numbers::pi * k * static_cast<double>(r) / M);
        return acc;
    };
    double v = axis(wx_, kx);
    if (grid_.dim() == 2) v += axis(wy_, ky);
    return v;
}

GridField apply_frac_laplacian(const FracLapOperator& op, const GridField& f) { return op.apply(f); }

GridField apply_standard_laplacian(const GridField& f) {
    const Grid& g = f.grid();
    GridField out(g);
    const double ix2 = 1.0 / (g.dx() * g.dx());
    const double iy2 = 1.0 / (g.dy() * g.dy());
    for (int j = 0; j < g.My(); ++j)
        for (int k = 0; k < g.Mx(); ++k) {
            double v = (f.at(k + 1, j) - 2.0 * f.at(k, j) + f.at(k - 1, j)) * ix2;
            if (g.dim() == 2) v += (f.at(k, j + 1) - 2.0 * f.at(k, j) + f.at(k, j - 1)) * iy2;
            out.at(k, j) = v;
        }
    return out;
}

} // namespace levyflow
