#include "levyflow/multiplier_checks.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "levyflow/errors.hpp"

namespace levyflow {

namespace {

double norm(const levy::Point& xi) {
    double s = 0.0;
    for (double v : xi) s += v * v;
    return std::sqrt(s);
}

} // namespace

LipschitzReport multiplier_lipschitz_check(const levy::SymbolSpec& base, double s, double r,
                                           std::span<const BetaPair> pairs, std::span<const levy::Point> probe_grid,
                                           double beta_lo, double beta_hi) {
    require(s > 0.0, ErrorCode::InvalidArgument, "exponent s must be positive");
    require(r > 1.0 && r <= s, ErrorCode::InvalidArgument, "exponent r must lie in (1, s]");
    require(beta_lo > 0.0 && beta_lo <= beta_hi, ErrorCode::BetaOutOfRange, "need 0 < beta_lo <= beta_hi");
    require(!probe_grid.empty(), ErrorCode::EmptyGrid, "probe grid is empty");

    std::vector<double> psi(probe_grid.size());
    for (std::size_t i = 0; i < probe_grid.size(); ++i) {
        const levy::Complex v = levy::eval_symbol(base, probe_grid[i]);
        require(std::abs(v.imag()) <= 1e-12 * std::max(1.0, std::abs(v.real())), ErrorCode::NotRealValued,
                "multiplier checks need a real base symbol");
        psi[i] = v.real();
    }

    LipschitzReport report;
    report.bound = 0.5 * s * std::pow(beta_hi / beta_lo, 0.5 * r) / beta_lo;
    for (const BetaPair& pair : pairs) {
        for (double b : {pair.beta_t1, pair.beta_t2})
            require(b >= beta_lo && b <= beta_hi, ErrorCode::BetaOutOfRange,
                    "beta value " + std::to_string(b) + " outside [beta_lo, beta_hi]");
        PairSup out;
        for (std::size_t i = 0; i < psi.size(); ++i) {
            const double u1 = 1.0 + pair.beta_t1 * psi[i];
            const double u2 = 1.0 + pair.beta_t2 * psi[i];
            const double m = std::pow(u1, 0.5 * r) * std::abs(std::pow(u1, -0.5 * s) - std::pow(u2, -0.5 * s));
            if (m > out.sup) {
                out.sup = m;
                out.argmax = norm(probe_grid[i]);
            }
        }
        const double gap = std::abs(pair.beta_t1 - pair.beta_t2);
        out.ratio = gap > 0.0 ? out.sup / gap : 0.0;
        require(out.ratio <= report.bound * (1.0 + 1e-12), ErrorCode::InvariantViolation,
                "multiplier ratio " + std::to_string(out.ratio) + " exceeds bound " + std::to_string(report.bound));
        report.max_ratio = std::max(report.max_ratio, out.ratio);
        report.pairs.push_back(out);
    }
    return report;
}

HolderReport alpha_resolvent_holder_check(std::span<const AlphaPair> pairs, std::span<const levy::Point> probe_grid,
                                          double a_lo, double a_hi, double eta) {
    require(a_lo > 0.5 && a_lo <= a_hi && a_hi < 1.0, ErrorCode::ExponentOutOfRange,
            "alpha window must satisfy 1/2 < a_lo <= a_hi < 1");
    require(!probe_grid.empty(), ErrorCode::EmptyGrid, "probe grid is empty");

    HolderReport report;
    for (const AlphaPair& pair : pairs) {
        for (double a : {pair.alpha_t1, pair.alpha_t2})
            require(a >= a_lo && a <= a_hi, ErrorCode::ExponentOutOfRange,
                    "alpha value " + std::to_string(a) + " outside [a_lo, a_hi]");
        PairSup out;
        for (const levy::Point& xi : probe_grid) {
            const double rad = norm(xi);
            if (rad == 0.0) continue;
            const double m = std::abs(std::pow(rad, -2.0 * pair.alpha_t1) - std::pow(rad, -2.0 * pair.alpha_t2)) *
                             std::pow(1.0 + rad * rad, 0.5 * eta);
            if (m > out.sup) {
                out.sup = m;
                out.argmax = rad;
            }
        }
        const double gap = std::abs(pair.alpha_t1 - pair.alpha_t2);
        out.ratio = gap > 0.0 ? out.sup / gap : 0.0;
        report.max_ratio = std::max(report.max_ratio, out.ratio);
        report.pairs.push_back(out);
    }
    return report;
}

} // namespace levyflow
