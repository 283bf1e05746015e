#pragma once

#include <span>
#include <vector>

#include "levyflow/levy_symbol.hpp"

namespace levyflow {

/// Two observations (beta_{t1}, beta_{t2}) of a bounded driver taken at times t1, t2.
struct BetaPair {
    double beta_t1;
    double beta_t2;
    double t1;
    double t2;
};

struct PairSup {
    double sup = 0.0;       ///< sup over the probe grid of the multiplier
    double ratio = 0.0;     ///< sup / |parameter gap|, 0 when the gap is 0
    double argmax = 0.0;    ///< |xi| where the sup is attained
};

struct LipschitzReport {
    std::vector<PairSup> pairs;
    double max_ratio = 0.0;
    /// C (beta_hi / beta_lo)^{r/2} / beta_lo with C = s/2.
    double bound = 0.0;
};

/// Evaluates m(xi) = (1 + b1 psi)^{r/2} |(1 + b1 psi)^{-s/2} - (1 + b2 psi)^{-s/2}|
/// for each pair and compares sup m / |b1 - b2| with the uniform bound.
///
/// The mean value theorem gives m <= |b1 - b2| (s/2) (beta_hi/beta_lo)^{r/2} / beta_lo
/// whenever r <= s, so C = s/2 is fixed once and for all.
///
/// Throws BetaOutOfRange, InvalidArgument (r outside (1, s]), EmptyGrid,
/// NotRealValued, and InvariantViolation if a pair breaks the bound.
[[nodiscard]] LipschitzReport multiplier_lipschitz_check(const levy::SymbolSpec& base, double s, double r,
                                                         std::span<const BetaPair> pairs,
                                                         std::span<const levy::Point> probe_grid, double beta_lo,
                                                         double beta_hi);

struct AlphaPair {
    double alpha_t1;
    double alpha_t2;
};

struct HolderReport {
    std::vector<PairSup> pairs;
    double max_ratio = 0.0;
};

/// Evaluates ||xi|^{-2 a1} - |xi|^{-2 a2}| (1 + |xi|^2)^{eta/2} on the probe grid
/// (points at the origin are skipped) and reports sup / |a1 - a2|.
/// The ratio blows up as the grid approaches xi = 0; keep |xi| bounded away from it.
///
/// Throws ExponentOutOfRange unless every alpha lies in [a_lo, a_hi] within (1/2, 1); EmptyGrid.
[[nodiscard]] HolderReport alpha_resolvent_holder_check(std::span<const AlphaPair> pairs,
                                                        std::span<const levy::Point> probe_grid, double a_lo = 0.6,
                                                        double a_hi = 0.9, double eta = 0.5);

} // namespace levyflow
