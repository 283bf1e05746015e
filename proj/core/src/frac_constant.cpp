#include "levyflow/frac_constant.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "levyflow/errors.hpp"

namespace levyflow {

double frac_constant(int d, double p) {
    require(d == 1 || d == 2, ErrorCode::ExponentOutOfRange, "dimension must be 1 or 2, got " + std::to_string(d));
    require(p > 0.0 && p < 2.0, ErrorCode::ExponentOutOfRange, "spectral exponent must lie in (0,2), got " + std::to_string(p));
    // |Gamma(-p/2)| = Gamma(1 - p/2) / (p/2) avoids the pole bookkeeping of tgamma at negative arguments.
    const double abs_gamma_neg = std::tgamma(1.0 - 0.5 * p) / (0.5 * p);
    return std::pow(2.0, p) * std::tgamma(0.5 * (d + p)) / (std::pow(std::numbers::pi, 0.5 * d) * abs_gamma_neg);
}

} // namespace levyflow
