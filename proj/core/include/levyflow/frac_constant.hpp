#pragma once

namespace levyflow {

/// |c_{d,p}| = 2^p Gamma((d+p)/2) / (pi^{d/2} |Gamma(-p/2)|), the normalization of
/// the hypersingular integral form of (-Delta)^{p/2} in R^d.
///
/// Requires d in {1, 2} and p in (0, 2); throws ExponentOutOfRange otherwise.
[[nodiscard]] double frac_constant(int d, double p);

} // namespace levyflow
