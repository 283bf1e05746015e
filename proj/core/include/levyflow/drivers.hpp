#pragma once

#include <span>
#include <vector>

#include "levyflow/levy_symbol.hpp"
#include "levyflow/rng.hpp"

namespace levyflow {

/// Parameters of beta_t = beta1 + beta2 * I_t / (1 + I_t), where
/// I_t = int_0^t sin^2(B_s) ds and B is the Brownian bridge from beta3 (t=0) to beta4 (t=T).
struct BetaBridge {
    double beta1 = 1.0;
    double beta2 = 2.0;
    double beta3 = 0.5;
    double beta4 = 1.0;
    double horizon = 1.0;
};

/// Standard Wiener path sampled on a uniform grid t_n = n * dt, W_0 = 0.
class WienerPath {
public:
    WienerPath(double dt, std::vector<double> values);
    static WienerPath sample(double horizon, double dt, RngStream& rng);

    [[nodiscard]] double dt() const noexcept { return dt_; }
    [[nodiscard]] double horizon() const noexcept { return dt_ * static_cast<double>(values_.size() - 1); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    /// Linear interpolation between grid times.
    [[nodiscard]] double at(double t) const;
    [[nodiscard]] double terminal() const noexcept { return values_.back(); }

private:
    double dt_;
    std::vector<double> values_;
};

/// B_t = ((T - t) beta3 + T W_t + t (beta4 - W_T)) / T. Throws OutOfHorizon.
[[nodiscard]] double bridge_value(const BetaBridge& driver, double t, double w_t, double w_T);
[[nodiscard]] double bridge_value(const BetaBridge& driver, double t, const WienerPath& path);

/// beta1 + beta2 * I / (1 + I); saturates to beta1 + beta2 as I -> inf.
[[nodiscard]] double beta_from_integral(const BetaBridge& driver, double integral) noexcept;

/// Stateful beta_t process. The whole Wiener path on [0, T] is drawn up front
/// because the bridge needs W_T.
class BetaProcess {
public:
    BetaProcess(BetaBridge driver, double dt, RngStream& rng);
    BetaProcess(BetaBridge driver, WienerPath path);

    /// Left-endpoint rectangle update I += sin^2(B_t) dt, then returns beta at t + dt.
    /// A step ending within half a step of T is accepted and clamped to T.
    /// Throws NonpositiveDt, OutOfHorizon.
    double step(double dt);

    [[nodiscard]] double time() const noexcept { return t_; }
    [[nodiscard]] double integral() const noexcept { return integral_; }
    [[nodiscard]] double value() const noexcept { return beta_from_integral(driver_, integral_); }
    [[nodiscard]] const BetaBridge& driver() const noexcept { return driver_; }

private:
    BetaBridge driver_;
    WienerPath path_;
    double t_ = 0.0;
    double integral_ = 0.0;
};

/// alpha_t = a1 + (a2 - a1) * a H / (1 + a H).
struct AlphaOfH {
    double a = 1.0;
    double a1 = 0.6;
    double a2 = 0.9;
};

/// Value in [a1, a2]; negative H is clamped to zero first.
[[nodiscard]] double alpha_of_h(const AlphaOfH& driver, double H) noexcept;

/// Theta_t(xi) = (1 + beta_t psi(xi))^{s/2} for a real base symbol psi.
class RandomSymbolProcess {
public:
    RandomSymbolProcess(levy::SymbolSpec base, double s);

    [[nodiscard]] double eval(double beta, std::span<const double> xi) const;
    [[nodiscard]] levy::SymbolSpec frozen(double beta) const;
    [[nodiscard]] const levy::SymbolSpec& base() const noexcept { return base_; }
    [[nodiscard]] double exponent() const noexcept { return s_; }

private:
    levy::SymbolSpec base_;
    double s_;
};

} // namespace levyflow
