#include "levyflow/drivers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levyflow/errors.hpp"

namespace levyflow {

WienerPath::WienerPath(double dt, std::vector<double> values) : dt_(dt), values_(std::move(values)) {
    require(dt_ > 0.0, ErrorCode::NonpositiveDt, "Wiener path spacing must be positive");
    require(!values_.empty(), ErrorCode::InvalidArgument, "Wiener path needs at least W_0");
}

WienerPath WienerPath::sample(double horizon, double dt, RngStream& rng) {
    require(dt > 0.0, ErrorCode::NonpositiveDt, "dt must be positive");
    require(horizon > 0.0, ErrorCode::InvalidArgument, "horizon must be positive");
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    std::vector<double> w(steps + 1, 0.0);
    const double sd = std::sqrt(dt);
    for (std::size_t n = 1; n <= steps; ++n) w[n] = w[n - 1] + sd * rng.normal();
    return {dt, std::move(w)};
}

double WienerPath::at(double t) const {
    require(t >= 0.0 && t <= horizon() * (1.0 + 1e-12), ErrorCode::OutOfHorizon, "time outside the sampled path");
    const double pos = t / dt_;
    const auto n = std::min(static_cast<std::size_t>(pos), values_.size() - 1);
    if (n + 1 >= values_.size()) return values_.back();
    const double frac = pos - static_cast<double>(n);
    return values_[n] + frac * (values_[n + 1] - values_[n]);
}

double bridge_value(const BetaBridge& driver, double t, double w_t, double w_T) {
    const double T = driver.horizon;
    require(t >= 0.0 && t <= T, ErrorCode::OutOfHorizon, "bridge time outside [0, T]");
    if (t == 0.0) return driver.beta3;
    if (t == T) return driver.beta4;
    return ((T - t) * driver.beta3 + T * w_t + t * (driver.beta4 - w_T)) / T;
}

double bridge_value(const BetaBridge& driver, double t, const WienerPath& path) {
    require(t >= 0.0 && t <= driver.horizon, ErrorCode::OutOfHorizon, "bridge time outside [0, T]");
    return bridge_value(driver, t, path.at(t), path.at(driver.horizon));
}

double beta_from_integral(const BetaBridge& driver, double integral) noexcept {
    if (std::isinf(integral)) return driver.beta1 + driver.beta2;
    return driver.beta1 + driver.beta2 * integral / (1.0 + integral);
}

BetaProcess::BetaProcess(BetaBridge driver, double dt, RngStream& rng)
    : BetaProcess(driver, WienerPath::sample(driver.horizon, dt, rng)) {}

BetaProcess::BetaProcess(BetaBridge driver, WienerPath path) : driver_(driver), path_(std::move(path)) {
    require(driver_.horizon > 0.0, ErrorCode::InvalidArgument, "bridge horizon must be positive");
    require(path_.horizon() >= driver_.horizon * (1.0 - 1e-12), ErrorCode::OutOfHorizon, "Wiener path shorter than horizon");
}

double BetaProcess::step(double dt) {
    require(dt > 0.0, ErrorCode::NonpositiveDt, "dt must be positive");
    // accumulated round-off in t_ can push the last step slightly past T; it is clamped below
    require(t_ + dt <= driver_.horizon + 0.5 * dt, ErrorCode::OutOfHorizon, "beta process stepped past its horizon");
    const double b = bridge_value(driver_, std::min(t_, driver_.horizon), path_);
    const double s = std::sin(b);
    integral_ += s * s * dt;
    t_ = std::min(t_ + dt, driver_.horizon);
    return value();
}

double alpha_of_h(const AlphaOfH& driver, double H) noexcept {
    const double h = std::max(H, 0.0);
    const double x = driver.a * h;
    if (std::isinf(x)) return driver.a2;
    return driver.a1 + (driver.a2 - driver.a1) * x / (1.0 + x);
}

RandomSymbolProcess::RandomSymbolProcess(levy::SymbolSpec base, double s) : base_(std::move(base)), s_(s) {
    require(s_ > 0.0, ErrorCode::InvalidArgument, "exponent s must be positive");
}

double RandomSymbolProcess::eval(double beta, std::span<const double> xi) const {
    const levy::Complex v = levy::eval_symbol(base_, xi);
    require(std::abs(v.imag()) <= 1e-12 * std::max(1.0, std::abs(v.real())), ErrorCode::NotRealValued,
            "random symbols need a real base symbol");
    return std::pow(1.0 + beta * v.real(), 0.5 * s_);
}

levy::SymbolSpec RandomSymbolProcess::frozen(double beta) const {
    return levy::SymbolSpec::shifted(s_, levy::SymbolSpec::scaled(beta, base_));
}

} // namespace levyflow
