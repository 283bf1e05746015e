#include "levyflow/welford.hpp"

#include <cmath>

#include "levyflow/errors.hpp"

namespace levyflow {

void Moments::push(double x) noexcept {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    M2 += d * (x - mean);
}

double Moments::variance() const noexcept { return count > 1 ? M2 / static_cast<double>(count - 1) : 0.0; }

double Moments::standard_error() const noexcept {
    return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
}

Moments welford_merge(const Moments& a, const Moments& b) noexcept {
    if (a.count == 0) return b;
    if (b.count == 0) return a;
    const auto na = static_cast<double>(a.count);
    const auto nb = static_cast<double>(b.count);
    const double n = na + nb;
    const double d = b.mean - a.mean;
    return {a.count + b.count, a.mean + d * nb / n, a.M2 + b.M2 + d * d * na * nb / n};
}

Moments welford_merge(std::span<const Moments> partials) noexcept {
    Moments out;
    for (const Moments& m : partials) out = welford_merge(out, m);
    return out;
}

void FieldMoments::push(std::span<const double> values) {
    require(values.size() == mean_.size(), ErrorCode::DimensionMismatch, "field size differs from accumulator");
    ++count_;
    const auto n = static_cast<double>(count_);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - mean_[i];
        mean_[i] += d / n;
        m2_[i] += d * (values[i] - mean_[i]);
    }
}

std::vector<double> FieldMoments::variance() const {
    std::vector<double> v(m2_.size(), 0.0);
    if (count_ < 2) return v;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = m2_[i] / static_cast<double>(count_ - 1);
    return v;
}

} // namespace levyflow
