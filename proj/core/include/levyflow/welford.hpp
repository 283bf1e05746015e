#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace levyflow {

/// Running (count, mean, M2) with M2 = sum (x - mean)^2.
struct Moments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double M2 = 0.0;

    void push(double x) noexcept;
    /// Unbiased sample variance; 0 for fewer than two samples.
    [[nodiscard]] double variance() const noexcept;
    /// sqrt(variance / count); 0 for fewer than two samples.
    [[nodiscard]] double standard_error() const noexcept;
};

/// Chan et al. pairwise update.
[[nodiscard]] Moments welford_merge(const Moments& a, const Moments& b) noexcept;
/// Left fold of the pairwise update.
[[nodiscard]] Moments welford_merge(std::span<const Moments> partials) noexcept;

/// Pointwise Welford accumulator for fields of fixed length.
class FieldMoments {
public:
    explicit FieldMoments(std::size_t size) : mean_(size, 0.0), m2_(size, 0.0) {}

    /// Throws DimensionMismatch.
    void push(std::span<const double> values);

    [[nodiscard]] std::uint64_t count() const noexcept { return count_; }
    [[nodiscard]] const std::vector<double>& mean() const noexcept { return mean_; }
    /// Unbiased pointwise variance (zeros for fewer than two samples).
    [[nodiscard]] std::vector<double> variance() const;

private:
    std::uint64_t count_ = 0;
    std::vector<double> mean_;
    std::vector<double> m2_;
};

} // namespace levyflow
