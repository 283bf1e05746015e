#pragma once

#include <array>
#include <cstdint>

namespace levyflow {

/// Philox4x32-10 block function (Salmon et al., SC'11).
[[nodiscard]] std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                                        std::array<std::uint32_t, 2> key) noexcept;

/// Counter-based random stream.
///
/// The key is the 64-bit base seed, the upper half of the counter is the
/// stream index, and the lower half counts blocks. Two streams built from the
/// same (base_seed, stream_index) produce bit-identical sequences on every
/// platform; the non-uniform transforms below are written out explicitly for
/// the same reason (std:: distributions are implementation-defined).
///
/// Single owner: a stream must not be shared between threads.
class RngStream {
public:
    RngStream(std::uint64_t base_seed, std::uint64_t stream_index) noexcept;

    [[nodiscard]] std::uint64_t base_seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream_index() const noexcept { return stream_; }

    std::uint32_t next_u32() noexcept;
    std::uint64_t next_u64() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform on (0, 1).
    double uniform_open() noexcept;

    /// Standard normal via Box–Muller; the second variate is cached.
    double normal() noexcept;
    double exponential(double rate = 1.0) noexcept;
    double laplace(double loc = 0.0, double scale = 1.0) noexcept;
    double cauchy(double loc = 0.0, double scale = 1.0) noexcept;
    /// Triangular law on [left, right] with the given mode.
    double triangular(double left, double mode, double right) noexcept;

private:
    void refill() noexcept;

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int used_ = 4;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

/// Inverse-CDF transforms shared by RngStream and tests that force the uniform input.
[[nodiscard]] double laplace_quantile(double u, double loc, double scale) noexcept;
[[nodiscard]] double cauchy_quantile(double u, double loc, double scale) noexcept;
[[nodiscard]] double triangular_quantile(double u, double left, double mode, double right) noexcept;

} // namespace levyflow
