#include "levyflow/rng.hpp"

#include <cmath>
#include <numbers>

namespace levyflow {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

} // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kPhiloxW0;
            key[1] += kPhiloxW1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

RngStream::RngStream(std::uint64_t base_seed, std::uint64_t stream_index) noexcept
    : seed_(base_seed), stream_(stream_index) {}

void RngStream::refill() noexcept {
    const std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                           static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
    buffer_ = philox4x32_10(ctr, key);
    ++block_;
    used_ = 0;
}

std::uint32_t RngStream::next_u32() noexcept {
    if (used_ == 4) refill();
    return buffer_[static_cast<std::size_t>(used_++)];
}

std::uint64_t RngStream::next_u64() noexcept {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
}

double RngStream::uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RngStream::uniform_open() noexcept {
    // (k + 0.5) / 2^53 never hits either endpoint.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() noexcept {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(theta);
    has_cached_normal_ = true;
    return r * std::cos(theta);
}

double RngStream::exponential(double rate) noexcept { return -std::log(uniform_open()) / rate; }

double RngStream::laplace(double loc, double scale) noexcept { return laplace_quantile(uniform_open(), loc, scale); }

double RngStream::cauchy(double loc, double scale) noexcept { return cauchy_quantile(uniform_open(), loc, scale); }

double RngStream::triangular(double left, double mode, double right) noexcept {
    return triangular_quantile(uniform(), left, mode, right);
}

double laplace_quantile(double u, double loc, double scale) noexcept {
    const double c = u - 0.5;
    return c < 0.0 ? loc + scale * std::log(2.0 * u) : loc - scale * std::log(2.0 * (1.0 - u));
}

double cauchy_quantile(double u, double loc, double scale) noexcept {
    return loc + scale * std::tan(std::numbers::pi * (u - 0.5));
}

double triangular_quantile(double u, double left, double mode, double right) noexcept {
    const double width = right - left;
    const double split = (mode - left) / width;
    if (u < split) return left + std::sqrt(u * width * (mode - left));
    return right - std::sqrt((1.0 - u) * width * (right - mode));
}

} // namespace levyflow
