#include "citewin/rng.hpp"

#include "citewin/normal.hpp"

#include <cmath>
#include <stdexcept>

namespace citewin {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : state_(mix64(seed + kGolden * (stream + 1))) {}

std::uint64_t RngStream::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double RngStream::next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::next_normal() {
    return normal_quantile(next_unit());
}

std::uint64_t RngStream::next_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("next_below: n must be >= 1");
    if ((n & (n - 1)) == 0) return next_u64() & (n - 1);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
        std::uint64_t v = next_u64();
        if (v < limit) return v % n;
    }
}

std::int64_t RngStream::next_poisson(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("next_poisson: lambda must be finite and >= 0");
    }
    std::int64_t total = 0;
    // Split large rates so exp(-lambda) stays far from underflow.
    while (lambda > 16.0) {
        total += next_poisson(16.0);
        lambda -= 16.0;
    }
    if (lambda == 0.0) return total;
    const double threshold = std::exp(-lambda);
    double p = 1.0;
    std::int64_t k = -1;
    do {
        ++k;
        p *= next_unit();
    } while (p > threshold);
    return total + k;
}

} // namespace citewin
