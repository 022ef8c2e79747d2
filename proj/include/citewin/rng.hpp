#pragma once

#include <cstdint>

namespace citewin {

// Counter-based deterministic RNG: each stream is an independent splitmix64
// sequence keyed by (seed, stream index), so per-researcher sub-streams can
// be created in any order and still reproduce bit-identically.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    // Uniform draw strictly inside (0,1).
    double next_unit();

    // Standard normal via inverse-CDF transform.
    double next_normal();

    // Uniform integer in [0, n), n >= 1. Rejection sampling, no modulo bias.
    std::uint64_t next_below(std::uint64_t n);

    // Poisson draw, lambda >= 0. Exact (Knuth multiplication on chunks of
    // the rate, summed via Poisson additivity).
    std::int64_t next_poisson(double lambda);

  private:
    std::uint64_t state_;
};

} // namespace citewin
