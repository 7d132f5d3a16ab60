#pragma once

#include <cstdint>

namespace qnd {

/// Counter-based generator: draw k of stream s under seed is a pure function
/// splitmix64(key(seed, s) + k * golden). Streams are independent per shot, so
/// records are bit-reproducible and can be generated in any order.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    /// Uniform in (0, 1].
    double next_open_unit();
    /// Standard normal via Box-Muller (both variates used).
    double next_normal();

    static std::uint64_t mix(std::uint64_t x);

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace qnd
