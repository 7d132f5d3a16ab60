#include "qnd/counter_rng.hpp"

#include "qnd/constants.hpp"

#include <cmath>

namespace qnd {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t CounterRng::mix(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix(seed + kGolden) ^ mix(mix(stream) + 0x632BE59BD9B4E019ULL))
{
}

std::uint64_t CounterRng::next_u64()
{
    ++counter_;
    return mix(key_ + counter_ * kGolden);
}

double CounterRng::next_open_unit()
{
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double CounterRng::next_normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(next_open_unit()));
    const double a = 2.0 * kPi * next_open_unit();
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

} // namespace qnd
