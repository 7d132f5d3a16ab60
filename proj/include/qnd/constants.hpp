#pragma once

#include <numbers>

namespace qnd {

inline constexpr double kHbar = 1.054571817e-34; // J s
inline constexpr double kPi = std::numbers::pi;

} // namespace qnd
