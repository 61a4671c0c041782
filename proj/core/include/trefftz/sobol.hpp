#pragma once

#include <array>
#include <cstdint>

namespace trefftz
{

/// Point `index` of the unscrambled 3-dimensional Sobol sequence (Joe-Kuo
/// direction numbers, Gray-code ordering). Point 0 is the origin.
std::array<double, 3> sobol3(std::uint32_t index);

}  // namespace trefftz
