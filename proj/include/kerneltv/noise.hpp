#pragma once

#include "kerneltv/image.hpp"

#include <cstdint>

namespace ktv {

// sigma follows the 0-255 byte convention; the applied relative deviation
// is sigma/255 on normalized intensities.
struct NoiseSpec {
    double sigma = 20.0;
    std::uint64_t seed = 0;
};

// Counter-based generators: the draw for (seed, index) is a pure function,
// so noising is reproducible and independent of evaluation order.
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t index);
double counter_uniform(std::uint64_t seed, std::uint64_t index); // [0,1)
double counter_gaussian(std::uint64_t seed, std::uint64_t index); // N(0,1)

// I' = clamp(I * (1 + n), 0, 1) with n ~ N(0, (sigma/255)^2) drawn per
// sample (pixel, channel).
Image add_multiplicative_gaussian(const Image& img, const NoiseSpec& ns);

} // namespace ktv
