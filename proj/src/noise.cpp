#include "kerneltv/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ktv {

namespace {

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double to_unit(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53; // [0,1)
}

} // namespace

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t index) {
    return mix64(mix64(seed) ^ mix64(index ^ 0xD1B54A32D192ED03ull));
}

double counter_uniform(std::uint64_t seed, std::uint64_t index) {
    return to_unit(counter_hash(seed, index));
}

double counter_gaussian(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t h = counter_hash(seed, index);
    const double u1 = to_unit(h) + 0x1.0p-53;          // (0,1]
    const double u2 = to_unit(mix64(h ^ 0xA0761D6478BD642Full)); // [0,1)
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

Image add_multiplicative_gaussian(const Image& img, const NoiseSpec& ns) {
    if (ns.sigma < 0.0)
        throw std::invalid_argument("noise: sigma must be >= 0");
    if (ns.sigma == 0.0) return img;
    const double rel_std = ns.sigma / 255.0;
    Image out = img;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double n = counter_gaussian(ns.seed, static_cast<std::uint64_t>(i));
        out.data()[i] = clamp01(out.data()[i] * (1.0 + rel_std * n));
    }
    return out;
}

} // namespace ktv
