#pragma once

#include "kerneltv/image.hpp"
#include "kerneltv/kernels.hpp"

#include <cstdint>
#include <vector>

namespace ktv {

// Per-pixel scalar field k(I^a(x,y), I^b(x,y)); the state the fixed point
// evolves. Values are not range-restricted (polynomial color fields may
// exceed 1).
struct KernelField {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    KernelField() = default;
    KernelField(int w, int h, double fill = 0.0)
        : width(w), height(h),
          values(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

    double at(int x, int y) const {
        return values[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(x)];
    }
    double& at(int x, int y) {
        return values[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(x)];
    }
};

// Coupled-image recipe. Gray images pair with a constant image; each color
// channel pairs with a channel-masked image (Gaussian: target zeroed,
// polynomial: one-hot target).
struct CoupleRule {
    enum class Kind { gray_constant, color_channel };
    Kind kind = Kind::gray_constant;
    double level = 1.0; // gray_constant only
    int target = 0;     // color_channel only

    static CoupleRule gray_constant(double level);
    static CoupleRule color_channel(int target);
};

// The constant coupled level under which reconstruction is exact:
// 1 for polynomial kernels, 0 for Gaussian kernels.
CoupleRule canonical_gray_couple(const KernelSpec& k);

// Counters for out-of-range values met during reconstruction. Convex
// low-pass sweeps keep fields in range, so nonzero counts indicate only
// floating-point dust; they are surfaced in solver diagnostics.
struct ClampCounter {
    std::uint64_t kernel_range = 0;
    std::uint64_t intensity_range = 0;
};

Image make_coupled(const CoupleRule& rule, const KernelSpec& k, const Image& current);

KernelField kernel_field(const KernelSpec& k, const Image& a, const Image& b);

// Inverts k = exp(-t^2 / 2*delta): returns sqrt(-ln(v) * 2*delta), clamped
// to [0,1]. v > 1 is treated as 1 (counted); v <= 0 throws.
double reconstruct_gaussian(double v, double delta, ClampCounter* warn = nullptr);

// Inverts k = t^degree: returns v^(1/degree), clamped to [0,1]. v < 0 is
// clamped to 0 (counted).
double reconstruct_polynomial(double v, double degree, ClampCounter* warn = nullptr);

} // namespace ktv
