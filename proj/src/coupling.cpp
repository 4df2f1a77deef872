#include "kerneltv/coupling.hpp"

#include <cmath>
#include <stdexcept>

namespace ktv {

CoupleRule CoupleRule::gray_constant(double level) {
    if (level < 0.0 || level > 1.0)
        throw std::invalid_argument("gray couple level must be in [0,1]");
    CoupleRule r;
    r.kind = Kind::gray_constant;
    r.level = level;
    return r;
}

CoupleRule CoupleRule::color_channel(int target) {
    if (target < 0 || target > 2)
        throw std::invalid_argument("color couple target must be 0, 1, or 2");
    CoupleRule r;
    r.kind = Kind::color_channel;
    r.target = target;
    return r;
}

CoupleRule canonical_gray_couple(const KernelSpec& k) {
    return CoupleRule::gray_constant(k.is_gaussian() ? 0.0 : 1.0);
}

Image make_coupled(const CoupleRule& rule, const KernelSpec& k, const Image& current) {
    if (rule.kind == CoupleRule::Kind::gray_constant) {
        if (current.channels() != 1)
            throw std::invalid_argument("gray-constant couple requires a 1-channel image");
        return Image(current.width(), current.height(), 1, rule.level);
    }
    if (current.channels() != 3)
        throw std::invalid_argument("color-channel couple requires a 3-channel image");
    if (k.is_gaussian()) {
        // Same image with the target channel zeroed: cross-channel terms of
        // the kernel vanish and k collapses to exp(-I_t^2 / 2*delta).
        Image b = current;
        for (int y = 0; y < b.height(); ++y)
            for (int x = 0; x < b.width(); ++x) b.at(x, y, rule.target) = 0.0;
        return b;
    }
    // One-hot image: k collapses to (I_t)^d.
    Image b(current.width(), current.height(), 3, 0.0);
    for (int y = 0; y < b.height(); ++y)
        for (int x = 0; x < b.width(); ++x) b.at(x, y, rule.target) = 1.0;
    return b;
}

KernelField kernel_field(const KernelSpec& k, const Image& a, const Image& b) {
    if (!a.same_shape(b))
        throw std::invalid_argument("kernel_field: image shapes differ");
    KernelField f(a.width(), a.height());
    for (int y = 0; y < a.height(); ++y)
        for (int x = 0; x < a.width(); ++x)
            f.at(x, y) = eval(k, a.pixel(x, y), b.pixel(x, y));
    return f;
}

double reconstruct_gaussian(double v, double delta, ClampCounter* warn) {
    if (!(delta > 0.0))
        throw std::invalid_argument("reconstruct_gaussian: delta must be > 0");
    if (v <= 0.0)
        throw std::domain_error("reconstruct_gaussian: kernel value must be positive");
    if (v > 1.0) {
        if (warn) ++warn->kernel_range;
        v = 1.0;
    }
    double t = std::sqrt(-std::log(v) * 2.0 * delta);
    if (t > 1.0) {
        if (warn) ++warn->intensity_range;
        t = 1.0;
    }
    return t;
}

double reconstruct_polynomial(double v, double degree, ClampCounter* warn) {
    if (!(degree > 0.0))
        throw std::invalid_argument("reconstruct_polynomial: degree must be > 0");
    if (v < 0.0) {
        if (warn) ++warn->kernel_range;
        return 0.0;
    }
    double t = degree == 1.0 ? v : std::pow(v, 1.0 / degree);
    if (t > 1.0) {
        if (warn) ++warn->intensity_range;
        t = 1.0;
    }
    return t;
}

} // namespace ktv
