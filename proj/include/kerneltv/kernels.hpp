#pragma once

#include "kerneltv/image.hpp"

#include <span>
#include <utility>

namespace ktv {

enum class KernelFamily { gaussian, polynomial };

// Gaussian{delta}:    k(a,b) = exp(-sum_i (a_i-b_i)^2 / (2*delta)), delta > 0
// Polynomial{degree}: k(a,b) = (sum_i a_i*b_i)^degree, degree >= 1
//                     (degree in (0,1) is usable only on strictly positive
//                     intensities; the derivative forms throw on a zero base)
struct KernelSpec {
    KernelFamily family = KernelFamily::polynomial;
    double param = 1.0;

    static KernelSpec gaussian(double delta);
    static KernelSpec polynomial(double degree);

    bool is_gaussian() const { return family == KernelFamily::gaussian; }
    double delta() const { return param; }
    double degree() const { return param; }
};

// Pointwise sample for the derivative closed forms: pixel values of the
// working image (a) and its coupled image (b), plus per-channel spatial
// derivatives of the working image.
struct GradSample {
    PixelVec a;
    PixelVec b;
    PixelVec dax;
    PixelVec day;
};

// Feature-space inner products of the mapped image's partial derivatives.
struct MetricInner {
    double gxx = 0.0;
    double gyy = 0.0;
    double gxy = 0.0;
};

// Bases smaller than this are lifted before negative-exponent powers so
// that pure-black pixels do not produce infinities.
inline constexpr double kSingularBaseFloor = 1e-12;

double eval(const KernelSpec& k, const PixelVec& a, const PixelVec& b);

// <d_x phi(a), phi(b)> and the y counterpart.
double grad_k_x(const KernelSpec& k, const GradSample& s);
double grad_k_y(const KernelSpec& k, const GradSample& s);

// <d_x phi(a), d_x phi(a)>, <d_y phi(a), d_y phi(a)>, <d_x phi(a), d_y phi(a)>.
MetricInner metric_inner(const KernelSpec& k, const GradSample& s);

// Empirical 2nd-order Hoelder constant:
//   max over pairs of [k(a,a) + k(b,b) - 2 k(a,b)] / |a-b|^2.
double holder_estimate(const KernelSpec& k,
                       std::span<const std::pair<PixelVec, PixelVec>> pairs);

} // namespace ktv
