#include "kerneltv/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace ktv {

namespace {

void check_channels(const PixelVec& a, const PixelVec& b) {
    if (a.channels != b.channels)
        throw std::invalid_argument("kernel operands have mismatched channel counts");
}

double dot(const PixelVec& a, const PixelVec& b) {
    double s = 0.0;
    for (int i = 0; i < a.channels; ++i) s += a[i] * b[i];
    return s;
}

double sq_dist(const PixelVec& a, const PixelVec& b) {
    double s = 0.0;
    for (int i = 0; i < a.channels; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

// pow with exact shortcuts for the exponents the solver leans on.
double powd(double x, double e) {
    if (e == 1.0) return x;
    if (e == 2.0) return x * x;
    if (e == 0.0) return 1.0;
    return std::pow(x, e);
}

// Lifts the base away from zero only when the exponent is negative.
double pow_guarded(double base, double e) {
    if (e < 0.0 && base < kSingularBaseFloor) base = kSingularBaseFloor;
    return powd(base, e);
}

bool is_integer(double d) { return d == std::floor(d); }

} // namespace

KernelSpec KernelSpec::gaussian(double delta) {
    if (!(delta > 0.0))
        throw std::invalid_argument("Gaussian kernel requires delta > 0");
    return {KernelFamily::gaussian, delta};
}

KernelSpec KernelSpec::polynomial(double degree) {
    if (!(degree > 0.0))
        throw std::invalid_argument("polynomial kernel requires degree > 0");
    return {KernelFamily::polynomial, degree};
}

double eval(const KernelSpec& k, const PixelVec& a, const PixelVec& b) {
    check_channels(a, b);
    if (k.is_gaussian())
        return std::exp(-sq_dist(a, b) / (2.0 * k.delta()));
    const double base = dot(a, b);
    if (base < 0.0 && !is_integer(k.degree()))
        throw std::domain_error("polynomial kernel: negative base with non-integer degree");
    return powd(base, k.degree());
}

double grad_k_x(const KernelSpec& k, const GradSample& s) {
    check_channels(s.a, s.b);
    if (k.is_gaussian()) {
        double acc = 0.0;
        for (int i = 0; i < s.a.channels; ++i)
            acc += (s.b[i] - s.a[i]) * s.dax[i];
        return eval(k, s.a, s.b) * acc / k.delta();
    }
    const double d = k.degree();
    const double base = dot(s.a, s.b);
    if (d < 1.0 && base <= kSingularBaseFloor)
        throw std::domain_error("polynomial kernel: singular base in gradient");
    double acc = 0.0;
    for (int i = 0; i < s.a.channels; ++i) acc += s.b[i] * s.dax[i];
    return d * pow_guarded(base, d - 1.0) * acc;
}

double grad_k_y(const KernelSpec& k, const GradSample& s) {
    GradSample t = s;
    t.dax = s.day;
    return grad_k_x(k, t);
}

MetricInner metric_inner(const KernelSpec& k, const GradSample& s) {
    MetricInner m;
    if (k.is_gaussian()) {
        const double inv_delta = 1.0 / k.delta();
        for (int i = 0; i < s.a.channels; ++i) {
            m.gxx += s.dax[i] * s.dax[i] * inv_delta;
            m.gyy += s.day[i] * s.day[i] * inv_delta;
            m.gxy += s.dax[i] * s.day[i] * inv_delta;
        }
        return m;
    }
    const double d = k.degree();
    const double base = dot(s.a, s.a);
    if (d < 1.0 && base <= kSingularBaseFloor)
        throw std::domain_error("polynomial kernel: singular base in metric");
    double sx = 0.0, sy = 0.0, pxx = 0.0, pyy = 0.0, pxy = 0.0;
    for (int i = 0; i < s.a.channels; ++i) {
        sx += s.a[i] * s.dax[i];
        sy += s.a[i] * s.day[i];
        pxx += s.dax[i] * s.dax[i];
        pyy += s.day[i] * s.day[i];
        pxy += s.dax[i] * s.day[i];
    }
    const double c1 = d * (d - 1.0) * pow_guarded(base, d - 2.0);
    const double c2 = d * pow_guarded(base, d - 1.0);
    m.gxx = c1 * sx * sx + c2 * pxx;
    m.gyy = c1 * sy * sy + c2 * pyy;
    m.gxy = c1 * sx * sy + c2 * pxy;
    return m;
}

double holder_estimate(const KernelSpec& k,
                       std::span<const std::pair<PixelVec, PixelVec>> pairs) {
    if (pairs.empty())
        throw std::invalid_argument("holder_estimate: empty pair list");
    double best = 0.0;
    for (const auto& [a, b] : pairs) {
        const double d2 = sq_dist(a, b);
        if (d2 == 0.0)
            throw std::invalid_argument("holder_estimate: pair with identical operands");
        const double num = eval(k, a, a) + eval(k, b, b) - 2.0 * eval(k, a, b);
        best = std::max(best, num / d2);
    }
    return best;
}

} // namespace ktv
