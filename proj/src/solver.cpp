#include "kerneltv/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace ktv {

namespace {

using clock_type = std::chrono::steady_clock;

double elapsed_ms(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

// Central difference of channel c along x (y fixed), reflective boundaries.
double central_dx(const Image& img, int x, int y, int c) {
    const int xp = reflect(x + 1, img.width());
    const int xm = reflect(x - 1, img.width());
    return 0.5 * (img.at(xp, y, c) - img.at(xm, y, c));
}

double central_dy(const Image& img, int x, int y, int c) {
    const int yp = reflect(y + 1, img.height());
    const int ym = reflect(y - 1, img.height());
    return 0.5 * (img.at(x, yp, c) - img.at(x, ym, c));
}

struct MinMax {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void absorb(const KernelField& f) {
        for (double v : f.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
};

double max_abs_diff(const KernelField& a, const KernelField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

// Reconstructs one intensity from a kernel value under a gray-constant
// couple at the given level.
double reconstruct_gray(const KernelSpec& k, double v, double level, ClampCounter* warn) {
    if (k.is_gaussian()) return reconstruct_gaussian(v, k.delta(), warn);
    if (level == 1.0) return reconstruct_polynomial(v, k.degree(), warn);
    return clamp01(reconstruct_polynomial(v, k.degree(), warn) / level);
}

void check_gray_rule(const KernelSpec& k, const CoupleRule& rule) {
    if (rule.kind != CoupleRule::Kind::gray_constant)
        throw std::invalid_argument("gray solver requires a gray-constant couple");
    if (k.is_gaussian() && rule.level != 0.0)
        throw std::invalid_argument(
            "Gaussian gray couple level must be 0 (kernel value is not invertible otherwise)");
    if (!k.is_gaussian() && rule.level <= 0.0)
        throw std::invalid_argument("polynomial gray couple level must be > 0");
}

} // namespace

void SolverConfig::validate() const {
    if (!(p > 0.0)) throw std::invalid_argument("solver: p must be > 0");
    if (lambda < 0.0) throw std::invalid_argument("solver: lambda must be >= 0");
    if (max_iters < 1) throw std::invalid_argument("solver: max_iters must be >= 1");
    if (!(eps > 0.0)) throw std::invalid_argument("solver: eps must be > 0");
    if (stop_tol < 0.0) throw std::invalid_argument("solver: stop_tol must be >= 0");
}

double half_point_grad(const MetricContext& ctx, int x, int y, Dir dir,
                       const SolverConfig& cfg) {
    const Image& img = *ctx.image;
    const int nc = img.channels();

    int rx = x, ry = y;
    const bool horizontal = dir == Dir::east || dir == Dir::west;
    switch (dir) {
        case Dir::east: rx = reflect(x + 1, img.width()); break;
        case Dir::west: rx = reflect(x - 1, img.width()); break;
        case Dir::north: ry = reflect(y - 1, img.height()); break;
        case Dir::south: ry = reflect(y + 1, img.height()); break;
    }

    GradSample s;
    s.a.channels = s.b.channels = s.dax.channels = s.day.channels = nc;
    for (int c = 0; c < nc; ++c) {
        s.a[c] = 0.5 * (img.at(x, y, c) + img.at(rx, ry, c));
        if (horizontal) {
            s.dax[c] = img.at(rx, ry, c) - img.at(x, y, c);
            s.day[c] = 0.5 * (central_dy(img, x, y, c) + central_dy(img, rx, ry, c));
        } else {
            s.day[c] = img.at(rx, ry, c) - img.at(x, y, c);
            s.dax[c] = 0.5 * (central_dx(img, x, y, c) + central_dx(img, rx, ry, c));
        }
    }
    s.b = s.a; // the metric never reads the coupled value

    const MetricInner m = metric_inner(ctx.kernel, s);
    const double mag2 = m.gxx + m.gyy + cfg.eps;
    if (cfg.p == 2.0) return 1.0;
    return std::pow(mag2, 0.5 * (cfg.p - 2.0));
}

StencilWeights stencil(const MetricContext& ctx, int x, int y,
                       const SolverConfig& cfg) {
    const double wE = half_point_grad(ctx, x, y, Dir::east, cfg);
    const double wN = half_point_grad(ctx, x, y, Dir::north, cfg);
    const double wW = half_point_grad(ctx, x, y, Dir::west, cfg);
    const double wS = half_point_grad(ctx, x, y, Dir::south, cfg);
    const double denom = wE + wN + wW + wS + cfg.lambda;
    StencilWeights h;
    h.hE = wE / denom;
    h.hN = wN / denom;
    h.hW = wW / denom;
    h.hS = wS / denom;
    h.hO = cfg.lambda / denom;
    return h;
}

KernelField gtv_step(const KernelField& field, const KernelField& field0,
                     const MetricContext& ctx, const SolverConfig& cfg) {
    if (field.width != field0.width || field.height != field0.height)
        throw std::invalid_argument("gtv_step: field shapes differ");
    const int w = field.width, h = field.height;
    KernelField out(w, h);
    for (int y = 0; y < h; ++y) {
        const int yn = reflect(y - 1, h);
        const int ys = reflect(y + 1, h);
        for (int x = 0; x < w; ++x) {
            const int xe = reflect(x + 1, w);
            const int xw = reflect(x - 1, w);
            const StencilWeights hw = stencil(ctx, x, y, cfg);
            out.at(x, y) = hw.hE * field.at(xe, y) + hw.hN * field.at(x, yn) +
                           hw.hW * field.at(xw, y) + hw.hS * field.at(x, ys) +
                           hw.hO * field0.at(x, y);
        }
    }
    return out;
}

GraySolve solve_gray(const Image& noisy, const KernelSpec& k, const CoupleRule& rule,
                     const SolverConfig& cfg, SolveDiagnostics* diag) {
    cfg.validate();
    if (noisy.channels() != 1)
        throw std::invalid_argument("solve_gray: image must have one channel");
    check_gray_rule(k, rule);

    Image current = noisy;
    const Image couple = make_coupled(rule, k, current);
    KernelField field = kernel_field(k, current, couple);
    const KernelField field0 = kernel_field(k, noisy, couple);

    ClampCounter clamps;
    if (diag) {
        MinMax mm;
        mm.absorb(field);
        mm.absorb(field0);
        diag->initial_min = mm.lo;
        diag->initial_max = mm.hi;
    }

    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
        const auto t0 = clock_type::now();
        const std::uint64_t warn_before = clamps.kernel_range + clamps.intensity_range;

        const MetricContext ctx{&current, k};
        KernelField next = gtv_step(field, field0, ctx, cfg);
        const double change = max_abs_diff(next, field);

        for (int y = 0; y < current.height(); ++y)
            for (int x = 0; x < current.width(); ++x)
                current.at(x, y) = reconstruct_gray(k, next.at(x, y), rule.level, &clamps);
        field = std::move(next);

        if (diag) {
            MinMax mm;
            mm.absorb(field);
            diag->iterations.push_back({iter, change,
                                        clamps.kernel_range + clamps.intensity_range - warn_before,
                                        elapsed_ms(t0), mm.lo, mm.hi});
            diag->iterations_run = iter;
            diag->clamps = clamps;
        }
        if (cfg.stop_tol > 0.0 && change < cfg.stop_tol) break;
    }
    return {std::move(current), std::move(field)};
}

ColorSolve solve_color(const Image& noisy, const KernelSpec& k, const SolverConfig& cfg,
                       SolveDiagnostics* diag, ChannelUpdate order) {
    cfg.validate();
    if (noisy.channels() != 3)
        throw std::invalid_argument("solve_color: image must have three channels");

    Image current = noisy;
    ClampCounter clamps;
    MinMax initial;
    std::array<KernelField, 3> fields;

    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
        const auto t0 = clock_type::now();
        const std::uint64_t warn_before = clamps.kernel_range + clamps.intensity_range;
        double change = 0.0;
        MinMax mm;

        Image snapshot; // read source for simultaneous mode
        if (order == ChannelUpdate::simultaneous) snapshot = current;
        const Image& source = order == ChannelUpdate::simultaneous ? snapshot : current;
        std::array<Image, 3> pending; // simultaneous-mode channel results

        for (int t = 0; t < 3; ++t) {
            const CoupleRule rule = CoupleRule::color_channel(t);
            const Image couple = make_coupled(rule, k, source);
            const KernelField field = kernel_field(k, source, couple);
            const KernelField field0 = kernel_field(k, noisy, couple);
            if (iter == 1) {
                initial.absorb(field);
                initial.absorb(field0);
            }

            const MetricContext ctx{&source, k};
            KernelField next = gtv_step(field, field0, ctx, cfg);
            change = std::max(change, max_abs_diff(next, field));
            mm.absorb(next);

            Image chan(current.width(), current.height(), 1);
            for (int y = 0; y < chan.height(); ++y)
                for (int x = 0; x < chan.width(); ++x)
                    chan.at(x, y) = k.is_gaussian()
                                        ? reconstruct_gaussian(next.at(x, y), k.delta(), &clamps)
                                        : reconstruct_polynomial(next.at(x, y), k.degree(), &clamps);

            if (order == ChannelUpdate::sequential)
                current.set_channel(t, chan);
            else
                pending[static_cast<std::size_t>(t)] = std::move(chan);
            fields[static_cast<std::size_t>(t)] = std::move(next);
        }
        if (order == ChannelUpdate::simultaneous)
            for (int t = 0; t < 3; ++t)
                current.set_channel(t, pending[static_cast<std::size_t>(t)]);

        if (diag) {
            if (iter == 1) {
                diag->initial_min = initial.lo;
                diag->initial_max = initial.hi;
            }
            diag->iterations.push_back({iter, change,
                                        clamps.kernel_range + clamps.intensity_range - warn_before,
                                        elapsed_ms(t0), mm.lo, mm.hi});
            diag->iterations_run = iter;
            diag->clamps = clamps;
        }
        if (cfg.stop_tol > 0.0 && change < cfg.stop_tol) break;
    }
    return {std::move(current), std::move(fields)};
}

Image denoise_gray(const Image& noisy, const KernelSpec& k, const CoupleRule& rule,
                   const SolverConfig& cfg, SolveDiagnostics* diag) {
    return clamped(solve_gray(noisy, k, rule, cfg, diag).image);
}

Image denoise_color(const Image& noisy, const KernelSpec& k, const SolverConfig& cfg,
                    SolveDiagnostics* diag, ChannelUpdate order) {
    return clamped(solve_color(noisy, k, cfg, diag, order).image);
}

void write_diagnostics_csv(const SolveDiagnostics& diag, std::ostream& os) {
    os << "iter,max_change,clamp_warnings,wall_ms\n";
    for (const auto& it : diag.iterations)
        os << it.iter << ',' << it.max_change << ',' << it.clamp_warnings << ','
           << it.wall_ms << '\n';
}

} // namespace ktv
