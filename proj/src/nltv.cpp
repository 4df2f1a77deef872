#include "kerneltv/nltv.hpp"

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

// Squared distance between the 5-pixel cross patches at p and q, summed
// over channels; boundary samples reflect.
double patch_dist2(const Image& img, int px, int py, int qx, int qy) {
    static constexpr int off[5][2] = {{0, 0}, {1, 0}, {-1, 0}, {0, -1}, {0, 1}};
    double s = 0.0;
    for (const auto& o : off) {
        const int pax = reflect(px + o[0], img.width());
        const int pay = reflect(py + o[1], img.height());
        const int qax = reflect(qx + o[0], img.width());
        const int qay = reflect(qy + o[1], img.height());
        for (int c = 0; c < img.channels(); ++c) {
            const double d = img.at(pax, pay, c) - img.at(qax, qay, c);
            s += d * d;
        }
    }
    return s;
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

// Per-edge squared feature-space difference G(p,q); see NlMetric. The
// polynomial coefficients depend only on the p-side pixel, so sweeps
// precompute them per pixel.
struct PolyCoef {
    double c1 = 0.0;
    double c2 = 1.0;
};

PolyCoef poly_coef(double degree, const PixelVec& a) {
    const double d = degree;
    double base = 0.0;
    for (int i = 0; i < a.channels; ++i) base += a[i] * a[i];
    if (d < 1.0 && base <= kSingularBaseFloor)
        throw std::domain_error("polynomial kernel: singular base in nonlocal metric");
    auto guarded = [](double b, double e) {
        if (e < 0.0 && b < kSingularBaseFloor) b = kSingularBaseFloor;
        return e == 0.0 ? 1.0 : std::pow(b, e);
    };
    return {d * (d - 1.0) * guarded(base, d - 2.0), d * guarded(base, d - 1.0)};
}

class EdgeMetric {
public:
    EdgeMetric(const NlMetric& m, const KernelField& field) : field_(&field) {
        if (!m.kernel) return;
        img_ = m.image;
        gaussian_ = m.kernel->is_gaussian();
        if (gaussian_) {
            inv_delta_ = 1.0 / m.kernel->delta();
            return;
        }
        const std::size_t n = static_cast<std::size_t>(img_->width()) *
                              static_cast<std::size_t>(img_->height());
        coef_.resize(n);
        for (int y = 0; y < img_->height(); ++y)
            for (int x = 0; x < img_->width(); ++x)
                coef_[static_cast<std::size_t>(y * img_->width() + x)] =
                    poly_coef(m.kernel->degree(), img_->pixel(x, y));
    }

    double operator()(int p, int q) const {
        if (!img_) {
            const double d = field_->values[static_cast<std::size_t>(q)] -
                             field_->values[static_cast<std::size_t>(p)];
            return d * d;
        }
        const int w = img_->width();
        const int px = p % w, py = p / w;
        const int qx = q % w, qy = q / w;
        const int nc = img_->channels();
        if (gaussian_) {
            double s = 0.0;
            for (int c = 0; c < nc; ++c) {
                const double d = img_->at(qx, qy, c) - img_->at(px, py, c);
                s += d * d * inv_delta_;
            }
            return s;
        }
        const PolyCoef& pc = coef_[static_cast<std::size_t>(p)];
        double sx = 0.0, pxx = 0.0;
        for (int c = 0; c < nc; ++c) {
            const double d = img_->at(qx, qy, c) - img_->at(px, py, c);
            sx += img_->at(px, py, c) * d;
            pxx += d * d;
        }
        return pc.c1 * sx * sx + pc.c2 * pxx;
    }

private:
    const KernelField* field_;
    const Image* img_ = nullptr;
    bool gaussian_ = false;
    double inv_delta_ = 1.0;
    std::vector<PolyCoef> coef_;
};

// Shared stencil core: fills h (sized to the neighbor count) and returns
// h_self.
double nl_weights_into(const NonlocalGraph& graph, const EdgeMetric& G, int p,
                       const SolverConfig& cfg, std::span<double> h) {
    const auto edges = graph.neighbors(p);
    double grad2 = 0.0;
    for (const auto& e : edges) grad2 += e.w * G(p, e.q);
    const double c =
        cfg.p == 2.0 ? 1.0 : std::pow(grad2 + cfg.eps, 0.5 * (cfg.p - 2.0));
    double denom = cfg.lambda;
    for (const auto& e : edges) denom += e.w * c;
    for (std::size_t i = 0; i < edges.size(); ++i) h[i] = edges[i].w * c / denom;
    return cfg.lambda / denom;
}

KernelField image_channel_field(const Image& img, int c) {
    KernelField f(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) f.at(x, y) = img.at(x, y, c);
    return f;
}

KernelField nltv_sweep(const KernelField& field, const KernelField& field0,
                       const NonlocalGraph& graph, const EdgeMetric& G,
                       const SolverConfig& cfg) {
    KernelField out(field.width, field.height);
    std::vector<double> h;
    for (int p = 0; p < field.width * field.height; ++p) {
        const auto edges = graph.neighbors(p);
        h.resize(edges.size());
        const double h_self = nl_weights_into(graph, G, p, cfg, h);
        double acc = h_self * field0.values[static_cast<std::size_t>(p)];
        for (std::size_t i = 0; i < edges.size(); ++i)
            acc += h[i] * field.values[static_cast<std::size_t>(edges[i].q)];
        out.values[static_cast<std::size_t>(p)] = acc;
    }
    return out;
}

} // namespace

void NlConfig::validate() const {
    if (search_radius < 1)
        throw std::invalid_argument("nltv: search_radius must be >= 1");
    const int window = (2 * search_radius + 1) * (2 * search_radius + 1);
    if (k_best < 1 || k_best > window - 1)
        throw std::invalid_argument("nltv: k_best must be in [1, window size - 1]");
    if (!(h_sim > 0.0)) throw std::invalid_argument("nltv: h_sim must be > 0");
}

double NonlocalGraph::mean_degree() const {
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    return n == 0 ? 0.0 : static_cast<double>(edges.size()) / static_cast<double>(n);
}

NonlocalGraph build_graph(const Image& img, const NlConfig& nc) {
    nc.validate();
    const int w = img.width(), h = img.height();
    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    const double inv_h2 = 1.0 / (nc.h_sim * nc.h_sim);

    std::vector<std::vector<NonlocalGraph::Edge>> adj(n);
    std::vector<NonlocalGraph::Edge> cand;
    cand.reserve(static_cast<std::size_t>((2 * nc.search_radius + 1) *
                                          (2 * nc.search_radius + 1)));

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            cand.clear();
            for (int qy = std::max(0, y - nc.search_radius);
                 qy <= std::min(h - 1, y + nc.search_radius); ++qy) {
                for (int qx = std::max(0, x - nc.search_radius);
                     qx <= std::min(w - 1, x + nc.search_radius); ++qx) {
                    if (qx == x && qy == y) continue;
                    const double weight =
                        std::exp(-patch_dist2(img, x, y, qx, qy) * inv_h2);
                    cand.push_back({qy * w + qx, weight});
                }
            }
            // k best by weight; stable sort keeps raster scan order on ties
            std::stable_sort(cand.begin(), cand.end(),
                             [](const auto& a, const auto& b) { return a.w > b.w; });
            const std::size_t keep =
                std::min(cand.size(), static_cast<std::size_t>(nc.k_best));
            const int p = y * w + x;
            for (std::size_t i = 0; i < keep; ++i) {
                const auto& e = cand[i];
                auto& ap = adj[static_cast<std::size_t>(p)];
                if (std::none_of(ap.begin(), ap.end(),
                                 [&](const auto& x_) { return x_.q == e.q; }))
                    ap.push_back(e);
                auto& aq = adj[static_cast<std::size_t>(e.q)];
                if (std::none_of(aq.begin(), aq.end(),
                                 [&](const auto& x_) { return x_.q == p; }))
                    aq.push_back({p, e.w});
            }
        }
    }

    NonlocalGraph g;
    g.width = w;
    g.height = h;
    g.offsets.resize(n + 1, 0);
    std::size_t total = 0;
    for (std::size_t p = 0; p < n; ++p) {
        std::sort(adj[p].begin(), adj[p].end(),
                  [](const auto& a, const auto& b) { return a.q < b.q; });
        total += adj[p].size();
        g.offsets[p + 1] = static_cast<std::uint32_t>(total);
    }
    g.edges.reserve(total);
    for (std::size_t p = 0; p < n; ++p)
        g.edges.insert(g.edges.end(), adj[p].begin(), adj[p].end());
    return g;
}

void write_graph_stats_csv(const NonlocalGraph& graph, std::ostream& os) {
    os << "stat,value\n";
    os << "mean_degree," << graph.mean_degree() << '\n';
    os << "edge_count," << graph.edges.size() << '\n';
    std::array<std::size_t, 10> hist{};
    for (const auto& e : graph.edges) {
        int bin = static_cast<int>(e.w * 10.0);
        bin = std::clamp(bin, 0, 9);
        ++hist[static_cast<std::size_t>(bin)];
    }
    for (int b = 0; b < 10; ++b)
        os << "w_hist_" << b << ',' << hist[static_cast<std::size_t>(b)] << '\n';
}

NlWeights stencil_nl(const KernelField& field, const NonlocalGraph& graph,
                     const NlMetric& metric, int x, int y, const SolverConfig& cfg) {
    const EdgeMetric G(metric, field);
    const int p = y * graph.width + x;
    NlWeights out;
    out.h.resize(graph.neighbors(p).size());
    out.h_self = nl_weights_into(graph, G, p, cfg, out.h);
    return out;
}

KernelField nltv_step(const KernelField& field, const KernelField& field0,
                      const NonlocalGraph& graph, const NlMetric& metric,
                      const SolverConfig& cfg) {
    return nltv_sweep(field, field0, graph, EdgeMetric(metric, field), cfg);
}

NltvSolve solve_nltv(const Image& noisy, const std::optional<KernelSpec>& k,
                     const SolverConfig& cfg, const NlConfig& nc,
                     SolveDiagnostics* diag, const std::optional<CoupleRule>& gray_rule) {
    cfg.validate();
    nc.validate();
    const int nchan = noisy.channels();
    const bool gray = nchan == 1;

    CoupleRule rule = CoupleRule::gray_constant(1.0);
    if (k && gray) {
        rule = gray_rule.value_or(canonical_gray_couple(*k));
        if (rule.kind != CoupleRule::Kind::gray_constant)
            throw std::invalid_argument("nltv: gray images take a gray-constant couple");
        if (k->is_gaussian() && rule.level != 0.0)
            throw std::invalid_argument("nltv: Gaussian gray couple level must be 0");
        if (!k->is_gaussian() && rule.level <= 0.0)
            throw std::invalid_argument("nltv: polynomial gray couple level must be > 0");
    }

    const NonlocalGraph graph = build_graph(noisy, nc);

    Image current = noisy;
    ClampCounter clamps;
    MinMax initial;
    std::vector<KernelField> fields(static_cast<std::size_t>(nchan));

    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
        const auto t0 = clock_type::now();
        const std::uint64_t warn_before = clamps.kernel_range + clamps.intensity_range;
        double change = 0.0;
        MinMax mm;

        for (int t = 0; t < nchan; ++t) {
            KernelField field, field0;
            if (!k) {
                field = image_channel_field(current, t);
                field0 = image_channel_field(noisy, t);
            } else {
                const CoupleRule chan_rule = gray ? rule : CoupleRule::color_channel(t);
                const Image couple = make_coupled(chan_rule, *k, current);
                field = kernel_field(*k, current, couple);
                field0 = kernel_field(*k, noisy, couple);
            }
            if (iter == 1) {
                initial.absorb(field);
                initial.absorb(field0);
            }

            const NlMetric metric{&current, k};
            KernelField next = nltv_sweep(field, field0, graph, EdgeMetric(metric, field), cfg);
            change = std::max(change, max_abs_diff(next, field));
            mm.absorb(next);

            for (int y = 0; y < current.height(); ++y) {
                for (int x = 0; x < current.width(); ++x) {
                    const double v = next.at(x, y);
                    double intensity;
                    if (!k)
                        intensity = clamp01(v);
                    else if (k->is_gaussian())
                        intensity = reconstruct_gaussian(v, k->delta(), &clamps);
                    else if (gray && rule.level != 1.0)
                        intensity =
                            clamp01(reconstruct_polynomial(v, k->degree(), &clamps) / rule.level);
                    else
                        intensity = reconstruct_polynomial(v, k->degree(), &clamps);
                    current.at(x, y, t) = intensity;
                }
            }
            fields[static_cast<std::size_t>(t)] = std::move(next);
        }

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

Image denoise_nltv(const Image& noisy, const std::optional<KernelSpec>& k,
                   const SolverConfig& cfg, const NlConfig& nc,
                   SolveDiagnostics* diag, const std::optional<CoupleRule>& gray_rule) {
    return clamped(solve_nltv(noisy, k, cfg, nc, diag, gray_rule).image);
}

} // namespace ktv
