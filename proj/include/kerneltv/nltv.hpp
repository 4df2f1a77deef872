#pragma once

#include "kerneltv/coupling.hpp"
#include "kerneltv/image.hpp"
#include "kerneltv/kernels.hpp"
#include "kerneltv/solver.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace ktv {

struct NlConfig {
    int search_radius = 2; // 5x5 searching window
    int k_best = 10;       // neighbors kept per pixel before symmetrization
    double h_sim = 0.1;    // similarity bandwidth, normalized intensity

    void validate() const;
};

// Patch-similarity graph: per pixel, the k-best candidates in the searching
// window, symmetrized by union (so a pixel may end up with more than k_best
// neighbors). Weights are w(p,q) = exp(-||patch(p)-patch(q)||^2 / h_sim^2)
// with the 5-pixel cross patch, summed over channels.
struct NonlocalGraph {
    struct Edge {
        int q = 0; // flat pixel index, y*width + x
        double w = 0.0;
    };

    int width = 0;
    int height = 0;
    std::vector<std::uint32_t> offsets; // npixels + 1
    std::vector<Edge> edges;

    std::span<const Edge> neighbors(int p) const {
        return {edges.data() + offsets[static_cast<std::size_t>(p)],
                edges.data() + offsets[static_cast<std::size_t>(p) + 1]};
    }
    double mean_degree() const;
};

NonlocalGraph build_graph(const Image& img, const NlConfig& nc);

// mean degree, edge count and a 10-bin weight histogram as `stat,value` rows
void write_graph_stats_csv(const NonlocalGraph& graph, std::ostream& os);

// The diffusivity context of a nonlocal sweep: the current image supplies
// the per-edge differences whose feature-space magnitude (via metric_inner)
// modulates the graph weights; no kernel means the plain path, whose
// magnitude is the raw squared field difference. Either way the magnitude
// at p is |grad_w phi|^2 = sum_q w(p,q) * G(p,q). On gray images the
// polynomial degree-1 kernel path reduces exactly to the plain one; on
// color images the kernel metric couples the channels per edge.
struct NlMetric {
    const Image* image = nullptr;
    std::optional<KernelSpec> kernel;
};

// Normalized weights over the pixel's graph neighbors plus the self (data)
// weight; h is aligned with graph.neighbors(p).
struct NlWeights {
    std::vector<double> h;
    double h_self = 0.0;
};

NlWeights stencil_nl(const KernelField& field, const NonlocalGraph& graph,
                     const NlMetric& metric, int x, int y, const SolverConfig& cfg);

// One nonlocal Jacobi sweep: out(p) = sum_q h_q field(q) + h_self field0(p).
KernelField nltv_step(const KernelField& field, const KernelField& field0,
                      const NonlocalGraph& graph, const NlMetric& metric,
                      const SolverConfig& cfg);

// Nonlocal TV. Without a kernel the field is the intensity itself (plain
// NLTV); with one, the same coupled-image lift as the local solver. The
// graph is built once from the noisy image and kept fixed. gray_rule
// overrides the constant couple level for 1-channel kernel runs (defaults
// to the canonical level).
Image denoise_nltv(const Image& noisy, const std::optional<KernelSpec>& k,
                   const SolverConfig& cfg, const NlConfig& nc,
                   SolveDiagnostics* diag = nullptr,
                   const std::optional<CoupleRule>& gray_rule = std::nullopt);

// Same solve but returning the final kernel fields (one per channel).
struct NltvSolve {
    Image image;
    std::vector<KernelField> fields;
};
NltvSolve solve_nltv(const Image& noisy, const std::optional<KernelSpec>& k,
                     const SolverConfig& cfg, const NlConfig& nc,
                     SolveDiagnostics* diag = nullptr,
                     const std::optional<CoupleRule>& gray_rule = std::nullopt);

} // namespace ktv
