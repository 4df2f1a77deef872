#pragma once

#include "kerneltv/coupling.hpp"
#include "kerneltv/image.hpp"
#include "kerneltv/kernels.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace ktv {

struct SolverConfig {
    double p = 1.2;        // gradient exponent
    double lambda = 10.0;  // fidelity weight
    int max_iters = 50;
    double eps = 1e-6;     // gradient-magnitude regularizer
    double stop_tol = 0.0; // 0 = run the full budget

    void validate() const;
};

// Low-pass stencil coefficients; hE+hN+hW+hS+hO = 1 by construction.
struct StencilWeights {
    double hE = 0.0, hN = 0.0, hW = 0.0, hS = 0.0, hO = 0.0;
};

enum class Dir { east, north, west, south };

// Everything the midpoint metric needs: the current image (gradients are
// taken in image space) and the kernel whose feature-space metric scales
// them.
struct MetricContext {
    const Image* image = nullptr;
    KernelSpec kernel;
};

// Diffusivity weight at the midway point between (x,y) and its neighbor in
// direction dir: (gxx + gyy + eps)^((p-2)/2), with the along-axis derivative
// one-sided and the transverse derivative the average of the central
// differences at the two endpoints. Boundaries reflect.
double half_point_grad(const MetricContext& ctx, int x, int y, Dir dir,
                       const SolverConfig& cfg);

StencilWeights stencil(const MetricContext& ctx, int x, int y,
                       const SolverConfig& cfg);

// One Gauss-Jacobi sweep: out(O) = sum_R h_R * field(R) + h_O * field0(O),
// where field0 is the kernel field of the degraded input.
KernelField gtv_step(const KernelField& field, const KernelField& field0,
                     const MetricContext& ctx, const SolverConfig& cfg);

struct IterationStats {
    int iter = 0;
    double max_change = 0.0; // max-norm field change in this iteration
    std::uint64_t clamp_warnings = 0;
    double wall_ms = 0.0;
    double field_min = 0.0;
    double field_max = 0.0;
};

struct SolveDiagnostics {
    std::vector<IterationStats> iterations;
    // min/max over (initial field, fidelity anchor) at entry; union over
    // channels for color runs.
    double initial_min = 0.0;
    double initial_max = 0.0;
    ClampCounter clamps;
    int iterations_run = 0;
};

void write_diagnostics_csv(const SolveDiagnostics& diag, std::ostream& os);

enum class ChannelUpdate { sequential, simultaneous };

struct GraySolve {
    Image image;
    KernelField field;
};

struct ColorSolve {
    Image image;
    std::array<KernelField, 3> fields;
};

// Kernel GTV on a 1-channel image with a constant coupled image. Gaussian
// kernels require level 0 and polynomial kernels level > 0 so that the
// kernel value is invertible back to an intensity.
GraySolve solve_gray(const Image& noisy, const KernelSpec& k, const CoupleRule& rule,
                     const SolverConfig& cfg, SolveDiagnostics* diag = nullptr);

// Kernel GTV on a 3-channel image with the per-channel couples; channels
// update in order R, G, B, each seeing earlier channels' fresh values
// (simultaneous mode snapshots all three instead).
ColorSolve solve_color(const Image& noisy, const KernelSpec& k, const SolverConfig& cfg,
                       SolveDiagnostics* diag = nullptr,
                       ChannelUpdate order = ChannelUpdate::sequential);

Image denoise_gray(const Image& noisy, const KernelSpec& k, const CoupleRule& rule,
                   const SolverConfig& cfg, SolveDiagnostics* diag = nullptr);

Image denoise_color(const Image& noisy, const KernelSpec& k, const SolverConfig& cfg,
                    SolveDiagnostics* diag = nullptr,
                    ChannelUpdate order = ChannelUpdate::sequential);

} // namespace ktv
