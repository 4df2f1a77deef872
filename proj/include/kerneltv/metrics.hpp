#pragma once

#include "kerneltv/image.hpp"
#include "kerneltv/kernels.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace ktv {

// 10*log10(1/MSE) on normalized intensities (MAX = 1); +inf for identical
// images.
double psnr(const Image& reference, const Image& test);

// Graph-surface area sum over pixels of sqrt(det G) with
// G = [[1+gxx, gxy], [gxy, 1+gyy]]. Without a kernel the metric comes from
// raw image gradients; with one, from the feature-space inner products.
// Central differences, reflective boundaries, unit pixel spacing.
double surface_area(const Image& img, const KernelSpec* k = nullptr);

struct AreaReport {
    double area_original = 0.0; // A(X)
    double area_mapped = 0.0;   // A(X-bar)
    double ratio = 0.0;         // r = A(X-bar) / A(X)
};

AreaReport area_ratio(const Image& img, const KernelSpec& k);

struct SweepPoint {
    double param = 0.0;
    AreaReport report;
};

struct ParamSelection {
    double chosen = 0.0;
    std::vector<SweepPoint> sweep;
};

// Picks the grid parameter whose area ratio is closest to 1 (ties go to the
// smaller parameter) and returns the full sweep for reporting.
ParamSelection select_kernel_param(const Image& img, KernelFamily family,
                                   std::span<const double> grid);

// Two-column `id,score` CSV (an exact `id,score` header line is skipped).
// Malformed rows raise with the line number. Duplicate ids keep the last
// value.
std::map<std::string, double> external_scores(const std::string& path);

} // namespace ktv
