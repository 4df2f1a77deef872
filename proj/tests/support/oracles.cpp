#include "oracles.hpp"

#include <cmath>
#include <vector>

namespace ktv::testing {

namespace {

int mirror(int i, int n) {
    if (i < 0) return -i - 1;
    if (i >= n) return 2 * n - 1 - i;
    return i;
}

} // namespace

Image classical_gtv(const Image& noisy, double p, double lambda, int iters, double eps) {
    const int w = noisy.width(), h = noisy.height(), nc = noisy.channels();
    Image u = noisy;

    // central difference of channel c at (x, y), axis 0 = x, 1 = y
    auto cd = [&](const Image& img, int x, int y, int c, int axis) {
        if (axis == 0)
            return 0.5 * (img.at(mirror(x + 1, w), y, c) - img.at(mirror(x - 1, w), y, c));
        return 0.5 * (img.at(x, mirror(y + 1, h), c) - img.at(x, mirror(y - 1, h), c));
    };

    for (int it = 0; it < iters; ++it) {
        Image next = u;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                // midway diffusivities toward the four neighbors
                const int nx[4] = {mirror(x + 1, w), x, mirror(x - 1, w), x};
                const int ny[4] = {y, mirror(y - 1, h), y, mirror(y + 1, h)};
                double wt[4];
                for (int d = 0; d < 4; ++d) {
                    const bool horiz = d == 0 || d == 2;
                    double mag2 = 0.0;
                    for (int c = 0; c < nc; ++c) {
                        const double axis = u.at(nx[d], ny[d], c) - u.at(x, y, c);
                        const double trans =
                            0.5 * (cd(u, x, y, c, horiz ? 1 : 0) +
                                   cd(u, nx[d], ny[d], c, horiz ? 1 : 0));
                        mag2 += axis * axis + trans * trans;
                    }
                    wt[d] = std::pow(mag2 + eps, 0.5 * (p - 2.0));
                }
                const double denom = wt[0] + wt[1] + wt[2] + wt[3] + lambda;
                for (int c = 0; c < nc; ++c) {
                    double acc = lambda * noisy.at(x, y, c);
                    for (int d = 0; d < 4; ++d) acc += wt[d] * u.at(nx[d], ny[d], c);
                    next.at(x, y, c) = acc / denom;
                }
            }
        }
        u = std::move(next);
    }
    for (double& v : u.data()) v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    return u;
}

} // namespace ktv::testing
