#pragma once

#include "kerneltv/image.hpp"

namespace ktv::testing {

// Independent reference solver for the classical generalized-TV fixed point
// (image-space low-pass form, lagged diffusivity, Jacobi sweeps with
// reflective boundaries). Written from scratch against the continuous
// equations so it can serve as an oracle for the kernel solver's
// degree-1 reduction. Channels update simultaneously from one snapshot.
Image classical_gtv(const Image& noisy, double p, double lambda, int iters, double eps);

} // namespace ktv::testing
