#include "kerneltv/coupling.hpp"

#include "kerneltv/noise.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace ktv;

TEST_CASE("color couples follow the channel recipes") {
    Image img(1, 1, 3);
    img.at(0, 0, 0) = 0.3;
    img.at(0, 0, 1) = 0.5;
    img.at(0, 0, 2) = 0.7;

    SUBCASE("gaussian zeroes the target channel and keeps the rest") {
        const Image b = make_coupled(CoupleRule::color_channel(0),
                                     KernelSpec::gaussian(0.5), img);
        CHECK(b.at(0, 0, 0) == 0.0);
        CHECK(b.at(0, 0, 1) == 0.5);
        CHECK(b.at(0, 0, 2) == 0.7);
    }
    SUBCASE("polynomial is one-hot on the target channel") {
        const Image b = make_coupled(CoupleRule::color_channel(0),
                                     KernelSpec::polynomial(1.5), img);
        CHECK(b.at(0, 0, 0) == 1.0);
        CHECK(b.at(0, 0, 1) == 0.0);
        CHECK(b.at(0, 0, 2) == 0.0);
    }
    SUBCASE("rule and channel count must match") {
        CHECK_THROWS_AS(make_coupled(CoupleRule::gray_constant(1.0),
                                     KernelSpec::polynomial(1.0), img),
                        std::invalid_argument);
        CHECK_THROWS_AS(make_coupled(CoupleRule::color_channel(0),
                                     KernelSpec::polynomial(1.0), Image(2, 2, 1)),
                        std::invalid_argument);
    }
}

TEST_CASE("gray couples are constant at the requested level") {
    const Image img(3, 2, 1, 0.4);
    const Image b = make_coupled(CoupleRule::gray_constant(0.25),
                                 KernelSpec::polynomial(1.0), img);
    for (double v : b.data()) CHECK(v == 0.25);
    CHECK(canonical_gray_couple(KernelSpec::gaussian(0.5)).level == 0.0);
    CHECK(canonical_gray_couple(KernelSpec::polynomial(1.2)).level == 1.0);
    CHECK_THROWS_AS(CoupleRule::gray_constant(1.5), std::invalid_argument);
    CHECK_THROWS_AS(CoupleRule::color_channel(3), std::invalid_argument);
}

TEST_CASE("re-coupling preserves the non-target channels exactly") {
    Image img(4, 4, 3);
    for (std::size_t i = 0; i < img.size(); ++i)
        img.data()[i] = counter_uniform(31, i);
    const KernelSpec k = KernelSpec::gaussian(0.5);
    Image first = make_coupled(CoupleRule::color_channel(1), k, img);
    // simulate the channel-1 update, then re-couple for channel 2
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) img.at(x, y, 1) = 0.123;
    const Image second = make_coupled(CoupleRule::color_channel(2), k, img);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) {
            CHECK(second.at(x, y, 0) == img.at(x, y, 0));
            CHECK(second.at(x, y, 1) == 0.123);
            CHECK(second.at(x, y, 2) == 0.0);
        }
}

TEST_CASE("kernel_field evaluates per pixel") {
    Image img(2, 1, 3);
    img.at(0, 0, 0) = 0.6;
    img.at(0, 0, 1) = 0.2;
    img.at(0, 0, 2) = 0.9;
    img.at(1, 0, 0) = 0.5;
    img.at(1, 0, 1) = 0.8;
    img.at(1, 0, 2) = 0.1;

    SUBCASE("identical operands give the all-ones field") {
        const KernelField f = kernel_field(KernelSpec::gaussian(0.5), img, img);
        CHECK(f.at(0, 0) == 1.0);
        CHECK(f.at(1, 0) == 1.0);
    }
    SUBCASE("gaussian channel couple collapses to the target channel") {
        const KernelSpec k = KernelSpec::gaussian(0.5);
        const Image b = make_coupled(CoupleRule::color_channel(0), k, img);
        const KernelField f = kernel_field(k, img, b);
        CHECK(f.at(0, 0) == doctest::Approx(0.69767632607103103).epsilon(1e-14));
    }
    SUBCASE("polynomial one-hot couple collapses to a power of the target") {
        const KernelSpec k = KernelSpec::polynomial(1.1);
        const Image b = make_coupled(CoupleRule::color_channel(0), k, img);
        const KernelField f = kernel_field(k, img, b);
        CHECK(f.at(1, 0) == doctest::Approx(0.46651649576840371).epsilon(1e-14));
    }
    SUBCASE("shape mismatch is rejected") {
        CHECK_THROWS_AS(kernel_field(KernelSpec::polynomial(1.0), img, Image(3, 1, 3)),
                        std::invalid_argument);
    }
}

TEST_CASE("gaussian reconstruction") {
    CHECK(reconstruct_gaussian(1.0, 0.5) == 0.0);
    CHECK(reconstruct_gaussian(std::exp(-0.36), 0.5) ==
          doctest::Approx(0.6).epsilon(1e-13));
    CHECK(reconstruct_gaussian(1e-9, 0.5) == 1.0); // intensity clamps at 1
    CHECK_THROWS_AS(reconstruct_gaussian(0.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(reconstruct_gaussian(-0.5, 0.5), std::domain_error);

    ClampCounter warn;
    CHECK(reconstruct_gaussian(1.0 + 1e-9, 0.5, &warn) == 0.0);
    CHECK(warn.kernel_range == 1);
    reconstruct_gaussian(1e-9, 0.5, &warn);
    CHECK(warn.intensity_range == 1);
}

TEST_CASE("polynomial reconstruction") {
    CHECK(reconstruct_polynomial(1.0, 1.7) == 1.0);
    CHECK(reconstruct_polynomial(0.46651649576840371, 1.1) ==
          doctest::Approx(0.5).epsilon(1e-13));
    ClampCounter warn;
    CHECK(reconstruct_polynomial(-0.001, 1.1, &warn) == 0.0);
    CHECK(warn.kernel_range == 1);
    // degree 1 is the identity on kernel values
    CHECK(reconstruct_polynomial(0.37, 1.0) == 0.37);
}

TEST_CASE("lift and reconstruction round-trip to machine precision") {
    // tiny intensities are excluded for the gaussian: k rounds to 1 there
    // and the inverse loses the value
    std::uint64_t ctr = 0;
    for (int n = 0; n < 10000; ++n) {
        const double t = n < 2 ? static_cast<double>(n) // endpoints 0 and 1
                               : 1e-3 + (1.0 - 1e-3) * counter_uniform(91, ctr++);
        {
            const double delta = 0.1 + 0.9 * counter_uniform(92, ctr++);
            const double v = std::exp(-t * t / (2.0 * delta));
            CHECK(std::abs(reconstruct_gaussian(v, delta) - t) <= 1e-12);
        }
        {
            const double d = 1.0 + counter_uniform(93, ctr++);
            const double v = std::pow(t, d);
            CHECK(std::abs(reconstruct_polynomial(v, d) - t) <= 1e-12);
        }
    }
}

TEST_CASE("a constant couple has zero spatial kernel gradient") {
    // <phi(I^a), d_x phi(I^b)> vanishes for constant I^b: the coupled image
    // contributes no spatial derivative
    for (const auto& k : {KernelSpec::gaussian(0.5), KernelSpec::polynomial(1.3)}) {
        GradSample s;
        s.a = PixelVec(1.0);  // the constant couple plays the "a" role here
        s.b = PixelVec(0.62); // image pixel
        s.dax = PixelVec(0.0); // constant image: zero gradient
        s.day = PixelVec(0.0);
        CHECK(grad_k_x(k, s) == 0.0);
        CHECK(grad_k_y(k, s) == 0.0);
    }
}
