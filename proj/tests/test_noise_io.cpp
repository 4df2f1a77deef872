#include "kerneltv/image_io.hpp"
#include "kerneltv/noise.hpp"

#include "support/synthetic.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

using namespace ktv;

namespace {

namespace fs = std::filesystem;

std::string temp_path(const std::string& name) {
    return (fs::temp_directory_path() / name).string();
}

void write_bytes(const std::string& path, const std::string& bytes) {
    std::ofstream os(path, std::ios::binary);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("noise respects its trivial cases") {
    const Image img = testing::random_image(8, 8, 1, 40);
    const Image same = add_multiplicative_gaussian(img, {0.0, 123});
    CHECK(same.data() == img.data());

    const Image black(8, 8, 3, 0.0);
    const Image still_black = add_multiplicative_gaussian(black, {80.0, 9});
    for (double v : still_black.data()) CHECK(v == 0.0);

    CHECK_THROWS_AS(add_multiplicative_gaussian(img, {-1.0, 0}), std::invalid_argument);
}

TEST_CASE("noise golden vector stays pinned") {
    Image img(4, 1, 1);
    img.at(0, 0) = 0.25;
    img.at(1, 0) = 0.5;
    img.at(2, 0) = 0.75;
    img.at(3, 0) = 1.0;
    const Image noisy = add_multiplicative_gaussian(img, {20.0, 7});
    const double expect[4] = {0.24710650864189332, 0.58310826098677149,
                              0.78224636721547292, 1.0};
    for (int x = 0; x < 4; ++x) CHECK(noisy.at(x, 0) == expect[x]);
    const auto bytes = to_u8(noisy);
    const std::uint8_t expect_u8[4] = {63, 149, 199, 255};
    for (int x = 0; x < 4; ++x) CHECK(bytes[static_cast<std::size_t>(x)] == expect_u8[x]);
}

TEST_CASE("noise is deterministic in the seed") {
    const Image img = testing::random_image(16, 16, 3, 41);
    const Image a = add_multiplicative_gaussian(img, {20.0, 99});
    const Image b = add_multiplicative_gaussian(img, {20.0, 99});
    CHECK(a.data() == b.data());
    const Image c = add_multiplicative_gaussian(img, {20.0, 100});
    CHECK(a.data() != c.data());
}

TEST_CASE("noise moments match the requested deviation") {
    const int n = 1000 * 1000;
    const Image half(1000, 1000, 1, 0.5);
    const Image noisy = add_multiplicative_gaussian(half, {20.0, 2024});
    double mean = 0.0;
    for (double v : noisy.data()) mean += v / 0.5 - 1.0;
    mean /= n;
    double var = 0.0;
    for (double v : noisy.data()) {
        const double d = v / 0.5 - 1.0 - mean;
        var += d * d;
    }
    var /= n - 1;
    const double target = 20.0 / 255.0;
    CHECK(std::abs(std::sqrt(var) - target) <= 0.02 * target);
    CHECK(std::abs(mean) <= 3.0 * target / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("counter generators are well behaved") {
    double mean = 0.0, var = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) mean += counter_gaussian(5, static_cast<std::uint64_t>(i));
    mean /= n;
    for (int i = 0; i < n; ++i) {
        const double d = counter_gaussian(5, static_cast<std::uint64_t>(i)) - mean;
        var += d * d;
    }
    var /= n - 1;
    CHECK(std::abs(mean) <= 0.01);
    CHECK(std::abs(var - 1.0) <= 0.02);
    for (int i = 0; i < 1000; ++i) {
        const double u = counter_uniform(6, static_cast<std::uint64_t>(i));
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("pgm round-trips") {
    const Image img = testing::random_image(13, 9, 1, 50);
    const auto path = temp_path("ktv_io_test.pgm");
    save_image(path, img);
    const Image back = load_image(path);
    CHECK(back.channels() == 1);
    CHECK(to_u8(back) == to_u8(img));
    // saving what was loaded reproduces the file byte for byte
    const auto path2 = temp_path("ktv_io_test2.pgm");
    save_image(path2, back);
    CHECK(read_bytes(path) == read_bytes(path2));
}

TEST_CASE("ppm and png round-trips") {
    const Image img = testing::random_image(12, 10, 3, 51);
    for (const char* name : {"ktv_io_test.ppm", "ktv_io_test.png"}) {
        const auto path = temp_path(name);
        save_image(path, img);
        const Image back = load_image(path);
        CHECK(back.channels() == 3);
        CHECK(to_u8(back) == to_u8(img));
    }
    const Image gray = testing::random_image(5, 6, 1, 52);
    const auto gpath = temp_path("ktv_io_gray.png");
    save_image(gpath, gray);
    CHECK(to_u8(load_image(gpath)) == to_u8(gray));
}

TEST_CASE("pnm header parsing") {
    SUBCASE("comments and whitespace are tolerated") {
        const auto path = temp_path("ktv_hdr.pgm");
        write_bytes(path, std::string("P5 # comment\n# another\n  2\t2\n255\n") +
                              std::string("\x10\x20\x30\x40", 4));
        const Image img = load_image(path);
        CHECK(img.width() == 2);
        CHECK(img.height() == 2);
        CHECK(img.channels() == 1);
        CHECK(to_u8(img)[0] == 0x10);
    }
    SUBCASE("unsupported magic") {
        const auto path = temp_path("ktv_p4.pbm");
        write_bytes(path, "P4\n2 2\n\xff");
        CHECK_THROWS_WITH_AS(load_image(path), doctest::Contains("unsupported"),
                             std::runtime_error);
    }
    SUBCASE("unsupported maxval") {
        const auto path = temp_path("ktv_maxval.pgm");
        write_bytes(path, "P5\n1 1\n65535\n\x01\x01");
        CHECK_THROWS_WITH_AS(load_image(path), doctest::Contains("maxval"),
                             std::runtime_error);
    }
    SUBCASE("truncated raster") {
        const auto path = temp_path("ktv_short.pgm");
        write_bytes(path, "P5\n4 4\n255\nab");
        CHECK_THROWS_WITH_AS(load_image(path), doctest::Contains("truncated"),
                             std::runtime_error);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_image("/nonexistent/image.pgm"), std::runtime_error);
    }
}

TEST_CASE("save dispatch checks extension and channels") {
    const Image gray(2, 2, 1, 0.5);
    const Image color(2, 2, 3, 0.5);
    CHECK_THROWS_AS(save_image(temp_path("x.ppm"), gray), std::runtime_error);
    CHECK_THROWS_AS(save_image(temp_path("x.pgm"), color), std::runtime_error);
    CHECK_THROWS_AS(save_image(temp_path("x.bmp"), gray), std::runtime_error);
}
