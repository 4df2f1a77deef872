#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace ktv {

// Per-pixel value tuple: one entry per channel (1 = gray, 3 = RGB).
// Also used for per-channel derivative tuples, which carry no range limits.
struct PixelVec {
    std::array<double, 3> v{0.0, 0.0, 0.0};
    int channels = 1;

    PixelVec() = default;
    explicit PixelVec(double g) : v{g, 0.0, 0.0}, channels(1) {}
    PixelVec(double r, double g, double b) : v{r, g, b}, channels(3) {}

    double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
};

// Row-major, channel-interleaved intensity buffer. Intensities are
// normalized to [0,1] at API boundaries (byte import/export, reconstruction);
// solver intermediates may transiently leave that range. Coordinates are
// (x = column, y = row).
class Image {
public:
    Image() = default;
    Image(int width, int height, int channels, double fill = 0.0);

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }
    std::size_t size() const { return data_.size(); }

    double at(int x, int y, int c = 0) const {
        return data_[index(x, y, c)];
    }
    double& at(int x, int y, int c = 0) {
        return data_[index(x, y, c)];
    }
    PixelVec pixel(int x, int y) const;

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    // Gray view of one channel (copies the values).
    Image channel_view(int c) const;
    // Overwrites channel c from a gray image of matching size.
    void set_channel(int c, const Image& gray);

    bool same_shape(const Image& other) const {
        return width_ == other.width_ && height_ == other.height_ &&
               channels_ == other.channels_;
    }

private:
    std::size_t index(int x, int y, int c) const {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                static_cast<std::size_t>(x)) * static_cast<std::size_t>(channels_) +
               static_cast<std::size_t>(c);
    }

    int width_ = 0;
    int height_ = 0;
    int channels_ = 1;
    std::vector<double> data_;
};

// Byte import/export. from_u8 maps b -> b/255 exactly; to_u8 rounds and
// clamps so that to_u8(from_u8(x)) == x for every byte value.
Image from_u8(const std::vector<std::uint8_t>& raw, int width, int height,
              int channels);
std::vector<std::uint8_t> to_u8(const Image& img);

double clamp01(double v);
// Clamps every stored intensity into [0,1].
Image clamped(const Image& img);

// Mirrors an index into [0, n): -1 -> 0, n -> n-1 (half-sample reflection).
inline int reflect(int i, int n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - 1 - i;
    return i;
}

} // namespace ktv
