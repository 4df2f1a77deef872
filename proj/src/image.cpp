#include "kerneltv/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ktv {

Image::Image(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("Image: non-positive dimensions");
    if (channels != 1 && channels != 3)
        throw std::invalid_argument("Image: channels must be 1 or 3");
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
                     static_cast<std::size_t>(channels),
                 fill);
}

PixelVec Image::pixel(int x, int y) const {
    PixelVec p;
    p.channels = channels_;
    for (int c = 0; c < channels_; ++c) p.v[static_cast<std::size_t>(c)] = at(x, y, c);
    return p;
}

Image Image::channel_view(int c) const {
    if (c < 0 || c >= channels_)
        throw std::out_of_range("channel_view: channel index " + std::to_string(c) +
                                " out of range for " + std::to_string(channels_) +
                                "-channel image");
    Image out(width_, height_, 1);
    for (int y = 0; y < height_; ++y)
        for (int x = 0; x < width_; ++x) out.at(x, y) = at(x, y, c);
    return out;
}

void Image::set_channel(int c, const Image& gray) {
    if (c < 0 || c >= channels_)
        throw std::out_of_range("set_channel: channel index out of range");
    if (gray.width() != width_ || gray.height() != height_ || gray.channels() != 1)
        throw std::invalid_argument("set_channel: shape mismatch");
    for (int y = 0; y < height_; ++y)
        for (int x = 0; x < width_; ++x) at(x, y, c) = gray.at(x, y);
}

Image from_u8(const std::vector<std::uint8_t>& raw, int width, int height,
              int channels) {
    Image img(width, height, channels);
    if (raw.size() != img.size())
        throw std::invalid_argument("from_u8: buffer holds " + std::to_string(raw.size()) +
                                    " bytes, expected " + std::to_string(img.size()));
    for (std::size_t i = 0; i < raw.size(); ++i)
        img.data()[i] = static_cast<double>(raw[i]) / 255.0;
    return img;
}

std::vector<std::uint8_t> to_u8(const Image& img) {
    std::vector<std::uint8_t> out(img.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        long v = std::lround(img.data()[i] * 255.0);
        out[i] = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
    }
    return out;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

Image clamped(const Image& img) {
    Image out = img;
    for (double& v : out.data()) v = clamp01(v);
    return out;
}

} // namespace ktv
