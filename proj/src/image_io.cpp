#include "kerneltv/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

namespace ktv {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw std::runtime_error(path + ": " + why);
}

// Skips PNM whitespace and '#' comment lines.
void skip_pnm_space(std::istream& in) {
    int c = in.peek();
    while (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '#') {
        if (c == '#') {
            std::string dummy;
            std::getline(in, dummy);
        } else {
            in.get();
        }
        c = in.peek();
    }
}

int read_pnm_int(std::istream& in, const std::string& path) {
    skip_pnm_space(in);
    int v = 0;
    if (!(in >> v)) fail(path, "truncated or malformed PNM header");
    return v;
}

Image load_pnm(std::ifstream& in, const std::string& path, int channels) {
    const int width = read_pnm_int(in, path);
    const int height = read_pnm_int(in, path);
    const int maxval = read_pnm_int(in, path);
    if (width <= 0 || height <= 0) fail(path, "bad PNM dimensions");
    if (maxval != 255) fail(path, "unsupported PNM maxval " + std::to_string(maxval));
    in.get(); // single whitespace byte before raster
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(width) *
                                  static_cast<std::size_t>(height) *
                                  static_cast<std::size_t>(channels));
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size()))
        fail(path, "truncated PNM raster");
    return from_u8(raw, width, height, channels);
}

void save_pnm(const std::string& path, const Image& img, int channels) {
    if (img.channels() != channels)
        fail(path, channels == 1 ? "PGM requires a 1-channel image"
                                 : "PPM requires a 3-channel image");
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open for writing");
    out << (channels == 1 ? "P5" : "P6") << '\n'
        << img.width() << ' ' << img.height() << '\n'
        << "255\n";
    const std::vector<std::uint8_t> raw = to_u8(img);
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size()));
    if (!out) fail(path, "write failed");
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Image load_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) fail(path, "cannot open");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail(path, "libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        fail(path, "libpng init failed");
    }
    std::vector<std::uint8_t> raw;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "libpng decode error");
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int depth = png_get_bit_depth(png, info);
    const int color = png_get_color_type(png, info);
    if (depth != 8 || (color != PNG_COLOR_TYPE_GRAY && color != PNG_COLOR_TYPE_RGB)) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "only 8-bit gray or RGB PNG is supported");
    }
    const int channels = color == PNG_COLOR_TYPE_GRAY ? 1 : 3;
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    raw.resize(static_cast<std::size_t>(width) * height * static_cast<std::size_t>(channels));
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y)
        rows[y] = raw.data() + static_cast<std::size_t>(y) * width *
                                   static_cast<std::size_t>(channels);
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return from_u8(raw, static_cast<int>(width), static_cast<int>(height), channels);
}

void save_png(const std::string& path, const Image& img) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) fail(path, "cannot open for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail(path, "libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        fail(path, "libpng init failed");
    }
    std::vector<std::uint8_t> raw = to_u8(img);
    std::vector<png_bytep> rows(static_cast<std::size_t>(img.height()));
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail(path, "libpng encode error");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()),
                 static_cast<png_uint_32>(img.height()), 8,
                 img.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    for (int y = 0; y < img.height(); ++y)
        rows[static_cast<std::size_t>(y)] =
            raw.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width()) *
                             static_cast<std::size_t>(img.channels());
    png_set_rows(png, info, rows.data());
    png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
    png_destroy_write_struct(&png, &info);
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace

Image load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open");
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (in.gcount() != 2) fail(path, "file too short");
    if (magic[0] == 'P' && magic[1] == '5') return load_pnm(in, path, 1);
    if (magic[0] == 'P' && magic[1] == '6') return load_pnm(in, path, 3);
    if (magic[0] == '\x89' && magic[1] == 'P') {
        in.close();
        return load_png(path);
    }
    fail(path, std::string("unsupported format (magic '") + magic[0] + magic[1] + "')");
}

void save_image(const std::string& path, const Image& img) {
    if (ends_with(path, ".pgm")) {
        save_pnm(path, img, 1);
    } else if (ends_with(path, ".ppm")) {
        save_pnm(path, img, 3);
    } else if (ends_with(path, ".png")) {
        save_png(path, img);
    } else {
        fail(path, "unsupported output extension (use .pgm, .ppm or .png)");
    }
}

} // namespace ktv
