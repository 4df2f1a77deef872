#pragma once

#include "kerneltv/image.hpp"

#include <string>

namespace ktv {

// Loads PGM (P5), PPM (P6) or PNG (8-bit gray/RGB); the format is sniffed
// from the file's magic bytes. PNM files must be binary with maxval 255.
Image load_image(const std::string& path);

// Saves by extension: .pgm (1 channel), .ppm (3 channels), .png (either).
// Intensities are clamped and quantized to 8 bits on the way out.
void save_image(const std::string& path, const Image& img);

} // namespace ktv
