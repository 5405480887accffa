#pragma once

#include <string>

#include "sspnp/image.hpp"

namespace sspnp::io {

// Reads an 8- or 16-bit PNG (grayscale or color; alpha is dropped) or a
// binary PPM/PGM. Values are scaled to [0,1].
Image load_image(const std::string& path);

// Writes 8-bit output chosen by extension: .png, .ppm, or .pgm. Values are
// clamped to [0,1] and quantized, so a save/load round trip is stable to
// 1/255.
void save_image(const Image& img, const std::string& path);

Image resize_bilinear(const Image& img, int height, int width);

}  // namespace sspnp::io
