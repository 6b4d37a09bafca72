#pragma once

#include <string>

#include "redpro/image.hpp"

namespace redpro {

// 8-bit PNG read. Grayscale files load with r = g = b; palette images are
// expanded; alpha channels are dropped. 16-bit files are rejected.
RgbImage load_png(const std::string& path);

// 8-bit RGB PNG write. Values are clamped to [0,255] and rounded at export
// only; in-memory planes are untouched.
void save_png(const RgbImage& img, const std::string& path);

// Grayscale convenience writer for single planes (same clamp/round rule).
void save_png(const ImagePlane& plane, const std::string& path);

}  // namespace redpro
