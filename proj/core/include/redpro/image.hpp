#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace redpro {

// Single channel, row-major, double precision. Nominal range is [0,255] but
// values are never clamped outside of PNG export: solver iterates must be free
// to leave the range.
struct ImagePlane {
  int height = 0;
  int width = 0;
  std::vector<double> data;

  ImagePlane() = default;
  ImagePlane(int h, int w, double fill = 0.0)
      : height(h), width(w), data(checked_area(h, w), fill) {}

  double& at(int r, int c) { return data[static_cast<size_t>(r) * width + c]; }
  double at(int r, int c) const { return data[static_cast<size_t>(r) * width + c]; }
  size_t size() const { return data.size(); }
  bool same_shape(const ImagePlane& o) const {
    return height == o.height && width == o.width;
  }

 private:
  // Validates before the data member allocates.
  static size_t checked_area(int h, int w) {
    if (h < 0 || w < 0) throw std::invalid_argument("ImagePlane: negative dimensions");
    return static_cast<size_t>(h) * w;
  }
};

struct RgbImage {
  ImagePlane r, g, b;
  int height() const { return r.height; }
  int width() const { return r.width; }
};

struct YCbCrImage {
  ImagePlane y, cb, cr;
};

// BT.601 full-range ("JPEG") conversion. Round trip is exact to well below
// half a quantization level.
YCbCrImage rgb_to_ycbcr(const RgbImage& rgb);
RgbImage ycbcr_to_rgb(const YCbCrImage& ycc);

// Peak signal-to-noise ratio with peak 255. Identical images return
// +infinity; mismatched shapes throw.
double psnr(const ImagePlane& a, const ImagePlane& b);

// --- elementwise plane arithmetic used throughout the solvers ---

void check_same_shape(const ImagePlane& a, const ImagePlane& b, const char* what);

ImagePlane add(const ImagePlane& a, const ImagePlane& b);
ImagePlane sub(const ImagePlane& a, const ImagePlane& b);
ImagePlane scale(const ImagePlane& a, double s);
// a + s*b
ImagePlane axpy(const ImagePlane& a, double s, const ImagePlane& b);
// t*a + (1-t)*b
ImagePlane lerp(const ImagePlane& a, const ImagePlane& b, double t);
double dot(const ImagePlane& a, const ImagePlane& b);
double norm2(const ImagePlane& a);        // Euclidean norm
double norm2_sq(const ImagePlane& a);     // squared Euclidean norm
double max_abs(const ImagePlane& a);
double max_abs_diff(const ImagePlane& a, const ImagePlane& b);
double mean(const ImagePlane& a);
bool all_finite(const ImagePlane& a);
ImagePlane clamp_plane(const ImagePlane& a, double lo, double hi);

// Catmull-Rom bicubic resize (align-centers sampling, mirrored edges).
// Used for chroma upscaling and super-resolution initialization.
ImagePlane resize_bicubic(const ImagePlane& src, int out_height, int out_width);

}  // namespace redpro
