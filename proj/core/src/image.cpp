#include "redpro/image.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace redpro {

void check_same_shape(const ImagePlane& a, const ImagePlane& b, const char* what) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch (" +
                                std::to_string(a.height) + "x" + std::to_string(a.width) +
                                " vs " + std::to_string(b.height) + "x" +
                                std::to_string(b.width) + ")");
  }
}

YCbCrImage rgb_to_ycbcr(const RgbImage& rgb) {
  check_same_shape(rgb.r, rgb.g, "rgb_to_ycbcr");
  check_same_shape(rgb.r, rgb.b, "rgb_to_ycbcr");
  const int h = rgb.height(), w = rgb.width();
  YCbCrImage out{ImagePlane(h, w), ImagePlane(h, w), ImagePlane(h, w)};
  for (size_t i = 0; i < rgb.r.size(); ++i) {
    const double r = rgb.r.data[i], g = rgb.g.data[i], b = rgb.b.data[i];
    const double y = 0.299 * r + 0.587 * g + 0.114 * b;
    out.y.data[i] = y;
    out.cb.data[i] = 128.0 - 0.168735892 * r - 0.331264108 * g + 0.5 * b;
    out.cr.data[i] = 128.0 + 0.5 * r - 0.418687589 * g - 0.081312411 * b;
  }
  return out;
}

RgbImage ycbcr_to_rgb(const YCbCrImage& ycc) {
  check_same_shape(ycc.y, ycc.cb, "ycbcr_to_rgb");
  check_same_shape(ycc.y, ycc.cr, "ycbcr_to_rgb");
  const int h = ycc.y.height, w = ycc.y.width;
  RgbImage out{ImagePlane(h, w), ImagePlane(h, w), ImagePlane(h, w)};
  for (size_t i = 0; i < ycc.y.size(); ++i) {
    const double y = ycc.y.data[i];
    const double cb = ycc.cb.data[i] - 128.0;
    const double cr = ycc.cr.data[i] - 128.0;
    out.r.data[i] = y + 1.402 * cr;
    out.g.data[i] = y - 0.344136286 * cb - 0.714136286 * cr;
    out.b.data[i] = y + 1.772 * cb;
  }
  return out;
}

double psnr(const ImagePlane& a, const ImagePlane& b) {
  check_same_shape(a, b, "psnr");
  if (a.size() == 0) throw std::invalid_argument("psnr: empty image");
  double mse = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    mse += d * d;
  }
  mse /= static_cast<double>(a.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

ImagePlane add(const ImagePlane& a, const ImagePlane& b) {
  check_same_shape(a, b, "add");
  ImagePlane out(a.height, a.width);
  for (size_t i = 0; i < a.size(); ++i) out.data[i] = a.data[i] + b.data[i];
  return out;
}

ImagePlane sub(const ImagePlane& a, const ImagePlane& b) {
  check_same_shape(a, b, "sub");
  ImagePlane out(a.height, a.width);
  for (size_t i = 0; i < a.size(); ++i) out.data[i] = a.data[i] - b.data[i];
  return out;
}

ImagePlane scale(const ImagePlane& a, double s) {
  ImagePlane out(a.height, a.width);
  for (size_t i = 0; i < a.size(); ++i) out.data[i] = s * a.data[i];
  return out;
}

ImagePlane axpy(const ImagePlane& a, double s, const ImagePlane& b) {
  check_same_shape(a, b, "axpy");
  ImagePlane out(a.height, a.width);
  for (size_t i = 0; i < a.size(); ++i) out.data[i] = a.data[i] + s * b.data[i];
  return out;
}

ImagePlane lerp(const ImagePlane& a, const ImagePlane& b, double t) {
  check_same_shape(a, b, "lerp");
  ImagePlane out(a.height, a.width);
  for (size_t i = 0; i < a.size(); ++i) out.data[i] = t * a.data[i] + (1.0 - t) * b.data[i];
  return out;
}

double dot(const ImagePlane& a, const ImagePlane& b) {
  check_same_shape(a, b, "dot");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a.data[i] * b.data[i];
  return s;
}

double norm2_sq(const ImagePlane& a) {
  double s = 0.0;
  for (double v : a.data) s += v * v;
  return s;
}

double norm2(const ImagePlane& a) { return std::sqrt(norm2_sq(a)); }

double max_abs(const ImagePlane& a) {
  double m = 0.0;
  for (double v : a.data) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const ImagePlane& a, const ImagePlane& b) {
  check_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

double mean(const ImagePlane& a) {
  if (a.size() == 0) return 0.0;
  double s = 0.0;
  for (double v : a.data) s += v;
  return s / static_cast<double>(a.size());
}

bool all_finite(const ImagePlane& a) {
  for (double v : a.data)
    if (!std::isfinite(v)) return false;
  return true;
}

ImagePlane clamp_plane(const ImagePlane& a, double lo, double hi) {
  ImagePlane out(a.height, a.width);
  for (size_t i = 0; i < a.size(); ++i) out.data[i] = std::clamp(a.data[i], lo, hi);
  return out;
}

namespace {

// Catmull-Rom kernel (cubic convolution with a = -0.5).
double cubic_weight(double t) {
  t = std::abs(t);
  if (t < 1.0) return 1.5 * t * t * t - 2.5 * t * t + 1.0;
  if (t < 2.0) return -0.5 * t * t * t + 2.5 * t * t - 4.0 * t + 2.0;
  return 0.0;
}

int mirror_index(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - 1 - i;
  }
  return i;
}

}  // namespace

ImagePlane resize_bicubic(const ImagePlane& src, int out_height, int out_width) {
  if (src.height <= 0 || src.width <= 0)
    throw std::invalid_argument("resize_bicubic: empty source");
  if (out_height <= 0 || out_width <= 0)
    throw std::invalid_argument("resize_bicubic: bad target size");
  const double sy = static_cast<double>(src.height) / out_height;
  const double sx = static_cast<double>(src.width) / out_width;
  ImagePlane out(out_height, out_width);
  for (int r = 0; r < out_height; ++r) {
    const double fy = (r + 0.5) * sy - 0.5;
    const int y0 = static_cast<int>(std::floor(fy));
    double wy[4];
    for (int t = 0; t < 4; ++t) wy[t] = cubic_weight(fy - (y0 - 1 + t));
    for (int c = 0; c < out_width; ++c) {
      const double fx = (c + 0.5) * sx - 0.5;
      const int x0 = static_cast<int>(std::floor(fx));
      double wx[4];
      for (int t = 0; t < 4; ++t) wx[t] = cubic_weight(fx - (x0 - 1 + t));
      double acc = 0.0;
      for (int i = 0; i < 4; ++i) {
        const int rr = mirror_index(y0 - 1 + i, src.height);
        double row_acc = 0.0;
        for (int j = 0; j < 4; ++j) {
          const int cc = mirror_index(x0 - 1 + j, src.width);
          row_acc += wx[j] * src.at(rr, cc);
        }
        acc += wy[i] * row_acc;
      }
      out.at(r, c) = acc;
    }
  }
  return out;
}

}  // namespace redpro
