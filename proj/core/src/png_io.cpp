#include "redpro/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <vector>

namespace redpro {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

unsigned char quantize(double v) {
  const double c = std::clamp(v, 0.0, 255.0);
  return static_cast<unsigned char>(std::lround(c));
}

}  // namespace

RgbImage load_png(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw std::runtime_error("load_png: cannot open " + path);

  png_byte header[8];
  if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8) != 0)
    throw std::runtime_error("load_png: not a PNG file: " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("load_png: png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("load_png: png_create_info_struct failed");
  }
  std::vector<std::vector<png_byte>> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("load_png: libpng error reading " + path);
  }
  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);

  if (bit_depth == 16) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("load_png: unsupported 16-bit PNG: " + path);
  }

  // Normalize everything to 8-bit RGB.
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const size_t rowbytes = png_get_rowbytes(png, info);
  if (rowbytes != static_cast<size_t>(w) * 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("load_png: unexpected row layout in " + path);
  }

  rows.assign(h, std::vector<png_byte>(rowbytes));
  std::vector<png_bytep> row_ptrs(h);
  for (png_uint_32 r = 0; r < h; ++r) row_ptrs[r] = rows[r].data();
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  RgbImage img{ImagePlane(h, w), ImagePlane(h, w), ImagePlane(h, w)};
  for (png_uint_32 r = 0; r < h; ++r) {
    for (png_uint_32 c = 0; c < w; ++c) {
      img.r.at(r, c) = rows[r][3 * c + 0];
      img.g.at(r, c) = rows[r][3 * c + 1];
      img.b.at(r, c) = rows[r][3 * c + 2];
    }
  }
  return img;
}

namespace {

void write_png_rows(const std::string& path, int height, int width, int color_type,
                    const std::vector<std::vector<png_byte>>& rows) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw std::runtime_error("save_png: cannot open " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("save_png: png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("save_png: png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("save_png: libpng error writing " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (const auto& row : rows)
    png_write_row(png, const_cast<png_bytep>(row.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

void save_png(const RgbImage& img, const std::string& path) {
  check_same_shape(img.r, img.g, "save_png");
  check_same_shape(img.r, img.b, "save_png");
  const int h = img.height(), w = img.width();
  if (h <= 0 || w <= 0) throw std::invalid_argument("save_png: empty image");
  std::vector<std::vector<png_byte>> rows(h, std::vector<png_byte>(static_cast<size_t>(w) * 3));
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      rows[r][3 * c + 0] = quantize(img.r.at(r, c));
      rows[r][3 * c + 1] = quantize(img.g.at(r, c));
      rows[r][3 * c + 2] = quantize(img.b.at(r, c));
    }
  }
  write_png_rows(path, h, w, PNG_COLOR_TYPE_RGB, rows);
}

void save_png(const ImagePlane& plane, const std::string& path) {
  const int h = plane.height, w = plane.width;
  if (h <= 0 || w <= 0) throw std::invalid_argument("save_png: empty image");
  std::vector<std::vector<png_byte>> rows(h, std::vector<png_byte>(w));
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) rows[r][c] = quantize(plane.at(r, c));
  write_png_rows(path, h, w, PNG_COLOR_TYPE_GRAY, rows);
}

}  // namespace redpro
