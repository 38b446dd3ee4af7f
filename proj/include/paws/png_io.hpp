#pragma once

#include <png.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <vector>

#include "paws/error.hpp"
#include "paws/grid.hpp"

namespace paws {

/// 8- or 16-bit grayscale pixel buffer as stored on disk.
struct GrayPixels {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  std::vector<std::uint16_t> samples;  // row-major
};

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace detail

inline void write_gray8_png(const std::filesystem::path& path, int width, int height,
                            const std::vector<std::uint8_t>& pixels) {
  detail::FilePtr file(std::fopen(path.string().c_str(), "wb"));
  if (!file) throw IoError("cannot open for writing: " + path.string());

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG write failed: " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < height; ++r)
    png_write_row(png, const_cast<png_bytep>(pixels.data() + static_cast<std::size_t>(r) * width));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

inline GrayPixels read_gray_png(const std::filesystem::path& path) {
  detail::FilePtr file(std::fopen(path.string().c_str(), "rb"));
  if (!file) throw IoError("file not found: " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  GrayPixels out;
  std::vector<png_byte> row;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ParseError("malformed PNG: " + path.string());
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  const auto color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color != PNG_COLOR_TYPE_GRAY || (depth != 8 && depth != 16)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ParseError("expected an 8- or 16-bit grayscale PNG: " + path.string());
  }
  if (depth == 16) png_set_swap(png);  // native little-endian samples
  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.bit_depth = depth;
  out.samples.resize(static_cast<std::size_t>(out.width) * out.height);
  row.resize(png_get_rowbytes(png, info));
  for (int r = 0; r < out.height; ++r) {
    png_read_row(png, row.data(), nullptr);
    for (int c = 0; c < out.width; ++c) {
      std::uint16_t v = 0;
      if (depth == 8) {
        v = row[c];
      } else {
        v = static_cast<std::uint16_t>(row[2 * c] | (row[2 * c + 1] << 8));
      }
      out.samples[static_cast<std::size_t>(r) * out.width + c] = v;
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

/// 8-bit grayscale with white background: pixel = round(255 * (1 - ink)).
inline void write_png(const InkImage& img, const std::filesystem::path& path) {
  std::vector<std::uint8_t> pixels(img.size());
  const auto ink = img.values();
  for (std::size_t i = 0; i < pixels.size(); ++i)
    pixels[i] = static_cast<std::uint8_t>(std::floor(255.0 * (1.0 - ink[i]) + 0.5));
  write_gray8_png(path, img.width(), img.height(), pixels);
}

}  // namespace paws
