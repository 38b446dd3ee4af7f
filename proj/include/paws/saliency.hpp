#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "paws/dataset.hpp"
#include "paws/error.hpp"
#include "paws/grid.hpp"
#include "paws/png_io.hpp"
#include "paws/raster.hpp"

namespace paws {

enum class Boundary {
  reflect,  // mirror about the edge, duplicating the edge sample (d c b a | a b c d)
  zero,
};

namespace detail {

inline int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

inline std::vector<double> gaussian_kernel(double sigma, double truncate) {
  const int radius = std::max(1, static_cast<int>(std::ceil(truncate * sigma)));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    sum += k[i + radius];
  }
  for (auto& v : k) v /= sum;
  return k;
}

/// 1-D convolution of `count` lines of length `len`; element j of line l sits at
/// data[l * line_stride + j * step].
inline void convolve_lines(std::span<const double> src, std::span<double> dst, int len, int count,
                           std::size_t line_stride, std::size_t step, const std::vector<double>& kernel,
                           Boundary boundary) {
  const int radius = static_cast<int>(kernel.size() / 2);
  std::vector<double> line(static_cast<std::size_t>(len) + 2 * radius);
  for (int l = 0; l < count; ++l) {
    const std::size_t base = static_cast<std::size_t>(l) * line_stride;
    for (int j = -radius; j < len + radius; ++j) {
      double v = 0.0;
      if (j >= 0 && j < len) {
        v = src[base + static_cast<std::size_t>(j) * step];
      } else if (boundary == Boundary::reflect) {
        v = src[base + static_cast<std::size_t>(reflect_index(j, len)) * step];
      }
      line[static_cast<std::size_t>(j + radius)] = v;
    }
    for (int j = 0; j < len; ++j) {
      const double* window = line.data() + j;
      double acc = 0.0;
      for (std::size_t t = 0; t < kernel.size(); ++t) acc += kernel[t] * window[t];
      dst[base + static_cast<std::size_t>(j) * step] = acc;
    }
  }
}

}  // namespace detail

/// Separable Gaussian blur with independent per-axis sigma (pixels). The kernel
/// is truncated at `truncate` standard deviations and renormalized.
template <class Tag>
Grid2D<Tag> gaussian_blur(const Grid2D<Tag>& img, double sigma_x, double sigma_y, Boundary boundary = Boundary::reflect,
                          double truncate = 3.0) {
  const int w = img.width();
  const int h = img.height();
  Grid2D<Tag> tmp(w, h);
  Grid2D<Tag> out(w, h);
  if (sigma_x > 0.0) {
    detail::convolve_lines(img.values(), tmp.values(), w, h, static_cast<std::size_t>(w), 1,
                           detail::gaussian_kernel(sigma_x, truncate), boundary);
  } else {
    std::ranges::copy(img.values(), tmp.values().begin());
  }
  if (sigma_y > 0.0) {
    detail::convolve_lines(tmp.values(), out.values(), h, w, 1, static_cast<std::size_t>(w),
                           detail::gaussian_kernel(sigma_y, truncate), boundary);
  } else {
    std::ranges::copy(tmp.values(), out.values().begin());
  }
  return out;
}

template <class Tag>
Grid2D<Tag> gaussian_blur(const Grid2D<Tag>& img, double sigma, Boundary boundary = Boundary::reflect) {
  return gaussian_blur(img, sigma, sigma, boundary);
}

/// (center, surround) sigma pairs of the built-in model, in pixels.
inline constexpr std::array<std::pair<double, double>, 3> kCenterSurroundScales{{{1.0, 4.0}, {2.0, 8.0}, {4.0, 16.0}}};

/// Classical multi-scale center-surround contrast: sum over scale pairs of
/// |G_c(img) - G_s(img)|, normalized by the global maximum. A constant image
/// yields an all-zero map.
inline SaliencyMap builtin_saliency(const InkImage& img) {
  const int w = img.width();
  const int h = img.height();
  std::vector<double> sum(img.size(), 0.0);

  // Cache blurs: sigma 4 appears both as a surround and as a center.
  std::vector<std::pair<double, InkImage>> cache;
  auto blurred = [&](double sigma) -> const InkImage& {
    for (const auto& [s, b] : cache)
      if (s == sigma) return b;
    cache.emplace_back(sigma, gaussian_blur(img, sigma));
    return cache.back().second;
  };
  for (const auto& [center, surround] : kCenterSurroundScales) {
    const auto c = blurred(center).values();
    const auto s = blurred(surround).values();
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += std::abs(c[i] - s[i]);
  }
  const double peak = sum.empty() ? 0.0 : *std::max_element(sum.begin(), sum.end());
  // Anything at rounding-noise level relative to the ink range counts as blank.
  if (peak <= 1e-12) return SaliencyMap(w, h, 0.0);
  for (auto& v : sum) v /= peak;
  return SaliencyMap(w, h, std::move(sum));
}

/// Anything callable as InkImage -> SaliencyMap can serve as the perceptual model.
template <class M>
concept SaliencyModel = requires(const M& model, const InkImage& img) {
  { model(img) } -> std::convertible_to<SaliencyMap>;
};

struct BuiltinSaliencyModel {
  SaliencyMap operator()(const InkImage& img) const { return builtin_saliency(img); }
};

/// Pointwise maximum over maps of identical shape.
inline SaliencyMap aggregate(std::span<const SaliencyMap> maps) {
  detail::require(!maps.empty(), "cannot aggregate an empty list of saliency maps");
  SaliencyMap out = maps.front();
  for (std::size_t m = 1; m < maps.size(); ++m) {
    if (!maps[m].same_shape(out)) throw InvalidArgument("saliency map dimension mismatch");
    auto dst = out.values();
    const auto src = maps[m].values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = std::max(dst[i], src[i]);
  }
  return out;
}

/// Point sizes x opacities; the cross product is the set of render configurations.
struct StimulusGrid {
  std::vector<int> point_sizes{2, 4, 8, 16};
  std::vector<double> opacities{0.1, 0.4, 0.7, 1.0};

  /// Configurations in point-size-major order.
  std::vector<RenderConfig> configs(Canvas canvas) const {
    detail::require(!point_sizes.empty() && !opacities.empty(), "stimulus grid must be non-empty");
    std::vector<RenderConfig> out;
    for (int ps : point_sizes)
      for (double op : opacities) {
        RenderConfig cfg{ps, op, canvas.width_px, canvas.height_px};
        cfg.validate();
        out.push_back(cfg);
      }
    return out;
  }
};

/// Renders the points under every configuration of the grid, applies the model
/// and keeps the per-pixel maximum.
template <SaliencyModel Model>
SaliencyMap aggregate_saliency_for(std::span<const Point> points, const StimulusGrid& grid, const Model& model,
                                   Canvas canvas = {}) {
  SaliencyMap acc;
  bool first = true;
  for (const auto& cfg : grid.configs(canvas)) {
    SaliencyMap map = model(render(points, cfg));
    if (first) {
      acc = std::move(map);
      first = false;
      continue;
    }
    const std::array<SaliencyMap, 2> pair{std::move(acc), std::move(map)};
    acc = aggregate(pair);
  }
  return acc;
}

template <SaliencyModel Model>
SaliencyMap aggregate_saliency_for(const Dataset& ds, const StimulusGrid& grid, const Model& model, Canvas canvas = {}) {
  detail::require(ds.size() > 0, "cannot compute saliency of an empty dataset");
  return aggregate_saliency_for(ds.view(), grid, model, canvas);
}

// SALF: "SALF1\n", "<width> <height>\n", then width*height little-endian
// float32 values, row-major, row 0 = top.

inline void store_map(const SaliencyMap& map, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "SALF1\n" << map.width() << ' ' << map.height() << '\n';
  std::vector<char> bytes(map.size() * 4);
  const auto values = map.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(values[i]));
    for (int b = 0; b < 4; ++b) bytes[4 * i + b] = static_cast<char>((bits >> (8 * b)) & 0xffu);
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

namespace detail {

inline SaliencyMap parse_salf(const std::string& data) {
  auto malformed = [](const std::string& why) { return ParseError("malformed SALF header: " + why); };
  if (data.compare(0, 6, "SALF1\n") != 0) throw malformed("bad magic");
  const auto eol = data.find('\n', 6);
  if (eol == std::string::npos) throw malformed("missing dimension line");
  std::istringstream dims(data.substr(6, eol - 6));
  long long width = -1, height = -1;
  std::string rest;
  if (!(dims >> width >> height) || (dims >> rest) || width <= 0 || height <= 0)
    throw malformed("bad dimension line");
  if (width > (1 << 20) || height > (1 << 20)) throw malformed("dimensions too large");

  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  const std::size_t offset = eol + 1;
  const std::size_t available = data.size() - offset;
  if (available < count * 4) throw ParseError("unexpected end of data");
  if (available > count * 4) throw ParseError("dimension mismatch: trailing data after " + std::to_string(count) + " values");

  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b)
      bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[offset + 4 * i + b])) << (8 * b);
    const double v = std::bit_cast<float>(bits);
    if (!(v >= 0.0 && v <= 1.0)) throw ParseError("value out of range at index " + std::to_string(i));
    values[i] = v;
  }
  return SaliencyMap(static_cast<int>(width), static_cast<int>(height), std::move(values));
}

}  // namespace detail

/// Loads a SALF file, or an 8-/16-bit grayscale PNG (scaled by 1/255 or 1/65535).
inline SaliencyMap load_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("file not found: " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  static constexpr unsigned char kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (data.size() >= 8 && std::memcmp(data.data(), kPngMagic, 8) == 0) {
    const GrayPixels px = read_gray_png(path);
    const double scale = px.bit_depth == 16 ? 65535.0 : 255.0;
    std::vector<double> values(px.samples.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = px.samples[i] / scale;
    return SaliencyMap(px.width, px.height, std::move(values));
  }
  return detail::parse_salf(data);
}

/// Loads a map and checks it against the expected canvas.
inline SaliencyMap load_map(const std::filesystem::path& path, Canvas expected) {
  SaliencyMap map = load_map(path);
  if (map.width() != expected.width_px || map.height() != expected.height_px)
    throw ParseError("dimension mismatch: " + path.string() + " is " + std::to_string(map.width()) + "x" +
                     std::to_string(map.height()) + ", expected " + std::to_string(expected.width_px) + "x" +
                     std::to_string(expected.height_px));
  return map;
}

}  // namespace paws
