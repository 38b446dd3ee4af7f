#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "paws/dataset.hpp"
#include "paws/error.hpp"
#include "paws/grid.hpp"

namespace paws {

struct Canvas {
  int width_px = 1085;
  int height_px = 924;
};

struct RenderConfig {
  int point_size_px = 2;  // disc diameter
  double opacity = 1.0;
  int width_px = 1085;
  int height_px = 924;

  Canvas canvas() const { return {width_px, height_px}; }

  void validate() const {
    detail::require(point_size_px >= 1, "point size must be at least 1 px");
    detail::require(opacity > 0.0 && opacity <= 1.0, "opacity must lie in (0, 1]");
    detail::require(width_px >= 16 && height_px >= 16, "canvas must be at least 16x16 px");
  }
};

struct PixelIndex {
  int row = 0;
  int col = 0;

  friend bool operator==(const PixelIndex&, const PixelIndex&) = default;
};

/// Unit-square point to pixel cell. Row 0 is the top of the image; data y grows upward.
inline PixelIndex point_to_pixel(Point p, int width_px, int height_px) {
  auto cell = [](double v, int extent) {
    const double f = std::floor(v * extent);
    if (!(f >= 0.0)) return 0;
    return f >= extent - 1 ? extent - 1 : static_cast<int>(f);
  };
  return {cell(1.0 - p.y, height_px), cell(p.x, width_px)};
}

inline PixelIndex point_to_pixel(Point p, const RenderConfig& cfg) {
  return point_to_pixel(p, cfg.width_px, cfg.height_px);
}

namespace detail {

struct Offset {
  int drow;
  int dcol;
};

/// Cells whose centers lie within diameter/2 of the center of the anchor cell.
inline std::vector<Offset> disc_stencil(int diameter) {
  const double r = diameter / 2.0;
  const int reach = static_cast<int>(std::ceil(r));
  std::vector<Offset> cells;
  for (int dr = -reach; dr <= reach; ++dr)
    for (int dc = -reach; dc <= reach; ++dc)
      if (dr * dr + dc * dc <= r * r) cells.push_back({dr, dc});
  return cells;
}

}  // namespace detail

/// Per-cell number of discs covering the cell center.
inline std::vector<std::uint32_t> coverage_counts(std::span<const Point> points, const RenderConfig& cfg) {
  cfg.validate();
  const int w = cfg.width_px;
  const int h = cfg.height_px;
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(w) * h, 0);
  const auto stencil = detail::disc_stencil(cfg.point_size_px);
  for (const auto& p : points) {
    const auto [row, col] = point_to_pixel(p, cfg);
    for (const auto [dr, dc] : stencil) {
      const int r = row + dr;
      const int c = col + dc;
      if (r < 0 || r >= h || c < 0 || c >= w) continue;
      ++counts[static_cast<std::size_t>(r) * w + c];
    }
  }
  return counts;
}

/// Draws every point as a filled disc and composites ink' = ink + opacity*(1-ink)
/// once per covering disc, i.e. ink = 1 - (1-opacity)^count. The closed form
/// makes the result independent of point order.
inline InkImage render(std::span<const Point> points, const RenderConfig& cfg) {
  const auto counts = coverage_counts(points, cfg);
  const std::uint32_t max_count = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
  std::vector<double> ink_for_count(static_cast<std::size_t>(max_count) + 1);
  for (std::uint32_t c = 0; c <= max_count; ++c) ink_for_count[c] = 1.0 - std::pow(1.0 - cfg.opacity, c);

  InkImage img(cfg.width_px, cfg.height_px);
  auto values = img.values();
  for (std::size_t i = 0; i < counts.size(); ++i) values[i] = ink_for_count[counts[i]];
  return img;
}

inline InkImage render(const Dataset& ds, const RenderConfig& cfg) {
  detail::require(ds.size() > 0, "cannot render an empty dataset");
  return render(ds.view(), cfg);
}

}  // namespace paws
