#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "paws/dataset.hpp"

namespace paws {

namespace detail {

inline int grid_cells_for(double cell_size) {
  return std::clamp(static_cast<int>(std::ceil(1.0 / cell_size)), 1, 4096);
}

inline int grid_coord(double v, int cells) {
  return std::clamp(static_cast<int>(v * cells), 0, cells - 1);
}

}  // namespace detail

/// Growable bucket grid over the unit square holding points (no indices).
class PointBuckets {
 public:
  explicit PointBuckets(double cell_size) { reset(cell_size); }

  double cell_size() const { return 1.0 / cells_; }

  void insert(Point p) {
    points_.push_back(p);
    bucket(p).push_back(p);
  }

  /// Re-buckets the stored points at a new cell size.
  void rebuild(double cell_size) {
    auto pts = std::move(points_);
    reset(cell_size);
    for (const auto& p : pts) insert(p);
  }

  /// True when some stored point lies strictly closer than r to p.
  bool any_within(Point p, double r) const {
    const double r2 = r * r;
    const int reach = static_cast<int>(std::ceil(r * cells_));
    const int cx = detail::grid_coord(p.x, cells_);
    const int cy = detail::grid_coord(p.y, cells_);
    for (int gy = std::max(0, cy - reach); gy <= std::min(cells_ - 1, cy + reach); ++gy)
      for (int gx = std::max(0, cx - reach); gx <= std::min(cells_ - 1, cx + reach); ++gx)
        for (const auto& q : buckets_[static_cast<std::size_t>(gy) * cells_ + gx])
          if (squared_distance(p, q) < r2) return true;
    return false;
  }

 private:
  void reset(double cell_size) {
    cells_ = detail::grid_cells_for(cell_size);
    buckets_.assign(static_cast<std::size_t>(cells_) * cells_, {});
    points_.clear();
  }
  std::vector<Point>& bucket(Point p) {
    return buckets_[static_cast<std::size_t>(detail::grid_coord(p.y, cells_)) * cells_ +
                    detail::grid_coord(p.x, cells_)];
  }

  int cells_ = 1;
  std::vector<std::vector<Point>> buckets_;
  std::vector<Point> points_;
};

/// Immutable CSR bucket grid over a fixed point set, for radius queries that
/// return indices into that set.
class IndexGrid {
 public:
  IndexGrid(std::span<const Point> pts, double cell_size) : pts_(pts), cells_(detail::grid_cells_for(cell_size)) {
    const std::size_t ncell = static_cast<std::size_t>(cells_) * cells_;
    offsets_.assign(ncell + 1, 0);
    std::vector<std::size_t> cell_of(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      cell_of[i] = cell_index(pts[i]);
      ++offsets_[cell_of[i] + 1];
    }
    for (std::size_t c = 0; c < ncell; ++c) offsets_[c + 1] += offsets_[c];
    items_.resize(pts.size());
    auto fill = offsets_;
    for (std::size_t i = 0; i < pts.size(); ++i) items_[fill[cell_of[i]]++] = i;
  }

  /// Calls f(index, squared distance) for every point within distance r of p
  /// (inclusive), in ascending cell order then ascending index.
  template <class F>
  void for_each_within(Point p, double r, F&& f) const {
    const double r2 = r * r;
    const int reach = static_cast<int>(std::ceil(r * cells_));
    const int cx = detail::grid_coord(p.x, cells_);
    const int cy = detail::grid_coord(p.y, cells_);
    for (int gy = std::max(0, cy - reach); gy <= std::min(cells_ - 1, cy + reach); ++gy)
      for (int gx = std::max(0, cx - reach); gx <= std::min(cells_ - 1, cx + reach); ++gx) {
        const std::size_t c = static_cast<std::size_t>(gy) * cells_ + gx;
        for (std::size_t t = offsets_[c]; t < offsets_[c + 1]; ++t) {
          const std::size_t i = items_[t];
          const double d2 = squared_distance(p, pts_[i]);
          if (d2 <= r2) f(i, d2);
        }
      }
  }

 private:
  std::size_t cell_index(Point p) const {
    return static_cast<std::size_t>(detail::grid_coord(p.y, cells_)) * cells_ + detail::grid_coord(p.x, cells_);
  }

  std::span<const Point> pts_;
  int cells_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> items_;
};

}  // namespace paws
