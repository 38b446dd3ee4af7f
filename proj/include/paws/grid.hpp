#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "paws/error.hpp"

namespace paws {

/// Dense row-major grid of doubles; row 0 is the top of the image. The tag
/// keeps ink images and saliency maps from being mixed up.
template <class Tag>
class Grid2D {
 public:
  Grid2D() = default;
  Grid2D(int width, int height, double fill = 0.0)
      : width_(width), height_(height), values_(checked_area(width, height), fill) {}
  Grid2D(int width, int height, std::vector<double> values) : width_(width), height_(height), values_(std::move(values)) {
    if (values_.size() != checked_area(width, height)) throw InvalidArgument("grid value count does not match dimensions");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(int row, int col) { return values_[index(row, col)]; }
  double operator()(int row, int col) const { return values_[index(row, col)]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool same_shape(const Grid2D& other) const { return width_ == other.width_ && height_ == other.height_; }

  template <class OtherTag>
  bool same_shape(const Grid2D<OtherTag>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;

 private:
  static std::size_t checked_area(int width, int height) {
    if (width < 0 || height < 0) throw InvalidArgument("grid dimensions must be non-negative");
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

struct InkTag {};
struct SaliencyTag {};
struct HistogramTag {};

/// Rendered scatterplot: 0 = blank canvas, 1 = fully saturated.
using InkImage = Grid2D<InkTag>;
/// Per-pixel saliency in [0, 1].
using SaliencyMap = Grid2D<SaliencyTag>;
/// Non-negative mass per bin; used by the transport-based metric.
using Histogram = Grid2D<HistogramTag>;

}  // namespace paws
