#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "paws/dataset.hpp"
#include "paws/error.hpp"
#include "paws/grid.hpp"
#include "paws/raster.hpp"
#include "paws/saliency.hpp"

namespace paws {

struct KdeParams {
  /// Exact pairwise evaluation up to this many points, grid approximation above.
  std::size_t exact_threshold = 100'000;
  /// Cells per axis of the histogram used by the grid approximation.
  int grid_resolution = 512;
};

struct Bandwidth {
  double x = 0.0;
  double y = 0.0;
};

/// Scott's rule for two dimensions: h = sigma_axis * n^(-1/6), sample std.
inline Bandwidth scott_bandwidth(std::span<const Point> pts) {
  const auto n = static_cast<double>(pts.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : pts) {
    mx += p.x;
    my += p.y;
  }
  mx /= n;
  my /= n;
  double vx = 0.0, vy = 0.0;
  for (const auto& p : pts) {
    vx += (p.x - mx) * (p.x - mx);
    vy += (p.y - my) * (p.y - my);
  }
  const double denom = pts.size() > 1 ? n - 1.0 : 1.0;
  const double factor = std::pow(n, -1.0 / 6.0);
  return {std::sqrt(vx / denom) * factor, std::sqrt(vy / denom) * factor};
}

namespace detail {

/// Gaussian product-kernel sums at each point (including itself), normalized
/// to a maximum of 1. Pairs farther than kCutoff bandwidths are skipped: their
/// kernel value is below 1e-16 of the self term, i.e. below double resolution.
inline std::vector<double> kde_exact(std::span<const Point> pts, Bandwidth bw) {
  constexpr double kCutoff = 8.6;  // exp(-0.5 * 8.6^2) ~ 9e-17
  const std::size_t n = pts.size();
  const double inv_hx = bw.x > 0.0 ? 1.0 / bw.x : 0.0;
  const double inv_hy = bw.y > 0.0 ? 1.0 / bw.y : 0.0;

  // Work in bandwidth units, sorted by x so the cutoff bounds the scan.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::ranges::sort(order, [&](std::size_t a, std::size_t b) {
    return pts[a].x < pts[b].x || (pts[a].x == pts[b].x && a < b);
  });
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = pts[order[i]].x * inv_hx;
    ys[i] = pts[order[i]].y * inv_hy;
  }
  constexpr double kCut2 = kCutoff * kCutoff;
  std::vector<double> sums(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = xs[i];
    const double yi = ys[i];
    std::size_t lo = i;
    while (lo > 0 && xi - xs[lo - 1] <= kCutoff) --lo;
    std::size_t hi = i + 1;
    while (hi < n && xs[hi] - xi <= kCutoff) ++hi;
    double acc = 0.0;
    for (std::size_t j = lo; j < hi; ++j) {
      const double dx = xs[j] - xi;
      const double dy = ys[j] - yi;
      const double r2 = dx * dx + dy * dy;
      if (r2 <= kCut2) acc += std::exp(-0.5 * r2);
    }
    sums[order[i]] = acc;
  }
  return sums;
}

/// Histogram on a grid_resolution^2 raster, blurred with the bandwidth (zero
/// padding: no mass outside the unit square), read back at each point's cell.
inline std::vector<double> kde_grid(std::span<const Point> pts, Bandwidth bw, int resolution) {
  Histogram hist(resolution, resolution);
  std::vector<std::size_t> cell(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto [row, col] = point_to_pixel(pts[i], resolution, resolution);
    cell[i] = static_cast<std::size_t>(row) * resolution + col;
    hist.values()[cell[i]] += 1.0;
  }
  const Histogram smooth =
      gaussian_blur(hist, bw.x * resolution, bw.y * resolution, Boundary::zero, /*truncate=*/4.0);
  std::vector<double> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) out[i] = smooth.values()[cell[i]];
  return out;
}

}  // namespace detail

/// Kernel density at every point, divided by the maximum so scores lie in (0, 1].
/// Uses the exact pairwise sum up to params.exact_threshold points and the
/// rasterized approximation above it. All-identical points give all 1.0.
inline std::vector<double> density_scores(std::span<const Point> pts, const KdeParams& params = {}) {
  detail::require(pts.size() >= 2, "density estimation needs at least 2 points");
  const Bandwidth bw = scott_bandwidth(pts);
  if (bw.x == 0.0 && bw.y == 0.0) return std::vector<double>(pts.size(), 1.0);
  std::vector<double> dens = pts.size() <= params.exact_threshold
                                 ? detail::kde_exact(pts, bw)
                                 : detail::kde_grid(pts, bw, params.grid_resolution);
  const double peak = *std::max_element(dens.begin(), dens.end());
  for (auto& d : dens) d /= peak;
  return dens;
}

inline std::vector<double> density_scores(const Dataset& ds, const KdeParams& params = {}) {
  return density_scores(ds.view(), params);
}

struct GammaParams {
  double steepness = 50.0;  // a
  double midpoint = 0.05;   // v0
};

inline double population_variance(std::span<const double> values) {
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double acc = 0.0;
  for (double v : values) acc += (v - mean) * (v - mean);
  return acc / static_cast<double>(values.size());
}

/// Logistic map of a variance onto [0, 1].
inline double gamma_from_variance(double variance, const GammaParams& params = {}) {
  return 1.0 / (1.0 + std::exp(-params.steepness * (variance - params.midpoint)));
}

/// Density-influence factor from the variance of the density scores.
inline double adaptive_gamma(std::span<const double> density, const GammaParams& params = {}) {
  detail::require(!density.empty(), "adaptive_gamma needs at least one score");
  return gamma_from_variance(population_variance(density), params);
}

struct PerceptionWeights {
  std::vector<double> weights;
  double gamma_used = 0.0;
  std::vector<double> saliency_scores;
  std::vector<double> density_scores;

  std::size_t size() const { return weights.size(); }
};

/// Nearest-pixel saliency lookup for every point.
inline std::vector<double> saliency_scores(std::span<const Point> pts, const SaliencyMap& map) {
  std::vector<double> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto [row, col] = point_to_pixel(pts[i], map.width(), map.height());
    out[i] = map(row, col);
  }
  return out;
}

/// w = max(q_s, gamma * q_d) from precomputed density scores.
inline PerceptionWeights combine_weights(std::vector<double> q_s, std::vector<double> q_d, double gamma) {
  detail::require(q_s.size() == q_d.size(), "saliency and density scores must have equal length");
  PerceptionWeights pw;
  pw.gamma_used = gamma;
  pw.weights.resize(q_s.size());
  for (std::size_t i = 0; i < q_s.size(); ++i) pw.weights[i] = std::max(q_s[i], gamma * q_d[i]);
  pw.saliency_scores = std::move(q_s);
  pw.density_scores = std::move(q_d);
  return pw;
}

inline PerceptionWeights perception_weights(const Dataset& ds, const SaliencyMap& agg_map, Canvas canvas,
                                            std::vector<double> q_d, const GammaParams& gamma_params = {}) {
  if (agg_map.width() != canvas.width_px || agg_map.height() != canvas.height_px)
    throw InvalidArgument("saliency map dimension mismatch: map is " + std::to_string(agg_map.width()) + "x" +
                          std::to_string(agg_map.height()) + ", canvas is " + std::to_string(canvas.width_px) + "x" +
                          std::to_string(canvas.height_px));
  detail::require(q_d.size() == ds.size(), "density scores must align with the dataset");
  const double gamma = adaptive_gamma(q_d, gamma_params);
  return combine_weights(saliency_scores(ds.view(), agg_map), std::move(q_d), gamma);
}

inline PerceptionWeights perception_weights(const Dataset& ds, const SaliencyMap& agg_map, Canvas canvas,
                                            const KdeParams& kde = {}, const GammaParams& gamma_params = {}) {
  return perception_weights(ds, agg_map, canvas, density_scores(ds, kde), gamma_params);
}

inline PerceptionWeights perception_weights(const Dataset& ds, const SaliencyMap& agg_map, const RenderConfig& cfg,
                                            const KdeParams& kde = {}, const GammaParams& gamma_params = {}) {
  return perception_weights(ds, agg_map, cfg.canvas(), kde, gamma_params);
}

}  // namespace paws
