#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "paws/error.hpp"
#include "paws/grid.hpp"
#include "paws/transport.hpp"

namespace paws {

namespace detail {

template <class A, class B>
void require_same_shape(const Grid2D<A>& a, const Grid2D<B>& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw InvalidArgument("dimension mismatch: " + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                          " vs " + std::to_string(b.width()) + "x" + std::to_string(b.height()));
}

/// Values divided by their sum; throws on a non-positive sum.
inline std::vector<double> as_distribution(std::span<const double> values) {
  const double sum = std::accumulate(values.begin(), values.end(), 0.0);
  if (!(sum > 0.0)) throw InvalidArgument("saliency map has zero total mass");
  std::vector<double> p(values.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = values[i] / sum;
  return p;
}

}  // namespace detail

struct SsimParams {
  int window = 8;  // square window side and stride
  double dynamic_range = 1.0;
};

/// Mean SSIM over non-overlapping window x window tiles (partial edge tiles
/// included), alpha = beta = gamma = 1, C1 = (0.01 L)^2, C2 = (0.03 L)^2,
/// C3 = C2 / 2, population statistics per tile.
inline double ssim(const SaliencyMap& a, const SaliencyMap& b, const SsimParams& params = {}) {
  detail::require_same_shape(a, b);
  detail::require(params.window >= 1, "SSIM window must be at least 1");
  const double c1 = (0.01 * params.dynamic_range) * (0.01 * params.dynamic_range);
  const double c2 = (0.03 * params.dynamic_range) * (0.03 * params.dynamic_range);
  const int w = a.width();
  const int h = a.height();
  double total = 0.0;
  std::size_t windows = 0;
  for (int r0 = 0; r0 < h; r0 += params.window) {
    for (int c0 = 0; c0 < w; c0 += params.window) {
      const int r1 = std::min(h, r0 + params.window);
      const int c1e = std::min(w, c0 + params.window);
      const double count = static_cast<double>((r1 - r0) * (c1e - c0));
      double sa = 0.0, sb = 0.0;
      for (int r = r0; r < r1; ++r)
        for (int c = c0; c < c1e; ++c) {
          sa += a(r, c);
          sb += b(r, c);
        }
      const double ma = sa / count;
      const double mb = sb / count;
      double vaa = 0.0, vbb = 0.0, vab = 0.0;
      for (int r = r0; r < r1; ++r)
        for (int c = c0; c < c1e; ++c) {
          const double da = a(r, c) - ma;
          const double db = b(r, c) - mb;
          vaa += da * da;
          vbb += db * db;
          vab += da * db;
        }
      vaa /= count;
      vbb /= count;
      vab /= count;
      // With C3 = C2/2 the contrast and structure terms collapse into one factor.
      total += ((2.0 * ma * mb + c1) * (2.0 * vab + c2)) / ((ma * ma + mb * mb + c1) * (vaa + vbb + c2));
      ++windows;
    }
  }
  return total / static_cast<double>(windows);
}

/// Pearson correlation of the flattened maps.
inline double cc(const SaliencyMap& a, const SaliencyMap& b) {
  detail::require_same_shape(a, b);
  const auto va = a.values();
  const auto vb = b.values();
  const auto n = static_cast<double>(va.size());
  const double ma = std::accumulate(va.begin(), va.end(), 0.0) / n;
  const double mb = std::accumulate(vb.begin(), vb.end(), 0.0) / n;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    const double da = va[i] - ma;
    const double db = vb[i] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  auto constant = [](std::span<const double> v) {
    const auto [lo, hi] = std::ranges::minmax_element(v);
    return *lo == *hi;
  };
  if (constant(va) || constant(vb) || !(saa > 0.0) || !(sbb > 0.0))
    throw InvalidArgument("undefined correlation: a map has zero variance");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

/// Histogram intersection of the sum-normalized maps.
inline double sim(const SaliencyMap& a, const SaliencyMap& b) {
  detail::require_same_shape(a, b);
  const auto p = detail::as_distribution(a.values());
  const auto q = detail::as_distribution(b.values());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) total += std::min(p[i], q[i]);
  return total;
}

/// Jensen-Shannon divergence, base-2 logarithm, of the sum-normalized maps.
inline double jsd(const SaliencyMap& a, const SaliencyMap& b) {
  detail::require_same_shape(a, b);
  const auto p = detail::as_distribution(a.values());
  const auto q = detail::as_distribution(b.values());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) total += 0.5 * p[i] * std::log2(p[i] / m);
    if (q[i] > 0.0) total += 0.5 * q[i] * std::log2(q[i] / m);
  }
  return std::clamp(total, 0.0, 1.0);
}

/// Block means over factor x factor tiles; edge tiles average only the pixels they hold.
template <class Tag>
Histogram downscale_mean(const Grid2D<Tag>& img, int factor) {
  detail::require(factor >= 1, "downscale factor must be at least 1");
  const int bw = (img.width() + factor - 1) / factor;
  const int bh = (img.height() + factor - 1) / factor;
  Histogram out(bw, bh);
  for (int br = 0; br < bh; ++br)
    for (int bc = 0; bc < bw; ++bc) {
      const int r1 = std::min(img.height(), (br + 1) * factor);
      const int c1 = std::min(img.width(), (bc + 1) * factor);
      double sum = 0.0;
      for (int r = br * factor; r < r1; ++r)
        for (int c = bc * factor; c < c1; ++c) sum += img(r, c);
      out(br, bc) = sum / static_cast<double>((r1 - br * factor) * (c1 - bc * factor));
    }
  return out;
}

/// Earth mover's distance between two same-shape histograms after sum
/// normalization; ground cost is the Euclidean distance between bin centers in
/// bin units.
inline double emd_histogram(const Histogram& p, const Histogram& q) {
  detail::require_same_shape(p, q);
  const auto pa = detail::as_distribution(p.values());
  const auto qa = detail::as_distribution(q.values());
  const int w = p.width();
  const std::size_t n = pa.size();
  // Cost only between bins that carry mass; the solver ignores the rest.
  std::vector<std::size_t> src, dst;
  for (std::size_t i = 0; i < n; ++i) {
    if (pa[i] > 0.0) src.push_back(i);
    if (qa[i] > 0.0) dst.push_back(i);
  }
  std::vector<double> supply(src.size()), demand(dst.size()), cost(src.size() * dst.size());
  for (std::size_t i = 0; i < src.size(); ++i) supply[i] = pa[src[i]];
  for (std::size_t j = 0; j < dst.size(); ++j) demand[j] = qa[dst[j]];
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double ri = static_cast<double>(src[i] / w);
    const double ci = static_cast<double>(src[i] % w);
    for (std::size_t j = 0; j < dst.size(); ++j) {
      const double dr = ri - static_cast<double>(dst[j] / w);
      const double dc = ci - static_cast<double>(dst[j] % w);
      cost[i * dst.size() + j] = std::sqrt(dr * dr + dc * dc);
    }
  }
  return TransportSolver::solve(supply, demand, cost);
}

struct EmdParams {
  int downscale = 32;
};

/// EMD of two saliency maps at 1/factor linear resolution.
inline double emd(const SaliencyMap& a, const SaliencyMap& b, const EmdParams& params = {}) {
  detail::require_same_shape(a, b);
  return emd_histogram(downscale_mean(a, params.downscale), downscale_mean(b, params.downscale));
}

}  // namespace paws
