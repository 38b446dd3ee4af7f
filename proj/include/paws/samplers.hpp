#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point.hpp>
#include <boost/geometry/index/rtree.hpp>

#include "paws/dataset.hpp"
#include "paws/error.hpp"
#include "paws/perception.hpp"
#include "paws/random.hpp"
#include "paws/sample.hpp"
#include "paws/spatial_grid.hpp"

namespace paws {

/// Called after each cache update with the squared min-distance cache (selected
/// points hold -1) and the selection so far. The final pick is not reported.
using GreedyObserver = std::function<void(std::span<const double> min_dist2, std::span<const std::size_t> selected)>;

namespace detail {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Weighted farthest-first traversal. Each step picks argmax over unselected y
/// of w_y * min_{x in S} d(y, x), lowest index on ties. Scores are compared as
/// w^2 * d^2 (same order, no square roots). The min-distance cache is updated
/// against the newest point only, so the whole run is O(kn).
/// An empty `weights` span means all weights are 1.
inline std::vector<std::size_t> weighted_farthest_first(std::span<const Point> pts, std::span<const double> weights,
                                                        std::size_t k, std::size_t start,
                                                        const GreedyObserver& observer = {}) {
  const std::size_t n = pts.size();
  require_k(k, n);
  require(start < n, "start index out of range");
  require(weights.empty() || weights.size() == n, "weights must align with the dataset");
  const bool weighted = !weights.empty();

  std::vector<double> xs(n), ys(n), ww(weighted ? n : 0);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = pts[i].x;
    ys[i] = pts[i].y;
    if (weighted) ww[i] = weights[i] * weights[i];
  }
  std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> selected;
  selected.reserve(k);

  std::size_t next = start;
  while (true) {
    selected.push_back(next);
    min_d2[next] = -1.0;
    if (selected.size() == k) break;
    const double px = xs[next];
    const double py = ys[next];
    double best = -1.0;
    std::size_t best_idx = n;
    for (std::size_t i = 0; i < n; ++i) {
      double d2 = min_d2[i];
      if (d2 < 0.0) continue;
      const double dx = xs[i] - px;
      const double dy = ys[i] - py;
      d2 = std::min(d2, dx * dx + dy * dy);
      min_d2[i] = d2;
      const double score = weighted ? ww[i] * d2 : d2;
      if (score > best) {
        best = score;
        best_idx = i;
      }
    }
    if (observer) observer(min_d2, selected);
    next = best_idx;
  }
  return selected;
}

}  // namespace detail

/// PAwS from a given first point.
inline Sample paws_from(const Dataset& ds, const PerceptionWeights& weights, std::size_t k, std::size_t start,
                        const GreedyObserver& observer = {}) {
  detail::require(weights.size() == ds.size(), "perception weights must align with the dataset");
  detail::Stopwatch clock;
  auto idx = detail::weighted_farthest_first(ds.view(), weights.weights, k, start, observer);
  Sample s = detail::make_index_sample(ds, std::move(idx), "paws", 0);
  s.params["start"] = static_cast<double>(start);
  s.params["gamma"] = weights.gamma_used;
  s.elapsed_seconds = clock.seconds();
  return s;
}

/// Perception-aware sampling: random first point, then greedy on weight * distance.
inline Sample paws(const Dataset& ds, const PerceptionWeights& weights, std::size_t k, std::uint64_t seed) {
  detail::require_k(k, ds.size());
  Rng rng(seed);
  Sample s = paws_from(ds, weights, k, rng.below(ds.size()));
  s.seed = seed;
  return s;
}

/// Max-Min diversification (GMM farthest-first traversal) from a given first point.
inline Sample maxmin_from(const Dataset& ds, std::size_t k, std::size_t start, const GreedyObserver& observer = {}) {
  detail::Stopwatch clock;
  auto idx = detail::weighted_farthest_first(ds.view(), {}, k, start, observer);
  Sample s = detail::make_index_sample(ds, std::move(idx), "maxmin", 0);
  s.params["start"] = static_cast<double>(start);
  s.elapsed_seconds = clock.seconds();
  return s;
}

inline Sample maxmin_gmm(const Dataset& ds, std::size_t k, std::uint64_t seed) {
  detail::require_k(k, ds.size());
  Rng rng(seed);
  Sample s = maxmin_from(ds, k, rng.below(ds.size()));
  s.seed = seed;
  return s;
}

/// k distinct indices uniformly without replacement (partial Fisher-Yates).
inline Sample random_sample(const Dataset& ds, std::size_t k, std::uint64_t seed) {
  const std::size_t n = ds.size();
  detail::require_k(k, n);
  detail::Stopwatch clock;
  Rng rng(seed);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) std::swap(perm[i], perm[i + rng.below(n - i)]);
  perm.resize(k);
  Sample s = detail::make_index_sample(ds, std::move(perm), "random", seed);
  s.elapsed_seconds = clock.seconds();
  return s;
}

/// Distance from every point to its K-th nearest other point.
inline std::vector<double> kth_neighbor_distances(std::span<const Point> pts, std::size_t K) {
  namespace bg = boost::geometry;
  namespace bgi = boost::geometry::index;
  using BPoint = bg::model::point<double, 2, bg::cs::cartesian>;
  using Entry = std::pair<BPoint, std::size_t>;

  std::vector<Entry> entries;
  entries.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) entries.emplace_back(BPoint(pts[i].x, pts[i].y), i);
  const bgi::rtree<Entry, bgi::rstar<16>> tree(entries.begin(), entries.end());

  std::vector<double> out(pts.size());
  std::vector<Entry> hits;
  std::vector<double> d2;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    hits.clear();
    // K + 1 because the query point is its own nearest neighbor.
    tree.query(bgi::nearest(entries[i].first, static_cast<unsigned>(K + 1)), std::back_inserter(hits));
    d2.clear();
    for (const auto& [p, j] : hits) d2.push_back(squared_distance(pts[i], pts[j]));
    std::ranges::sort(d2);
    out[i] = std::sqrt(d2[std::min(K, d2.size() - 1)]);
  }
  return out;
}

/// Density-biased sampling: draws k points without replacement with probability
/// proportional to the distance to the K-th nearest neighbor.
inline Sample dbs(const Dataset& ds, std::size_t k, std::size_t K, std::uint64_t seed) {
  const std::size_t n = ds.size();
  detail::require_k(k, n);
  detail::require(K >= 1 && K < n, "K must satisfy 1 <= K < n");
  detail::Stopwatch clock;
  const auto weight = kth_neighbor_distances(ds.view(), K);

  // Sequential weighted draws without replacement are equivalent to keeping the
  // k largest keys log(u)/w (Efraimidis-Spirakis). Zero-weight points sort last,
  // in random order.
  Rng rng(seed);
  struct Key {
    double primary;
    double secondary;
    std::size_t index;
  };
  std::vector<Key> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = 1.0 - rng.uniform();  // (0, 1]
    const double tie = rng.uniform();
    keys[i] = {weight[i] > 0.0 ? std::log(u) / weight[i] : -std::numeric_limits<double>::infinity(), tie, i};
  }
  auto larger = [](const Key& a, const Key& b) {
    if (a.primary != b.primary) return a.primary > b.primary;
    if (a.secondary != b.secondary) return a.secondary > b.secondary;
    return a.index < b.index;
  };
  std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(k), keys.end(), larger);
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = keys[i].index;

  Sample s = detail::make_index_sample(ds, std::move(idx), "dbs", seed);
  s.params["K"] = static_cast<double>(K);
  s.elapsed_seconds = clock.seconds();
  return s;
}

struct BlueNoiseParams {
  std::optional<double> r0;  // defaults to sqrt(1/k)
  std::size_t max_fail = 1000;
  double shrink = 0.7;
};

/// Dart throwing over the dataset: a random unselected point is accepted when
/// its distance to the sample is at least r; after max_fail consecutive
/// rejections r shrinks by `shrink`. Once r falls to rounding level it becomes 0
/// and every throw is accepted, so exactly k points are returned.
inline Sample blue_noise(const Dataset& ds, std::size_t k, const BlueNoiseParams& params, std::uint64_t seed) {
  const std::size_t n = ds.size();
  detail::require_k(k, n);
  detail::require(params.shrink > 0.0 && params.shrink < 1.0, "shrink must lie in (0, 1)");
  detail::require(params.max_fail >= 1, "max_fail must be at least 1");
  const double r0 = params.r0.value_or(std::sqrt(1.0 / static_cast<double>(k)));
  detail::require(r0 >= 0.0, "r0 must be non-negative");
  detail::Stopwatch clock;

  Rng rng(seed);
  std::vector<std::size_t> candidates(n);
  std::iota(candidates.begin(), candidates.end(), std::size_t{0});
  std::vector<std::size_t> selected;
  selected.reserve(k);

  double r = r0;
  PointBuckets accepted(r > 0.0 ? std::max(r, 1.0 / 1024.0) : 1.0);
  std::size_t fails = 0;
  std::size_t shrinks = 0;
  while (selected.size() < k) {
    const std::size_t slot = rng.below(candidates.size());
    const std::size_t i = candidates[slot];
    const Point p = ds.points[i];
    if (r == 0.0 || !accepted.any_within(p, r)) {
      selected.push_back(i);
      accepted.insert(p);
      candidates[slot] = candidates.back();
      candidates.pop_back();
      fails = 0;
      continue;
    }
    if (++fails >= params.max_fail) {
      fails = 0;
      ++shrinks;
      r *= params.shrink;
      if (r < 1e-12) r = 0.0;
      if (r > 0.0 && r < accepted.cell_size() / 2.0) accepted.rebuild(std::max(r, 1.0 / 1024.0));
    }
  }

  Sample s = detail::make_index_sample(ds, std::move(selected), "bluenoise", seed);
  s.params["r0"] = r0;
  s.params["final_r"] = r;
  s.params["max_fail"] = static_cast<double>(params.max_fail);
  s.params["shrink"] = params.shrink;
  s.params["shrinks"] = static_cast<double>(shrinks);
  s.elapsed_seconds = clock.seconds();
  return s;
}

}  // namespace paws
