#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "paws/dataset.hpp"
#include "paws/error.hpp"
#include "paws/perception.hpp"
#include "paws/random.hpp"
#include "paws/sample.hpp"
#include "paws/samplers.hpp"

namespace paws {

/// Axis-aligned cell [x0,x1) x [y0,y1), closed at the global boundary 1.
struct Box {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
  double weight = 0.0;  // mean perception weight of the member points
  std::size_t count = 0;

  bool contains(Point p) const {
    const bool in_x = p.x >= x0 && (p.x < x1 || (x1 == 1.0 && p.x <= 1.0));
    const bool in_y = p.y >= y0 && (p.y < y1 || (y1 == 1.0 && p.y <= 1.0));
    return in_x && in_y;
  }
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  /// Quad-tree level, recovered from the side length.
  int depth() const { return static_cast<int>(std::lround(-std::log2(width()))); }
};

struct PartitionParams {
  double lambda = 0.003;  // Chamfer threshold
  double sigma = 0.01;    // perception-weight variance threshold
  std::size_t eval_points = 64;
  std::size_t min_leaf = 4;
  int max_depth = 12;

  static PartitionParams low() { return {0.001, 0.001}; }
  static PartitionParams medium() { return {0.002, 0.001}; }
  static PartitionParams high() { return {0.003, 0.01}; }
};

struct Partition {
  std::vector<Box> boxes;
  double lambda = 0.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::size_t eval_points = 64;
  std::size_t min_leaf = 4;
  int max_depth = 12;

  std::size_t size() const { return boxes.size(); }
};

/// Symmetric Chamfer distance: half the sum of the two mean nearest-neighbor distances.
inline double chamfer(std::span<const Point> a, std::span<const Point> b) {
  detail::require(!a.empty() && !b.empty(), "chamfer distance of an empty set");
  auto directed = [](std::span<const Point> from, std::span<const Point> to) {
    double total = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) best = std::min(best, squared_distance(p, q));
      total += std::sqrt(best);
    }
    return total / static_cast<double>(from.size());
  };
  return 0.5 * (directed(a, b) + directed(b, a));
}

/// Uniform point inside a box.
inline Point uniform_in(const Box& box, Rng& rng) {
  const double u = rng.uniform();
  const double v = rng.uniform();
  return {box.x0 + u * box.width(), box.y0 + v * box.height()};
}

/// Seed of the Chamfer evaluation draw for a box; depends only on the box and
/// the global seed, never on traversal order.
inline std::uint64_t box_seed(const Box& box, std::uint64_t seed) {
  std::uint64_t s = combine_seed(seed, box.x0);
  s = combine_seed(s, box.y0);
  s = combine_seed(s, box.x1);
  return combine_seed(s, box.y1);
}

/// The uniform reference draw the Chamfer criterion compares a box against.
inline std::vector<Point> evaluation_draw(const Box& box, std::size_t count, std::size_t eval_points,
                                          std::uint64_t seed) {
  Rng rng(box_seed(box, seed));
  std::vector<Point> draw(std::min(count, eval_points));
  for (auto& p : draw) p = uniform_in(box, rng);
  return draw;
}

namespace detail {

class PartitionBuilder {
 public:
  PartitionBuilder(std::span<const Point> pts, std::span<const double> weights, const PartitionParams& params,
                   std::uint64_t seed)
      : pts_(pts), weights_(weights), params_(params), seed_(seed) {}

  std::vector<Box> run() {
    std::vector<std::size_t> idx(pts_.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    split(Box{}, idx, 0);
    return std::move(boxes_);
  }

 private:
  void split(Box box, std::span<std::size_t> members, int depth) {
    box.count = members.size();
    double mean = 0.0;
    for (auto i : members) mean += weights_[i];
    mean /= static_cast<double>(members.size());
    box.weight = mean;

    const bool guard = members.size() <= params_.min_leaf || depth >= params_.max_depth;
    if (guard || !needs_split(box, members, mean)) {
      boxes_.push_back(box);
      return;
    }
    const double mx = 0.5 * (box.x0 + box.x1);
    const double my = 0.5 * (box.y0 + box.y1);
    // Quadrants ordered bottom-left, bottom-right, top-left, top-right.
    auto quadrant = [&](std::size_t i) { return (pts_[i].x >= mx ? 1 : 0) + (pts_[i].y >= my ? 2 : 0); };
    std::ranges::stable_sort(members, {}, quadrant);
    const Box children[4] = {{box.x0, box.y0, mx, my}, {mx, box.y0, box.x1, my},
                             {box.x0, my, mx, box.y1}, {mx, my, box.x1, box.y1}};
    std::size_t begin = 0;
    for (int q = 0; q < 4; ++q) {
      std::size_t end = begin;
      while (end < members.size() && quadrant(members[end]) == q) ++end;
      if (end > begin) split(children[q], members.subspan(begin, end - begin), depth + 1);
      begin = end;
    }
  }

  bool needs_split(const Box& box, std::span<const std::size_t> members, double mean) {
    double var = 0.0;
    for (auto i : members) var += (weights_[i] - mean) * (weights_[i] - mean);
    var /= static_cast<double>(members.size());
    if (var > params_.sigma) return true;
    scratch_.clear();
    for (auto i : members) scratch_.push_back(pts_[i]);
    return chamfer(scratch_, evaluation_draw(box, members.size(), params_.eval_points, seed_)) > params_.lambda;
  }

  std::span<const Point> pts_;
  std::span<const double> weights_;
  PartitionParams params_;
  std::uint64_t seed_;
  std::vector<Box> boxes_;
  std::vector<Point> scratch_;
};

}  // namespace detail

/// Perception-aware quad-tree compression. A box is split into its four
/// midpoint quadrants while the Chamfer distance between its points and a
/// uniform draw of min(count, eval_points) points exceeds lambda, or the
/// variance of its perception weights exceeds sigma. Boxes with at most
/// min_leaf points or at max_depth are never split; empty quadrants are dropped.
inline Partition build_partition(const Dataset& ds, std::span<const double> weights, const PartitionParams& params,
                                 std::uint64_t seed) {
  detail::require(params.lambda > 0.0, "lambda must be positive");
  detail::require(params.sigma > 0.0, "sigma must be positive");
  detail::require(params.eval_points >= 1, "eval_points must be at least 1");
  detail::require(params.max_depth >= 0, "max_depth must be non-negative");
  detail::require(ds.size() >= 1, "cannot partition an empty dataset");
  detail::require(weights.size() == ds.size(), "perception weights must align with the dataset");

  Partition part;
  part.boxes = detail::PartitionBuilder(ds.view(), weights, params, seed).run();
  part.lambda = params.lambda;
  part.sigma = params.sigma;
  part.seed = seed;
  part.eval_points = params.eval_points;
  part.min_leaf = params.min_leaf;
  part.max_depth = params.max_depth;
  return part;
}

inline Partition build_partition(const Dataset& ds, const PerceptionWeights& weights, const PartitionParams& params,
                                 std::uint64_t seed) {
  return build_partition(ds, std::span<const double>(weights.weights), params, seed);
}

/// Approximate PAwS over a compressed representation. The pool holds C uniform
/// representatives per box carrying the box weight; each step adds the pool
/// point maximizing weight * distance-to-sample and replaces it with a fresh
/// draw from the same box. Only the partition is read.
inline Sample appro_paws(const Partition& partition, std::size_t k, std::size_t C, std::uint64_t seed) {
  detail::require(k >= 1, "k must be at least 1");
  detail::require(C >= 1, "C must be at least 1");
  detail::require(!partition.boxes.empty(), "partition has no boxes");
  detail::Stopwatch clock;

  const auto& boxes = partition.boxes;
  const std::size_t pool = boxes.size() * C;
  Rng rng(seed);
  std::vector<double> xs(pool), ys(pool), ww(pool), min_d2(pool, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> owner(pool);
  for (std::size_t b = 0, slot = 0; b < boxes.size(); ++b)
    for (std::size_t c = 0; c < C; ++c, ++slot) {
      const Point p = uniform_in(boxes[b], rng);
      xs[slot] = p.x;
      ys[slot] = p.y;
      ww[slot] = boxes[b].weight * boxes[b].weight;
      owner[slot] = b;
    }

  std::vector<Point> chosen;
  chosen.reserve(k);
  std::size_t next = rng.below(pool);
  while (true) {
    const Point p{xs[next], ys[next]};
    chosen.push_back(p);
    if (chosen.size() == k) break;

    // Replace the chosen representative; its cache needs the whole sample.
    const Point fresh = uniform_in(boxes[owner[next]], rng);
    xs[next] = fresh.x;
    ys[next] = fresh.y;
    double d2 = std::numeric_limits<double>::infinity();
    for (const auto& q : chosen) d2 = std::min(d2, squared_distance(fresh, q));
    min_d2[next] = d2;

    double best = -1.0;
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < pool; ++i) {
      const double dx = xs[i] - p.x;
      const double dy = ys[i] - p.y;
      const double m = std::min(min_d2[i], dx * dx + dy * dy);
      min_d2[i] = m;
      const double score = ww[i] * m;
      if (score > best) {
        best = score;
        best_idx = i;
      }
    }
    next = best_idx;
  }

  Sample s;
  s.points = std::move(chosen);
  s.algorithm = "appropaws";
  s.seed = seed;
  s.params["C"] = static_cast<double>(C);
  s.params["boxes"] = static_cast<double>(boxes.size());
  s.params["lambda"] = partition.lambda;
  s.params["sigma"] = partition.sigma;
  s.elapsed_seconds = clock.seconds();
  return s;
}

}  // namespace paws
