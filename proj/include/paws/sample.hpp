#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "paws/dataset.hpp"

namespace paws {

/// Sampler output in selection order. `indices` refers into the source dataset
/// and is empty for synthesized samples; `points` is always filled.
struct Sample {
  std::vector<std::size_t> indices;
  std::vector<Point> points;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::map<std::string, double> params;
  double elapsed_seconds = 0.0;

  std::size_t size() const { return points.size(); }
  bool synthesized() const { return indices.empty() && !points.empty(); }
};

namespace detail {

inline void require_k(std::size_t k, std::size_t n) {
  require(k >= 1, "k must be at least 1");
  require(k <= n, "k (" + std::to_string(k) + ") exceeds dataset size (" + std::to_string(n) + ")");
}

inline Sample make_index_sample(const Dataset& ds, std::vector<std::size_t> indices, std::string algorithm,
                                std::uint64_t seed) {
  Sample s;
  s.points.reserve(indices.size());
  for (auto i : indices) s.points.push_back(ds.points[i]);
  s.indices = std::move(indices);
  s.algorithm = std::move(algorithm);
  s.seed = seed;
  return s;
}

}  // namespace detail
}  // namespace paws
