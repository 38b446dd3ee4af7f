#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <unistd.h>
#include <string>
#include <vector>

#include "paws/dataset.hpp"
#include "paws/grid.hpp"
#include "paws/random.hpp"

namespace testutil {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("paws_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::vector<paws::Point> uniform_points(std::size_t n, std::uint64_t seed) {
  paws::Rng rng(seed);
  std::vector<paws::Point> pts(n);
  for (auto& p : pts) p = {rng.uniform(), rng.uniform()};
  return pts;
}

inline paws::Dataset uniform_dataset(std::size_t n, std::uint64_t seed) {
  paws::Dataset ds;
  ds.points = uniform_points(n, seed);
  ds.x_range = {0.0, 1.0};
  ds.y_range = {0.0, 1.0};
  ds.source = "uniform";
  return ds;
}

/// Dataset holding exactly the given points (no renormalization).
inline paws::Dataset dataset_of(std::vector<paws::Point> pts) {
  paws::Dataset ds;
  ds.points = std::move(pts);
  ds.x_range = {0.0, 1.0};
  ds.y_range = {0.0, 1.0};
  return ds;
}

inline paws::SaliencyMap random_map(int w, int h, std::uint64_t seed) {
  paws::Rng rng(seed);
  paws::SaliencyMap m(w, h);
  for (auto& v : m.values()) v = rng.uniform();
  return m;
}

inline std::vector<double> to_vector(const paws::SaliencyMap& m) {
  return {m.values().begin(), m.values().end()};
}

}  // namespace testutil
