#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "paws/dataset.hpp"
#include "paws/error.hpp"
#include "paws/metrics.hpp"
#include "paws/raster.hpp"
#include "paws/sample.hpp"
#include "paws/saliency.hpp"

namespace paws {

/// Runs body(i) for i in [0, count) on up to `jobs` threads. Each index writes
/// only its own output slot, so results do not depend on scheduling. The first
/// exception thrown is rethrown after all workers stop.
template <class F>
void parallel_for(std::size_t count, std::size_t jobs, F&& body) {
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(count, 1));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  for (std::size_t t = 0; t < jobs; ++t)
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
}

inline constexpr std::array<const char*, 5> kMetricNames{"ssim", "cc", "sim", "jsd", "emd"};

struct MetricScores {
  double ssim = 0.0, cc = 0.0, sim = 0.0, jsd = 0.0, emd = 0.0;

  static constexpr std::array<double MetricScores::*, 5> kFields{&MetricScores::ssim, &MetricScores::cc,
                                                                  &MetricScores::sim, &MetricScores::jsd,
                                                                  &MetricScores::emd};

  double operator[](std::size_t i) const { return this->*kFields.at(i); }
  double& operator[](std::size_t i) { return this->*kFields.at(i); }
};

inline MetricScores score_all(const SaliencyMap& reference, const SaliencyMap& candidate) {
  return {ssim(reference, candidate), cc(reference, candidate), sim(reference, candidate), jsd(reference, candidate),
          emd(reference, candidate)};
}

struct ConfigScores {
  int point_size = 0;
  double opacity = 0.0;
  MetricScores scores;
};

struct MetricReport {
  std::vector<ConfigScores> per_config;
  MetricScores mean;
  MetricScores ci95;  // half-width
};

/// Half-width of the 95% confidence interval of the mean: Student t with n-1
/// degrees of freedom for n <= 30, normal quantile above, 0 for a single value.
inline double ci95_half_width(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  double q = 1.959963984540054;
  if (n <= 30) q = boost::math::quantile(boost::math::students_t(static_cast<double>(n - 1)), 0.975);
  return q * sd / std::sqrt(static_cast<double>(n));
}

inline MetricReport summarize(std::vector<ConfigScores> rows) {
  detail::require(!rows.empty(), "cannot summarize an empty report");
  MetricReport report;
  report.per_config = std::move(rows);
  std::vector<double> column(report.per_config.size());
  for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
    double sum = 0.0;
    for (std::size_t r = 0; r < column.size(); ++r) {
      column[r] = report.per_config[r].scores[m];
      sum += column[r];
    }
    report.mean[m] = sum / static_cast<double>(column.size());
    report.ci95[m] = ci95_half_width(column);
  }
  return report;
}

/// Saliency maps of the full dataset under each configuration, reusable across
/// every sample of that dataset.
struct ReferenceMaps {
  std::vector<RenderConfig> configs;
  std::vector<SaliencyMap> maps;
};

template <SaliencyModel Model>
ReferenceMaps reference_maps(std::span<const Point> points, const StimulusGrid& grid, const Model& model,
                             Canvas canvas = {}, std::size_t jobs = 1) {
  detail::require(!points.empty(), "cannot evaluate against an empty dataset");
  ReferenceMaps ref;
  ref.configs = grid.configs(canvas);
  ref.maps.resize(ref.configs.size());
  parallel_for(ref.configs.size(), jobs, [&](std::size_t i) { ref.maps[i] = model(render(points, ref.configs[i])); });
  return ref;
}

template <SaliencyModel Model>
MetricReport evaluate_against(const ReferenceMaps& ref, std::span<const Point> sample, const Model& model,
                              std::size_t jobs = 1) {
  detail::require(!sample.empty(), "cannot evaluate an empty sample");
  std::vector<ConfigScores> rows(ref.configs.size());
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    const auto& cfg = ref.configs[i];
    rows[i] = {cfg.point_size_px, cfg.opacity, score_all(ref.maps[i], model(render(sample, cfg)))};
  });
  return summarize(std::move(rows));
}

/// Renders dataset and sample under every grid configuration, applies the
/// model to both and scores the five metrics per configuration.
template <SaliencyModel Model>
MetricReport evaluate(const Dataset& ds, const Sample& sample, const StimulusGrid& grid, const Model& model,
                      Canvas canvas = {}, std::size_t jobs = 1) {
  return evaluate_against(reference_maps(ds.view(), grid, model, canvas, jobs), sample.points, model, jobs);
}

}  // namespace paws
