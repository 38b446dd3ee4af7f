#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "paws/dataset.hpp"
#include "paws/error.hpp"
#include "paws/random.hpp"
#include "paws/sample.hpp"
#include "paws/samplers.hpp"
#include "paws/spatial_grid.hpp"

namespace paws {

struct VasParams {
  double epsilon = std::sqrt(2.0) / 100.0;
  std::size_t max_iters = 50;  // full passes over the candidates
  bool single_pass = false;
};

/// L(S) = sum over data of min(d(x, S), eps)^2.
inline double vas_loss(std::span<const Point> pts, std::span<const std::size_t> sample, double epsilon) {
  double loss = 0.0;
  for (const auto& p : pts) {
    double best = epsilon;
    for (auto j : sample) best = std::min(best, distance(p, pts[j]));
    loss += best * best;
  }
  return loss;
}

namespace detail {

/// Buckets of sample members (dataset indices) supporting insert and erase.
class MemberBuckets {
 public:
  MemberBuckets(std::span<const Point> pts, double cell_size) : pts_(pts), cells_(grid_cells_for(cell_size)) {
    buckets_.resize(static_cast<std::size_t>(cells_) * cells_);
  }
  void insert(std::size_t i) { buckets_[cell(pts_[i])].push_back(i); }
  void erase(std::size_t i) {
    auto& b = buckets_[cell(pts_[i])];
    b.erase(std::find(b.begin(), b.end(), i));
  }
  template <class F>
  void for_each_within(Point p, double r, F&& f) const {
    const double r2 = r * r;
    const int reach = static_cast<int>(std::ceil(r * cells_));
    const int cx = grid_coord(p.x, cells_);
    const int cy = grid_coord(p.y, cells_);
    for (int gy = std::max(0, cy - reach); gy <= std::min(cells_ - 1, cy + reach); ++gy)
      for (int gx = std::max(0, cx - reach); gx <= std::min(cells_ - 1, cx + reach); ++gx)
        for (auto m : buckets_[static_cast<std::size_t>(gy) * cells_ + gx]) {
          const double d2 = squared_distance(p, pts_[m]);
          if (d2 <= r2) f(m, d2);
        }
  }

 private:
  std::size_t cell(Point p) const {
    return static_cast<std::size_t>(grid_coord(p.y, cells_)) * cells_ + grid_coord(p.x, cells_);
  }
  std::span<const Point> pts_;
  int cells_;
  std::vector<std::vector<std::size_t>> buckets_;
};

/// Expand+Shrink state. For each data point we keep its nearest sample member
/// within eps and the capped nearest / second-nearest distances; for each member
/// the loss increase its removal would cause.
class VasState {
 public:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  VasState(std::span<const Point> pts, double eps, std::span<const std::size_t> initial)
      : pts_(pts), eps_(eps), data_(pts, eps), members_(pts, eps),
        nearest_(pts.size(), kNone), d1_(pts.size(), eps), d2_(pts.size(), eps),
        in_sample_(pts.size(), false), removal_(pts.size(), 0.0) {
    for (auto m : initial) {
      in_sample_[m] = true;
      members_.insert(m);
    }
    for (std::size_t i = 0; i < pts.size(); ++i) reassign(i);
    loss_ = 0.0;
    for (double d : d1_) loss_ += d * d;
    for (auto m : initial) refresh_removal(m);
  }

  double loss() const { return loss_; }
  bool in_sample(std::size_t i) const { return in_sample_[i]; }

  /// Best Expand(x)+Shrink move: returns (loss change, member to drop).
  std::pair<double, std::size_t> evaluate(std::size_t x) {
    const Point px = pts_[x];
    double add = 0.0;
    adjust_.clear();
    data_.for_each_within(px, eps_, [&](std::size_t d, double dist2) {
      const double dx = std::min(std::sqrt(dist2), eps_);
      const double d1 = d1_[d];
      if (dx < d1) add += dx * dx - d1 * d1;
      const std::size_t y = nearest_[d];
      if (y == kNone) return;
      const double d2 = d2_[d];
      if (dx < d1) {
        adjust_[y] -= d2 * d2 - d1 * d1;
      } else if (dx < d2) {
        adjust_[y] += dx * dx - d2 * d2;
      }
    });

    // Cheapest removal among members: adjusted ones explicitly, the rest via the
    // ordered set (first entry that was not adjusted).
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_member = kNone;
    auto consider = [&](double cost, std::size_t m) {
      if (cost < best || (cost == best && m < best_member)) {
        best = cost;
        best_member = m;
      }
    };
    for (const auto& [m, delta] : adjust_) consider(removal_[m] + delta, m);
    for (const auto& [cost, m] : order_) {
      if (cost > best) break;
      if (adjust_.contains(m)) continue;
      consider(cost, m);
      break;
    }
    return {add + best, best_member};
  }

  void swap(std::size_t add, std::size_t drop) {
    touched_.clear();
    auto touch = [&](std::size_t d, double) { touched_.push_back(d); };
    data_.for_each_within(pts_[add], eps_, touch);
    data_.for_each_within(pts_[drop], eps_, touch);
    std::ranges::sort(touched_);
    touched_.erase(std::unique(touched_.begin(), touched_.end()), touched_.end());

    std::vector<std::size_t> owners{add};
    double before = 0.0;
    for (auto d : touched_) {
      before += d1_[d] * d1_[d];
      if (nearest_[d] != kNone) owners.push_back(nearest_[d]);
    }

    in_sample_[add] = true;
    members_.insert(add);
    in_sample_[drop] = false;
    members_.erase(drop);
    order_.erase({removal_[drop], drop});
    removal_[drop] = 0.0;

    double after = 0.0;
    for (auto d : touched_) {
      reassign(d);
      after += d1_[d] * d1_[d];
      if (nearest_[d] != kNone) owners.push_back(nearest_[d]);
    }
    loss_ += after - before;

    std::ranges::sort(owners);
    owners.erase(std::unique(owners.begin(), owners.end()), owners.end());
    for (auto m : owners)
      if (in_sample_[m]) refresh_removal(m);
  }

 private:
  void reassign(std::size_t d) {
    std::size_t best = kNone;
    double a = eps_, b = eps_;
    members_.for_each_within(pts_[d], eps_, [&](std::size_t m, double dist2) {
      const double dist = std::sqrt(dist2);
      if (dist >= eps_) return;
      if (dist < a || (dist == a && m < best)) {
        b = a;
        a = dist;
        best = m;
      } else if (dist < b) {
        b = dist;
      }
    });
    nearest_[d] = best;
    d1_[d] = a;
    d2_[d] = b;
  }

  void refresh_removal(std::size_t m) {
    order_.erase({removal_[m], m});
    double cost = 0.0;
    data_.for_each_within(pts_[m], eps_, [&](std::size_t d, double) {
      if (nearest_[d] == m) cost += d2_[d] * d2_[d] - d1_[d] * d1_[d];
    });
    removal_[m] = cost;
    order_.insert({cost, m});
  }

  std::span<const Point> pts_;
  double eps_;
  IndexGrid data_;
  MemberBuckets members_;
  std::vector<std::size_t> nearest_;
  std::vector<double> d1_, d2_;
  std::vector<bool> in_sample_;
  std::vector<double> removal_;
  std::set<std::pair<double, std::size_t>> order_;
  std::unordered_map<std::size_t, double> adjust_;
  std::vector<std::size_t> touched_;
  double loss_ = 0.0;
};

}  // namespace detail

/// Visualization-aware sampling by Expand+Shrink local search. Starts from a
/// random k-subset; for each non-member x in index order, tries adding x and
/// dropping the member whose removal costs least, and keeps the swap when the
/// loss strictly decreases. Stops after a pass without improvement or
/// max_iters passes. `loss_trace`, when given, receives the loss after
/// initialization and after every accepted swap.
inline Sample vas_es(const Dataset& ds, std::size_t k, const VasParams& params, std::uint64_t seed,
                     std::vector<double>* loss_trace = nullptr) {
  const std::size_t n = ds.size();
  detail::require_k(k, n);
  detail::require(params.epsilon > 0.0, "epsilon must be positive");
  detail::Stopwatch clock;

  Rng rng(seed);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) std::swap(perm[i], perm[i + rng.below(n - i)]);
  std::vector<std::size_t> members(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));

  detail::VasState state(ds.view(), params.epsilon, members);
  if (loss_trace) loss_trace->assign(1, state.loss());

  // Keep the member list in selection order: a swap replaces the dropped slot.
  std::vector<std::size_t> slot_of(n, detail::VasState::kNone);
  for (std::size_t s = 0; s < k; ++s) slot_of[members[s]] = s;

  const std::size_t passes_allowed = params.single_pass ? 1 : std::max<std::size_t>(params.max_iters, 1);
  // Improvements smaller than this are rounding noise in the running sum.
  const double tolerance = 1e-12 * params.epsilon * params.epsilon;
  std::size_t passes = 0;
  std::size_t swaps = 0;
  bool improved = k < n;
  while (improved && passes < passes_allowed) {
    improved = false;
    ++passes;
    for (std::size_t x = 0; x < n; ++x) {
      if (state.in_sample(x)) continue;
      const auto [delta, drop] = state.evaluate(x);
      if (drop == detail::VasState::kNone || !(delta < -tolerance)) continue;
      state.swap(x, drop);
      const std::size_t slot = slot_of[drop];
      members[slot] = x;
      slot_of[x] = slot;
      slot_of[drop] = detail::VasState::kNone;
      ++swaps;
      improved = true;
      if (loss_trace) loss_trace->push_back(state.loss());
    }
  }

  Sample s = detail::make_index_sample(ds, std::move(members), "vas", seed);
  s.params["epsilon"] = params.epsilon;
  s.params["max_iters"] = static_cast<double>(params.max_iters);
  s.params["single_pass"] = params.single_pass ? 1.0 : 0.0;
  s.params["passes"] = static_cast<double>(passes);
  s.params["swaps"] = static_cast<double>(swaps);
  s.params["loss"] = state.loss();
  s.elapsed_seconds = clock.seconds();
  return s;
}

}  // namespace paws
