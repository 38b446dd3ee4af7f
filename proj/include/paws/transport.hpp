#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "paws/error.hpp"

namespace paws {

namespace detail {

/// Scales non-negative masses to integers summing exactly to `total`
/// (largest-remainder rounding; ties go to the lower index).
inline std::vector<std::int64_t> integer_masses(std::span<const double> mass, std::int64_t total) {
  const double sum = std::accumulate(mass.begin(), mass.end(), 0.0);
  std::vector<std::int64_t> out(mass.size());
  std::vector<std::pair<double, std::size_t>> remainder(mass.size());
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    const double exact = mass[i] / sum * static_cast<double>(total);
    out[i] = static_cast<std::int64_t>(std::floor(exact));
    assigned += out[i];
    remainder[i] = {exact - static_cast<double>(out[i]), i};
  }
  std::ranges::sort(remainder, [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });
  for (std::size_t t = 0; assigned < total; ++t, ++assigned) ++out[remainder[t % remainder.size()].second];
  // Every positive mass keeps at least one unit so no node drops out of the tree.
  const auto largest = static_cast<std::size_t>(std::distance(out.begin(), std::max_element(out.begin(), out.end())));
  for (std::size_t i = 0; i < out.size(); ++i)
    if (mass[i] > 0.0 && out[i] == 0) {
      out[i] = 1;
      --out[largest];
    }
  return out;
}

}  // namespace detail

/// Exact balanced transportation problem solved with the primal network simplex
/// on the bipartite supply/demand graph.
///
/// Masses are scaled to integers (2^40 total) and perturbed (supply_i += 1 after
/// multiplying by S+T+1; the last demand absorbs S), which makes every basis
/// nondegenerate: each pivot strictly lowers the cost, so the method cannot
/// cycle. The effect of scaling and perturbation on the returned cost is below
/// 1e-9 relative.
class TransportSolver {
 public:
  /// `cost` is row-major, supplies x demands. Both mass vectors must have a
  /// positive sum; they are normalized to the same total.
  static double solve(std::span<const double> supply, std::span<const double> demand, std::span<const double> cost) {
    TransportSolver solver(supply, demand, cost);
    return solver.run();
  }

 private:
  struct Arc {
    std::int32_t s;
    std::int32_t t;  // demand index
    std::int64_t flow;
  };

  TransportSolver(std::span<const double> supply, std::span<const double> demand, std::span<const double> cost) {
    // Zero-mass rows and columns never carry flow; drop them.
    for (std::size_t i = 0; i < supply.size(); ++i)
      if (supply[i] > 0.0) rows_.push_back(i);
    for (std::size_t j = 0; j < demand.size(); ++j)
      if (demand[j] > 0.0) cols_.push_back(j);
    detail::require(!rows_.empty() && !cols_.empty(), "transport needs positive total mass on both sides");
    detail::require(cost.size() == supply.size() * demand.size(), "cost matrix size mismatch");
    S_ = rows_.size();
    T_ = cols_.size();
    compact_cost_.resize(S_ * T_);
    for (std::size_t i = 0; i < S_; ++i)
      for (std::size_t j = 0; j < T_; ++j) compact_cost_[i * T_ + j] = cost[rows_[i] * demand.size() + cols_[j]];

    std::vector<double> a(S_), b(T_);
    for (std::size_t i = 0; i < S_; ++i) a[i] = supply[rows_[i]];
    for (std::size_t j = 0; j < T_; ++j) b[j] = demand[cols_[j]];
    constexpr std::int64_t kTotal = std::int64_t{1} << 40;
    const auto ai = detail::integer_masses(a, kTotal);
    const auto bi = detail::integer_masses(b, kTotal);
    const auto M = static_cast<std::int64_t>(S_ + T_ + 1);
    scale_ = static_cast<double>(kTotal) * static_cast<double>(M);
    supply_.resize(S_);
    demand_.resize(T_);
    for (std::size_t i = 0; i < S_; ++i) supply_[i] = ai[i] * M + 1;
    for (std::size_t j = 0; j < T_; ++j) demand_[j] = bi[j] * M;
    demand_.back() += static_cast<std::int64_t>(S_);
  }

  double c(std::size_t s, std::size_t t) const { return compact_cost_[s * T_ + t]; }

  // Node ids: supplies 0..S-1, demands S..S+T-1.
  std::size_t node_count() const { return S_ + T_; }

  void initial_basis() {
    // Matrix-minimum rule: cheapest arcs first; each allocation exhausts a row
    // or a column, which yields a spanning tree under nondegeneracy.
    std::vector<std::uint32_t> order(S_ * T_);
    std::iota(order.begin(), order.end(), 0u);
    std::ranges::sort(order, [&](std::uint32_t x, std::uint32_t y) {
      const double cx = c(x / T_, x % T_);
      const double cy = c(y / T_, y % T_);
      return cx < cy || (cx == cy && x < y);
    });
    auto sup = supply_;
    auto dem = demand_;
    for (auto id : order) {
      const std::size_t s = id / T_;
      const std::size_t t = id % T_;
      if (sup[s] == 0 || dem[t] == 0) continue;
      const std::int64_t f = std::min(sup[s], dem[t]);
      sup[s] -= f;
      dem[t] -= f;
      add_arc({static_cast<std::int32_t>(s), static_cast<std::int32_t>(t), f});
      if (arcs_.size() == S_ + T_ - 1) break;
    }
    if (arcs_.size() != S_ + T_ - 1) throw Error("transport: failed to build an initial spanning tree");
  }

  void add_arc(const Arc& arc) {
    const std::size_t id = arcs_.size();
    arcs_.push_back(arc);
    adj_[static_cast<std::size_t>(arc.s)].push_back(id);
    adj_[S_ + static_cast<std::size_t>(arc.t)].push_back(id);
  }

  std::size_t other_end(std::size_t arc_id, std::size_t node) const {
    const Arc& a = arcs_[arc_id];
    const std::size_t s = static_cast<std::size_t>(a.s);
    return node == s ? S_ + static_cast<std::size_t>(a.t) : s;
  }

  /// Roots the tree at supply 0: parent links, depths and potentials with
  /// u_s + v_t = c(s, t) on every tree arc.
  void root_tree() {
    const std::size_t N = node_count();
    parent_arc_.assign(N, SIZE_MAX);
    depth_.assign(N, 0);
    potential_.assign(N, 0.0);
    visited_.assign(N, false);
    stack_.clear();
    stack_.push_back(0);
    visited_[0] = true;
    while (!stack_.empty()) {
      const std::size_t v = stack_.back();
      stack_.pop_back();
      for (auto id : adj_[v]) {
        const std::size_t w = other_end(id, v);
        if (visited_[w]) continue;
        visited_[w] = true;
        parent_arc_[w] = id;
        depth_[w] = depth_[v] + 1;
        const Arc& a = arcs_[id];
        potential_[w] = c(static_cast<std::size_t>(a.s), static_cast<std::size_t>(a.t)) - potential_[v];
        stack_.push_back(w);
      }
    }
  }

  double reduced_cost(std::size_t s, std::size_t t) const { return c(s, t) - potential_[s] - potential_[S_ + t]; }

  /// Block pricing: most negative reduced cost within the first block that has one.
  bool find_entering(std::size_t& es, std::size_t& et) {
    const std::size_t m = S_ * T_;
    const std::size_t block = std::max<std::size_t>(static_cast<std::size_t>(std::sqrt(static_cast<double>(m))), 16);
    double best = -tolerance_;
    std::size_t best_id = m;
    std::size_t scanned = 0;
    std::size_t in_block = 0;
    while (scanned < m) {
      const std::size_t id = cursor_;
      cursor_ = cursor_ + 1 == m ? 0 : cursor_ + 1;
      ++scanned;
      const double rc = reduced_cost(id / T_, id % T_);
      if (rc < best) {
        best = rc;
        best_id = id;
      }
      if (++in_block == block) {
        if (best_id != m) break;
        in_block = 0;
      }
    }
    if (best_id == m) return false;
    es = best_id / T_;
    et = best_id % T_;
    return true;
  }

  void pivot(std::size_t es, std::size_t et) {
    // Cycle: entering arc s->t (+), then the tree path from t back to s,
    // alternating - (traversed demand->supply) and + (supply->demand).
    minus_.clear();
    plus_.clear();
    std::size_t u = es;
    std::size_t v = S_ + et;
    auto climb = [&](std::size_t& node, bool from_supply_side) {
      const std::size_t id = parent_arc_[node];
      const bool child_is_supply = node < S_;
      // Walking up from t: a demand child means the cycle crosses demand->supply.
      const bool is_minus = from_supply_side ? child_is_supply : !child_is_supply;
      (is_minus ? minus_ : plus_).push_back(id);
      node = other_end(id, node);
    };
    while (depth_[u] > depth_[v]) climb(u, true);
    while (depth_[v] > depth_[u]) climb(v, false);
    while (u != v) {
      climb(u, true);
      climb(v, false);
    }
    std::int64_t theta = std::numeric_limits<std::int64_t>::max();
    std::size_t leaving = SIZE_MAX;
    for (auto id : minus_) {
      if (arcs_[id].flow < theta || (arcs_[id].flow == theta && id < leaving)) {
        theta = arcs_[id].flow;
        leaving = id;
      }
    }
    for (auto id : minus_) arcs_[id].flow -= theta;
    for (auto id : plus_) arcs_[id].flow += theta;

    // Reuse the leaving arc's slot for the entering arc.
    auto unlink = [&](std::size_t node, std::size_t id) {
      auto& list = adj_[node];
      list.erase(std::find(list.begin(), list.end(), id));
    };
    const Arc old = arcs_[leaving];
    unlink(static_cast<std::size_t>(old.s), leaving);
    unlink(S_ + static_cast<std::size_t>(old.t), leaving);
    arcs_[leaving] = {static_cast<std::int32_t>(es), static_cast<std::int32_t>(et), theta};
    adj_[es].push_back(leaving);
    adj_[S_ + et].push_back(leaving);
  }

  double run() {
    adj_.assign(node_count(), {});
    double max_cost = 0.0;
    for (std::size_t s = 0; s < S_; ++s)
      for (std::size_t t = 0; t < T_; ++t) max_cost = std::max(max_cost, std::abs(c(s, t)));
    tolerance_ = 1e-12 * std::max(1.0, max_cost);

    initial_basis();
    root_tree();
    std::size_t es = 0, et = 0;
    const std::size_t pivot_limit = 50 * S_ * T_ + 1000;
    std::size_t pivots = 0;
    while (find_entering(es, et)) {
      if (++pivots > pivot_limit) throw Error("transport: pivot limit exceeded");
      pivot(es, et);
      root_tree();
    }
    double total = 0.0;
    for (const auto& a : arcs_)
      total += static_cast<double>(a.flow) * c(static_cast<std::size_t>(a.s), static_cast<std::size_t>(a.t));
    return total / scale_;
  }

  std::vector<double> compact_cost_;
  std::vector<std::size_t> rows_, cols_;
  std::size_t S_ = 0, T_ = 0;
  std::vector<std::int64_t> supply_, demand_;
  double scale_ = 1.0;
  double tolerance_ = 0.0;

  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> parent_arc_;
  std::vector<std::size_t> depth_;
  std::vector<double> potential_;
  std::vector<bool> visited_;
  std::vector<std::size_t> stack_;
  std::vector<std::size_t> minus_, plus_;
  std::size_t cursor_ = 0;
};

}  // namespace paws
