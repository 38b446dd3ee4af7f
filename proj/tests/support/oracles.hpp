#pragma once

// Slow, independent reference implementations used to check the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "paws/dataset.hpp"
#include "paws/grid.hpp"

namespace oracle {

/// Dense two-phase tableau simplex with Bland's rule for
///   min c.x  s.t.  A x = b (b >= 0), x >= 0.
/// A is row-major m x n. Returns the optimal objective.
inline double simplex_min(std::vector<std::vector<long double>> A, std::vector<long double> b,
                          const std::vector<long double>& c) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  const long double eps = 1e-15L;
  // Columns: n structural, m artificial, then rhs.
  const std::size_t width = n + m + 1;
  std::vector<std::vector<long double>> T(m, std::vector<long double>(width, 0.0L));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
    T[i][n + i] = 1.0L;
    T[i][width - 1] = b[i];
    basis[i] = n + i;
  }

  auto pivot = [&](std::size_t row, std::size_t col) {
    const long double p = T[row][col];
    for (auto& v : T[row]) v /= p;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row || T[i][col] == 0.0L) continue;
      const long double f = T[i][col];
      for (std::size_t j = 0; j < width; ++j) T[i][j] -= f * T[row][j];
    }
    basis[row] = col;
  };

  // Runs simplex on the objective `cost` over columns [0, allowed).
  auto optimize = [&](const std::vector<long double>& cost, std::size_t allowed) {
    while (true) {
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed; ++j) {
        long double rc = cost[j];
        for (std::size_t i = 0; i < m; ++i) rc -= cost[basis[i]] * T[i][j];
        if (rc < -eps) {
          enter = j;  // Bland: lowest index
          break;
        }
      }
      if (enter == allowed) return;
      std::size_t leave = m;
      long double best = std::numeric_limits<long double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        if (T[i][enter] <= eps) continue;
        const long double ratio = T[i][width - 1] / T[i][enter];
        if (ratio < best - eps || (std::fabs(ratio - best) <= eps && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave == m) throw std::runtime_error("oracle LP unbounded");
      pivot(leave, enter);
    }
  };

  std::vector<long double> phase1(n + m, 0.0L);
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = 1.0L;
  optimize(phase1, n + m);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] >= n) {
      if (std::fabs(T[i][width - 1]) > 1e-12L) throw std::runtime_error("oracle LP infeasible");
      for (std::size_t j = 0; j < n; ++j)
        if (std::fabs(T[i][j]) > eps) {
          pivot(i, j);
          break;
        }
    }
  std::vector<long double> phase2(n + m, 0.0L);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
  optimize(phase2, n);
  long double total = 0.0L;
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) total += c[basis[i]] * T[i][width - 1];
  return static_cast<double>(total);
}

/// Balanced transportation problem as an explicit LP. The last demand
/// constraint is implied by the others and is left out.
inline double transport_lp(const std::vector<double>& supply, const std::vector<double>& demand,
                           const std::vector<double>& cost) {
  const std::size_t S = supply.size();
  const std::size_t T = demand.size();
  const long double ssum = std::accumulate(supply.begin(), supply.end(), 0.0L);
  const long double tsum = std::accumulate(demand.begin(), demand.end(), 0.0L);
  std::vector<std::vector<long double>> A;
  std::vector<long double> b;
  for (std::size_t i = 0; i < S; ++i) {
    std::vector<long double> row(S * T, 0.0L);
    for (std::size_t j = 0; j < T; ++j) row[i * T + j] = 1.0L;
    A.push_back(row);
    b.push_back(supply[i] / ssum);
  }
  for (std::size_t j = 0; j + 1 < T; ++j) {
    std::vector<long double> row(S * T, 0.0L);
    for (std::size_t i = 0; i < S; ++i) row[i * T + j] = 1.0L;
    A.push_back(row);
    b.push_back(demand[j] / tsum);
  }
  std::vector<long double> c(cost.begin(), cost.end());
  return simplex_min(A, b, c);
}

/// EMD between two same-shape histograms via the LP above, with Euclidean
/// bin-center costs.
inline double emd_lp(const std::vector<double>& p, const std::vector<double>& q, int width) {
  const std::size_t n = p.size();
  std::vector<double> cost(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double dr = static_cast<double>(static_cast<int>(i) / width - static_cast<int>(j) / width);
      const double dc = static_cast<double>(static_cast<int>(i) % width - static_cast<int>(j) % width);
      cost[i * n + j] = std::sqrt(dr * dr + dc * dc);
    }
  return transport_lp(p, q, cost);
}

/// Symmetric (whole-sample) reflection of an index into [0, n).
inline int mirror(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

/// Direct 2-D Gaussian blur (no separability) with mirrored borders, kernel
/// radius ceil(truncate * sigma), weights normalized to sum 1.
inline std::vector<double> blur_2d(const std::vector<double>& img, int w, int h, double sigma,
                                   double truncate = 3.0) {
  const int radius = static_cast<int>(std::ceil(truncate * sigma));
  std::vector<double> kernel;
  double norm = 0.0;
  for (int dr = -radius; dr <= radius; ++dr)
    for (int dc = -radius; dc <= radius; ++dc) {
      const double v = std::exp(-(dr * dr + dc * dc) / (2.0 * sigma * sigma));
      kernel.push_back(v);
      norm += v;
    }
  std::vector<double> out(img.size(), 0.0);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      std::size_t t = 0;
      for (int dr = -radius; dr <= radius; ++dr)
        for (int dc = -radius; dc <= radius; ++dc, ++t)
          acc += kernel[t] * img[static_cast<std::size_t>(mirror(r + dr, h) * w + mirror(c + dc, w))];
      out[static_cast<std::size_t>(r * w + c)] = acc / norm;
    }
  return out;
}

/// Center-surround saliency computed from direct 2-D blurs.
inline std::vector<double> center_surround(const std::vector<double>& img, int w, int h) {
  std::vector<double> sum(img.size(), 0.0);
  const double scales[3][2] = {{1, 4}, {2, 8}, {4, 16}};
  for (const auto& s : scales) {
    const auto c = blur_2d(img, w, h, s[0]);
    const auto g = blur_2d(img, w, h, s[1]);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += std::fabs(c[i] - g[i]);
  }
  const double peak = *std::max_element(sum.begin(), sum.end());
  if (peak > 0.0)
    for (auto& v : sum) v /= peak;
  return sum;
}

/// Gaussian KDE at every point, all pairs, no cutoff; max-normalized.
inline std::vector<double> kde_all_pairs(const std::vector<paws::Point>& pts) {
  const std::size_t n = pts.size();
  auto sd = [&](double paws::Point::*axis) {
    double mean = 0.0;
    for (const auto& p : pts) mean += p.*axis;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (const auto& p : pts) ss += (p.*axis - mean) * (p.*axis - mean);
    return std::sqrt(ss / static_cast<double>(n - 1));
  };
  const double factor = std::pow(static_cast<double>(n), -1.0 / 6.0);
  const double hx = sd(&paws::Point::x) * factor;
  const double hy = sd(&paws::Point::y) * factor;
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double u = (pts[i].x - pts[j].x) / hx;
      const double v = (pts[i].y - pts[j].y) / hy;
      out[i] += std::exp(-0.5 * (u * u + v * v));
    }
  const double peak = *std::max_element(out.begin(), out.end());
  for (auto& v : out) v /= peak;
  return out;
}

/// SSIM with the three factors evaluated separately (luminance, contrast, structure).
inline double ssim_three_term(const std::vector<double>& a, const std::vector<double>& b, int w, int h,
                              int win = 8) {
  const double C1 = 0.0001, C2 = 0.0009, C3 = C2 / 2.0;
  double total = 0.0;
  int count = 0;
  for (int r0 = 0; r0 < h; r0 += win)
    for (int c0 = 0; c0 < w; c0 += win) {
      std::vector<double> xa, xb;
      for (int r = r0; r < std::min(h, r0 + win); ++r)
        for (int c = c0; c < std::min(w, c0 + win); ++c) {
          xa.push_back(a[static_cast<std::size_t>(r * w + c)]);
          xb.push_back(b[static_cast<std::size_t>(r * w + c)]);
        }
      const double N = static_cast<double>(xa.size());
      const double ma = std::accumulate(xa.begin(), xa.end(), 0.0) / N;
      const double mb = std::accumulate(xb.begin(), xb.end(), 0.0) / N;
      double va = 0, vb = 0, cov = 0;
      for (std::size_t i = 0; i < xa.size(); ++i) {
        va += (xa[i] - ma) * (xa[i] - ma);
        vb += (xb[i] - mb) * (xb[i] - mb);
        cov += (xa[i] - ma) * (xb[i] - mb);
      }
      const double sa = std::sqrt(va / N), sb = std::sqrt(vb / N), sab = cov / N;
      const double l = (2 * ma * mb + C1) / (ma * ma + mb * mb + C1);
      const double c = (2 * sa * sb + C2) / (sa * sa + sb * sb + C2);
      const double s = (sab + C3) / (sa * sb + C3);
      total += l * c * s;
      ++count;
    }
  return total / count;
}

/// Largest achievable minimum pairwise distance over all k-subsets.
inline double maxmin_opt(const std::vector<paws::Point>& pts, std::size_t k) {
  const std::size_t n = pts.size();
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
  double best = 0.0;
  do {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (pick[i] && pick[j]) worst = std::min(worst, paws::distance(pts[i], pts[j]));
    best = std::max(best, worst);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

inline double min_pairwise(const std::vector<paws::Point>& pts) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) worst = std::min(worst, paws::distance(pts[i], pts[j]));
  return worst;
}

}  // namespace oracle
