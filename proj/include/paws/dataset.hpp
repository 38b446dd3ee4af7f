#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "paws/error.hpp"
#include "paws/random.hpp"

namespace paws {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double squared_distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double distance(Point a, Point b) { return std::sqrt(squared_distance(a, b)); }

struct AxisRange {
  double min = 0.0;
  double max = 1.0;

  bool degenerate() const { return !(max > min); }
};

/// Points normalized into the unit square plus what is needed to undo it.
struct Dataset {
  std::vector<Point> points;
  std::string source;
  AxisRange x_range;
  AxisRange y_range;
  std::size_t skipped_rows = 0;

  std::size_t size() const { return points.size(); }
  std::span<const Point> view() const { return points; }
};

namespace detail {

inline double normalize_value(double v, AxisRange r) {
  if (r.degenerate()) return 0.5;
  return std::clamp((v - r.min) / (r.max - r.min), 0.0, 1.0);
}

inline AxisRange range_of(std::span<const Point> pts, double Point::*axis) {
  AxisRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& p : pts) {
    r.min = std::min(r.min, p.*axis);
    r.max = std::max(r.max, p.*axis);
  }
  return r;
}

inline std::optional<double> parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') text = text.substr(1, text.size() - 2);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == ',' && !quoted) {
      cells.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  cells.push_back(line.substr(start));
  return cells;
}

inline std::string trim_cell(std::string_view cell) {
  std::string s(cell);
  auto not_space = [](unsigned char c) { return !std::isspace(c) && c != '"'; };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

}  // namespace detail

/// Builds a dataset from raw coordinates with per-axis min-max normalization.
/// Degenerate axes (all values equal) map to 0.5.
inline Dataset normalize(std::span<const Point> raw, std::string source) {
  detail::require(!raw.empty(), "dataset must contain at least one point");
  Dataset ds;
  ds.source = std::move(source);
  ds.x_range = detail::range_of(raw, &Point::x);
  ds.y_range = detail::range_of(raw, &Point::y);
  ds.points.reserve(raw.size());
  for (const auto& p : raw)
    ds.points.push_back({detail::normalize_value(p.x, ds.x_range), detail::normalize_value(p.y, ds.y_range)});
  return ds;
}

/// Maps a normalized point back to raw coordinates.
inline Point denormalize(const Dataset& ds, Point p) {
  auto undo = [](double v, AxisRange r) { return r.degenerate() ? r.min : r.min + v * (r.max - r.min); };
  return {undo(p.x, ds.x_range), undo(p.y, ds.y_range)};
}

/// A CSV column chosen by zero-based position or by header name.
using ColumnSelector = std::variant<std::size_t, std::string>;

/// Interprets "3" as a column index and anything else as a header name.
inline ColumnSelector parse_column_selector(const std::string& text) {
  std::size_t index = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), index);
  if (ec == std::errc{} && ptr == text.data() + text.size()) return index;
  return text;
}

/// Loads two columns of a CSV file. The first row is treated as a header when
/// any of its selected cells is non-numeric. Data rows whose selected cells do
/// not parse as finite numbers are skipped and counted in `skipped_rows`.
inline Dataset load_csv(const std::filesystem::path& path, const ColumnSelector& x_col,
                        const ColumnSelector& y_col) {
  std::ifstream in(path);
  if (!in) throw IoError("file not found: " + path.string());

  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    lines.push_back(std::move(line));
  }
  if (lines.empty()) throw ParseError("no parseable rows in " + path.string());

  const auto first = detail::split_csv_line(lines.front());
  auto by_name = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < first.size(); ++i)
      if (detail::trim_cell(first[i]) == name) return i;
    return std::nullopt;
  };
  auto resolve = [&](const ColumnSelector& sel) -> std::size_t {
    if (const auto* idx = std::get_if<std::size_t>(&sel)) {
      if (*idx >= first.size())
        throw InvalidArgument("column selector not resolvable: index " + std::to_string(*idx));
      return *idx;
    }
    const auto& name = std::get<std::string>(sel);
    if (auto idx = by_name(name)) return *idx;
    throw InvalidArgument("column selector not resolvable: '" + name + "'");
  };
  const std::size_t xi = resolve(x_col);
  const std::size_t yi = resolve(y_col);

  const bool has_header = !detail::parse_double(first[xi]) || !detail::parse_double(first[yi]);
  if (!has_header && (std::holds_alternative<std::string>(x_col) || std::holds_alternative<std::string>(y_col)))
    throw InvalidArgument("column selector not resolvable: file has no header row");

  std::vector<Point> raw;
  raw.reserve(lines.size());
  std::size_t skipped = 0;
  for (std::size_t r = has_header ? 1 : 0; r < lines.size(); ++r) {
    const auto cells = detail::split_csv_line(lines[r]);
    std::optional<double> x, y;
    if (xi < cells.size()) x = detail::parse_double(cells[xi]);
    if (yi < cells.size()) y = detail::parse_double(cells[yi]);
    if (!x || !y) {
      ++skipped;
      continue;
    }
    raw.push_back({*x, *y});
  }
  if (raw.empty()) throw ParseError("no parseable rows in " + path.string());
  Dataset ds = normalize(raw, path.string());
  ds.skipped_rows = skipped;
  return ds;
}

/// Writes `x,y` rows with 9 significant digits.
inline void write_points_csv(std::span<const Point> points, const std::filesystem::path& path, bool header = false) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << std::setprecision(9);
  if (header) out << "x,y\n";
  for (const auto& p : points) out << p.x << ',' << p.y << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

inline void write_dataset_csv(const Dataset& ds, const std::filesystem::path& path, bool header = false) {
  write_points_csv(ds.points, path, header);
}

/// Synthetic "hidden correlation" data: round(corr_fraction * n) points from a
/// unit-variance bivariate Gaussian with correlation rho_main, the rest from an
/// uncorrelated one, jointly min-max normalized.
inline Dataset gen_hidden_correlation(std::size_t n, double corr_fraction, double rho_main, std::uint64_t seed) {
  detail::require(n >= 2, "n must be at least 2");
  detail::require(corr_fraction >= 0.0 && corr_fraction <= 1.0, "corr_fraction must lie in [0,1]");
  detail::require(std::abs(rho_main) <= 1.0, "|rho_main| must be at most 1");

  const auto correlated = static_cast<std::size_t>(std::floor(corr_fraction * static_cast<double>(n) + 0.5));
  const double ortho = std::sqrt(1.0 - rho_main * rho_main);
  Rng rng(seed);
  std::vector<Point> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = rng.normal();
    const double b = rng.normal();
    raw[i] = i < correlated ? Point{a, rho_main * a + ortho * b} : Point{a, b};
  }
  std::ostringstream src;
  src << "hidden_correlation(n=" << n << ",corr_fraction=" << corr_fraction << ",rho=" << rho_main
      << ",seed=" << seed << ")";
  return normalize(raw, src.str());
}

/// round(base * factor^e) for each exponent, rounding halves up.
inline std::vector<std::size_t> sample_size_series(std::size_t base, double factor, std::span<const int> exponents) {
  detail::require(base >= 1, "base must be at least 1");
  detail::require(factor > 0.0, "factor must be positive");
  std::vector<std::size_t> sizes;
  sizes.reserve(exponents.size());
  for (int e : exponents)
    sizes.push_back(static_cast<std::size_t>(std::floor(static_cast<double>(base) * std::pow(factor, e) + 0.5)));
  return sizes;
}

}  // namespace paws
