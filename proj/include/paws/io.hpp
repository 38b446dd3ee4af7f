#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "paws/compress.hpp"
#include "paws/dataset.hpp"
#include "paws/error.hpp"
#include "paws/evaluate.hpp"
#include "paws/perception.hpp"
#include "paws/sample.hpp"

namespace paws {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

inline void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

/// Numbered non-blank lines of a text file; throws IoError when unreadable.
inline std::vector<std::pair<std::size_t, std::string>> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("file not found: " + path.string());
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::size_t number = 0;
  for (std::string line; std::getline(in, line);) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    lines.emplace_back(number, std::move(line));
  }
  return lines;
}

/// Splits a data row into exactly `expected` numeric cells.
inline std::vector<double> parse_row(const std::filesystem::path& path, std::size_t line_no, const std::string& line,
                                     std::size_t expected) {
  const auto cells = split_csv_line(line);
  auto fail = [&](const std::string& why) {
    throw ParseError(path.string() + ": line " + std::to_string(line_no) + ": " + why);
  };
  if (cells.size() != expected)
    fail("expected " + std::to_string(expected) + " fields, found " + std::to_string(cells.size()));
  std::vector<double> out(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    const auto v = parse_double(cells[i]);
    if (!v) fail("field " + std::to_string(i + 1) + " is not a number: '" + trim_cell(cells[i]) + "'");
    out[i] = *v;
  }
  return out;
}

inline void expect_header(const std::filesystem::path& path, const std::vector<std::pair<std::size_t, std::string>>& lines,
                          const std::string& header) {
  if (lines.empty()) throw ParseError(path.string() + ": empty file");
  if (lines.front().second != header)
    throw ParseError(path.string() + ": line " + std::to_string(lines.front().first) + ": expected header '" + header +
                     "'");
}

inline Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("file not found: " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

inline void write_json(const Json& j, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

}  // namespace detail

/// Sidecar path next to an artifact: `foo.csv` -> `foo.json`.
inline std::filesystem::path sidecar_path(const std::filesystem::path& artifact) {
  auto p = artifact;
  p.replace_extension(".json");
  return p;
}

// ---- samples ----

inline Json sample_sidecar(const Sample& s, bool include_timing = true) {
  Json j;
  j["algorithm"] = s.algorithm;
  j["seed"] = s.seed;
  j["k"] = s.size();
  Json params = Json::object();
  for (const auto& [key, value] : s.params) params[key] = value;
  j["params"] = params;
  if (include_timing) j["elapsed_seconds"] = s.elapsed_seconds;
  return j;
}

/// CSV `rank,index,x,y`; index is -1 for synthesized points. The sidecar
/// `<stem>.json` records algorithm, seed, params and elapsed seconds.
inline void write_sample(const Sample& s, const std::filesystem::path& path, const Json& extra = Json::object()) {
  auto out = detail::open_for_write(path);
  out << "rank,index,x,y\n";
  for (std::size_t r = 0; r < s.points.size(); ++r) {
    out << r << ',';
    if (s.indices.empty())
      out << -1;
    else
      out << s.indices[r];
    out << ',' << s.points[r].x << ',' << s.points[r].y << '\n';
  }
  detail::finish(out, path);
  Json side = sample_sidecar(s);
  for (const auto& [key, value] : extra.items()) side[key] = value;
  detail::write_json(side, sidecar_path(path));
}

/// Reads the CSV (sidecar optional). Errors name the offending line.
inline Sample read_sample(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  detail::expect_header(path, lines, "rank,index,x,y");
  Sample s;
  bool any_index = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [no, line] = lines[i];
    const auto row = detail::parse_row(path, no, line, 4);
    if (row[0] != static_cast<double>(i - 1))
      throw ParseError(path.string() + ": line " + std::to_string(no) + ": rank out of sequence");
    if (row[1] >= 0.0) {
      any_index = true;
      s.indices.push_back(static_cast<std::size_t>(row[1]));
    }
    s.points.push_back({row[2], row[3]});
  }
  if (s.points.empty()) throw ParseError(path.string() + ": sample has no rows");
  if (any_index && s.indices.size() != s.points.size())
    throw ParseError(path.string() + ": mixed dataset and synthesized rows");
  const auto side = sidecar_path(path);
  if (std::filesystem::exists(side)) {
    const Json j = detail::read_json(side);
    s.algorithm = j.value("algorithm", "");
    s.seed = j.value("seed", std::uint64_t{0});
    s.elapsed_seconds = j.value("elapsed_seconds", 0.0);
    if (j.contains("params"))
      for (const auto& [key, value] : j["params"].items())
        if (value.is_number()) s.params[key] = value.get<double>();
  }
  return s;
}

// ---- partitions ----

inline Json partition_sidecar(const Partition& part) {
  Json j;
  j["lambda"] = part.lambda;
  j["sigma"] = part.sigma;
  j["seed"] = part.seed;
  j["eval_points"] = part.eval_points;
  j["min_leaf"] = part.min_leaf;
  j["max_depth"] = part.max_depth;
  j["box_count"] = part.size();
  return j;
}

/// CSV `x0,y0,x1,y1,weight,count` plus sidecar; together they are the whole
/// input of appro_paws.
inline void write_partition(const Partition& part, const std::filesystem::path& path,
                            const Json& extra = Json::object()) {
  auto out = detail::open_for_write(path);
  out << "x0,y0,x1,y1,weight,count\n";
  for (const auto& b : part.boxes)
    out << b.x0 << ',' << b.y0 << ',' << b.x1 << ',' << b.y1 << ',' << b.weight << ',' << b.count << '\n';
  detail::finish(out, path);
  Json side = partition_sidecar(part);
  for (const auto& [key, value] : extra.items()) side[key] = value;
  detail::write_json(side, sidecar_path(path));
}

inline Partition read_partition(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  detail::expect_header(path, lines, "x0,y0,x1,y1,weight,count");
  Partition part;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [no, line] = lines[i];
    const auto row = detail::parse_row(path, no, line, 6);
    if (!(row[0] < row[2]) || !(row[1] < row[3]) || row[5] < 0.0)
      throw ParseError(path.string() + ": line " + std::to_string(no) + ": invalid box");
    part.boxes.push_back({row[0], row[1], row[2], row[3], row[4], static_cast<std::size_t>(row[5])});
  }
  if (part.boxes.empty()) throw ParseError(path.string() + ": partition has no boxes");
  const auto side = sidecar_path(path);
  if (std::filesystem::exists(side)) {
    const Json j = detail::read_json(side);
    part.lambda = j.value("lambda", 0.0);
    part.sigma = j.value("sigma", 0.0);
    part.seed = j.value("seed", std::uint64_t{0});
    part.eval_points = j.value("eval_points", std::size_t{64});
    part.min_leaf = j.value("min_leaf", std::size_t{4});
    part.max_depth = j.value("max_depth", 12);
  }
  return part;
}

// ---- perception weights ----

/// CSV `index,x,y,q_s,q_d,w_p` and a one-line JSON sidecar.
inline void write_weights(const Dataset& ds, const PerceptionWeights& pw, const std::filesystem::path& path,
                          const Json& sidecar) {
  detail::require(pw.size() == ds.size(), "perception weights must align with the dataset");
  auto out = detail::open_for_write(path);
  out << "index,x,y,q_s,q_d,w_p\n";
  for (std::size_t i = 0; i < ds.size(); ++i)
    out << i << ',' << ds.points[i].x << ',' << ds.points[i].y << ',' << pw.saliency_scores[i] << ','
        << pw.density_scores[i] << ',' << pw.weights[i] << '\n';
  detail::finish(out, path);
  Json side = sidecar;
  side["gamma_used"] = pw.gamma_used;
  auto sout = detail::open_for_write(sidecar_path(path));
  sout << side.dump() << '\n';
  detail::finish(sout, sidecar_path(path));
}

inline PerceptionWeights read_weights(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  detail::expect_header(path, lines, "index,x,y,q_s,q_d,w_p");
  PerceptionWeights pw;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [no, line] = lines[i];
    const auto row = detail::parse_row(path, no, line, 6);
    if (row[0] != static_cast<double>(i - 1))
      throw ParseError(path.string() + ": line " + std::to_string(no) + ": index out of sequence");
    pw.saliency_scores.push_back(row[3]);
    pw.density_scores.push_back(row[4]);
    pw.weights.push_back(row[5]);
  }
  const auto side = sidecar_path(path);
  if (std::filesystem::exists(side)) pw.gamma_used = detail::read_json(side).value("gamma_used", 0.0);
  return pw;
}

// ---- metric reports ----

inline Json report_json(const MetricReport& report) {
  auto scores = [](const MetricScores& s) {
    Json j;
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) j[kMetricNames[m]] = s[m];
    return j;
  };
  Json rows = Json::array();
  for (const auto& row : report.per_config) {
    Json r;
    r["ps"] = row.point_size;
    r["op"] = row.opacity;
    const Json metrics = scores(row.scores);
    for (const auto& [key, value] : metrics.items()) r[key] = value;
    rows.push_back(r);
  }
  Json j;
  j["config"] = rows;
  j["means"] = scores(report.mean);
  j["ci95"] = scores(report.ci95);
  return j;
}

inline void write_report(const MetricReport& report, const std::filesystem::path& path) {
  detail::write_json(report_json(report), path);
}

inline MetricReport read_report(const std::filesystem::path& path) {
  const Json j = detail::read_json(path);
  MetricReport report;
  try {
    for (const auto& r : j.at("config")) {
      ConfigScores row{r.at("ps").get<int>(), r.at("op").get<double>(), {}};
      for (std::size_t m = 0; m < kMetricNames.size(); ++m) row.scores[m] = r.at(kMetricNames[m]).get<double>();
      report.per_config.push_back(row);
    }
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
      report.mean[m] = j.at("means").at(kMetricNames[m]).get<double>();
      report.ci95[m] = j.at("ci95").at(kMetricNames[m]).get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return report;
}

}  // namespace paws
