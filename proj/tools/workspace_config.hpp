#pragma once

// Flat key=value configuration for the command-line tool. Every artifact
// sidecar embeds the fully resolved table so runs can be re-derived.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "paws/paws.hpp"

namespace paws::cli {

class WorkspaceConfig {
 public:
  WorkspaceConfig() {
    values_ = {
        {"canvas.width", "1085"},
        {"canvas.height", "924"},
        {"grid.point_sizes", "2,4,8,16"},
        {"grid.opacities", "0.1,0.4,0.7,1"},
        {"kde.exact_threshold", "100000"},
        {"kde.grid_resolution", "512"},
        {"gamma.a", "50"},
        {"gamma.v0", "0.05"},
        {"dbs.K", "50"},
        {"bluenoise.r0", "auto"},
        {"bluenoise.max_fail", "1000"},
        {"bluenoise.shrink", "0.7"},
        {"vas.epsilon", "0.01414213562373095"},
        {"vas.max_iters", "50"},
        {"approx.C", "4"},
        {"compress.preset", "high"},
        {"compress.eval_points", "64"},
        {"compress.min_leaf", "4"},
        {"compress.max_depth", "12"},
        {"render.point_size", "2"},
        {"render.opacity", "1"},
        {"seed", "1"},
    };
  }

  /// Lines `key = value`; `#` starts a comment. Unknown keys are rejected.
  void load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config file not found: " + path.string());
    std::size_t no = 0;
    for (std::string line; std::getline(in, line);) {
      ++no;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ParseError(path.string() + ": line " + std::to_string(no) + ": expected key = value");
      set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  }

  /// Applies a `key=value` override.
  void apply(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw InvalidArgument("override must look like key=value: " + assignment);
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
  }

  void set(const std::string& key, const std::string& value) {
    if (!values_.contains(key)) throw InvalidArgument("unknown config key: " + key);
    values_[key] = value;
  }

  const std::string& str(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw InvalidArgument("unknown config key: " + key);
    return it->second;
  }

  double num(const std::string& key) const {
    const auto v = detail::parse_double(str(key));
    if (!v) throw InvalidArgument("config key " + key + " is not a number: " + str(key));
    return *v;
  }

  std::size_t count(const std::string& key) const {
    const double v = num(key);
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
      throw InvalidArgument("config key " + key + " must be a non-negative integer");
    return static_cast<std::size_t>(v);
  }

  std::vector<double> list(const std::string& key) const {
    std::vector<double> out;
    for (auto cell : detail::split_csv_line(str(key))) {
      const auto v = detail::parse_double(cell);
      if (!v) throw InvalidArgument("config key " + key + " must be a comma-separated number list");
      out.push_back(*v);
    }
    return out;
  }

  std::uint64_t seed() const { return static_cast<std::uint64_t>(count("seed")); }

  Canvas canvas() const { return {static_cast<int>(count("canvas.width")), static_cast<int>(count("canvas.height"))}; }

  StimulusGrid grid() const {
    StimulusGrid g;
    g.point_sizes.clear();
    for (double v : list("grid.point_sizes")) g.point_sizes.push_back(static_cast<int>(v));
    g.opacities = list("grid.opacities");
    g.configs(canvas());  // validates
    return g;
  }

  KdeParams kde() const {
    return {count("kde.exact_threshold"), static_cast<int>(count("kde.grid_resolution"))};
  }

  GammaParams gamma() const { return {num("gamma.a"), num("gamma.v0")}; }

  BlueNoiseParams blue_noise() const {
    BlueNoiseParams p;
    if (str("bluenoise.r0") != "auto") p.r0 = num("bluenoise.r0");
    p.max_fail = count("bluenoise.max_fail");
    p.shrink = num("bluenoise.shrink");
    return p;
  }

  VasParams vas() const { return {num("vas.epsilon"), count("vas.max_iters"), false}; }

  PartitionParams partition(const std::string& preset) const {
    PartitionParams p;
    if (preset == "low")
      p = PartitionParams::low();
    else if (preset == "medium")
      p = PartitionParams::medium();
    else if (preset == "high")
      p = PartitionParams::high();
    else
      throw InvalidArgument("unknown compression preset: " + preset + " (expected low, medium or high)");
    p.eval_points = count("compress.eval_points");
    p.min_leaf = count("compress.min_leaf");
    p.max_depth = static_cast<int>(count("compress.max_depth"));
    return p;
  }

  RenderConfig render() const {
    const Canvas c = canvas();
    RenderConfig cfg{static_cast<int>(count("render.point_size")), num("render.opacity"), c.width_px, c.height_px};
    cfg.validate();
    return cfg;
  }

  Json to_json() const {
    Json j = Json::object();
    for (const auto& [k, v] : values_) j[k] = v;
    return j;
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  std::map<std::string, std::string> values_;
};

}  // namespace paws::cli
