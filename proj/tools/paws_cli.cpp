// paws: command-line pipeline over a workspace directory.
//
//   paws --workspace ws gen --n 100000
//   paws --workspace ws saliency
//   paws --workspace ws sample --algo paws -k 844
//   paws --workspace ws metrics --sample samples/paws_k844_s1.csv

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "paws/paws.hpp"
#include "workspace_config.hpp"

namespace fs = std::filesystem;
using namespace paws;
using paws::cli::WorkspaceConfig;

namespace {

struct Globals {
  fs::path workspace = ".";
  std::string config_file;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  bool verbose = false;

  WorkspaceConfig config;

  fs::path resolve(const fs::path& p) const { return p.is_absolute() ? p : workspace / p; }
  fs::path dataset_path() const { return workspace / "dataset.csv"; }
  fs::path saliency_path() const { return workspace / "saliency.salf"; }
  fs::path weights_path() const { return workspace / "weights.csv"; }
  std::uint64_t effective_seed() const { return seed ? *seed : config.seed(); }

  void log(const std::string& msg) const {
    if (verbose) std::clog << "[paws] " << msg << '\n';
  }
};

const std::vector<std::string> kAlgorithms{"paws", "random", "maxmin", "dbs", "bluenoise", "vas"};

Dataset load_workspace_dataset(const Globals& g) {
  if (!fs::exists(g.dataset_path()))
    throw IoError("dataset not found: " + g.dataset_path().string() + " (run `ingest` or `gen` first)");
  Dataset ds = load_csv(g.dataset_path(), std::size_t{0}, std::size_t{1});
  ds.source = g.dataset_path().string();
  return ds;
}

Json dataset_sidecar(const Dataset& ds) {
  Json j;
  j["source"] = ds.source;
  j["n"] = ds.size();
  j["skipped_rows"] = ds.skipped_rows;
  j["x_range"] = {ds.x_range.min, ds.x_range.max};
  j["y_range"] = {ds.y_range.min, ds.y_range.max};
  return j;
}

void save_workspace_dataset(const Globals& g, const Dataset& ds, bool header) {
  fs::create_directories(g.workspace);
  write_dataset_csv(ds, g.dataset_path(), header);
  detail::write_json(dataset_sidecar(ds), sidecar_path(g.dataset_path()));
}

/// Weights from weights.csv when present, otherwise derived from saliency.salf.
PerceptionWeights workspace_weights(const Globals& g, const Dataset& ds) {
  if (fs::exists(g.weights_path())) {
    auto pw = read_weights(g.weights_path());
    if (pw.size() != ds.size())
      throw InvalidArgument("weights.csv has " + std::to_string(pw.size()) + " rows but the dataset has " +
                            std::to_string(ds.size()) + " points (rerun `weights`)");
    return pw;
  }
  if (!fs::exists(g.saliency_path()))
    throw IoError("no saliency map in the workspace: run `saliency` first (then optionally `weights`)");
  g.log("deriving perception weights from " + g.saliency_path().string());
  const Canvas canvas = g.config.canvas();
  return perception_weights(ds, load_map(g.saliency_path(), canvas), canvas, g.config.kde(), g.config.gamma());
}

Sample run_sampler(const Globals& g, const std::string& algo, const Dataset& ds, std::size_t k, std::uint64_t seed,
                   const PerceptionWeights* weights) {
  const auto& c = g.config;
  if (algo == "paws") {
    detail::require(weights != nullptr, "paws needs perception weights");
    return paws::paws(ds, *weights, k, seed);
  }
  if (algo == "random") return random_sample(ds, k, seed);
  if (algo == "maxmin") return maxmin_gmm(ds, k, seed);
  if (algo == "dbs") return dbs(ds, k, c.count("dbs.K"), seed);
  if (algo == "bluenoise") return blue_noise(ds, k, c.blue_noise(), seed);
  if (algo == "vas") return vas_es(ds, k, c.vas(), seed);
  throw InvalidArgument("unknown algorithm: " + algo + " (expected paws, random, maxmin, dbs, bluenoise, vas)");
}

Json with_config(const Globals& g, Json extra = Json::object()) {
  extra["config"] = g.config.to_json();
  return extra;
}

std::string cell_name(const std::string& algo, std::size_t k, std::uint64_t seed) {
  return algo + "_k" + std::to_string(k) + "_s" + std::to_string(seed);
}

/// "geometric:base,factor,[e1,e2,...]" or a plain comma list of sizes.
std::vector<std::size_t> parse_sizes(const std::string& spec) {
  const std::string prefix = "geometric:";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string body = spec.substr(prefix.size());
    const auto open = body.find('[');
    const auto close = body.find(']');
    if (open == std::string::npos || close == std::string::npos || close < open)
      throw InvalidArgument("sizes spec must look like geometric:250,1.5,[0,1,3]: " + spec);
    const auto head = detail::split_csv_line(body.substr(0, open));
    if (head.size() < 2) throw InvalidArgument("sizes spec needs base and factor: " + spec);
    const auto base = detail::parse_double(head[0]);
    const auto factor = detail::parse_double(head[1]);
    if (!base || !factor || *base < 1) throw InvalidArgument("bad base or factor in sizes spec: " + spec);
    std::vector<int> exps;
    for (auto cell : detail::split_csv_line(body.substr(open + 1, close - open - 1))) {
      const auto e = detail::parse_double(cell);
      if (!e) throw InvalidArgument("bad exponent in sizes spec: " + spec);
      exps.push_back(static_cast<int>(*e));
    }
    return sample_size_series(static_cast<std::size_t>(*base), *factor, exps);
  }
  std::vector<std::size_t> sizes;
  for (auto cell : detail::split_csv_line(spec)) {
    const auto v = detail::parse_double(cell);
    if (!v || *v < 1) throw InvalidArgument("bad sample size in sizes spec: " + spec);
    sizes.push_back(static_cast<std::size_t>(*v));
  }
  return sizes;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  for (auto cell : detail::split_csv_line(text)) out.push_back(detail::trim_cell(cell));
  return out;
}

// ---- commands ----

void cmd_ingest(const Globals& g, const fs::path& csv, const std::string& x_col, const std::string& y_col,
                bool header) {
  Dataset ds = load_csv(g.resolve(csv), parse_column_selector(x_col), parse_column_selector(y_col));
  save_workspace_dataset(g, ds, header);
  std::cout << "ingested " << ds.size() << " points (" << ds.skipped_rows << " rows skipped) into "
            << g.dataset_path().string() << '\n';
}

void cmd_gen(const Globals& g, std::size_t n, double corr_fraction, double rho, bool header) {
  Dataset ds = gen_hidden_correlation(n, corr_fraction, rho, g.effective_seed());
  save_workspace_dataset(g, ds, header);
  std::cout << "generated " << ds.size() << " points into " << g.dataset_path().string() << '\n';
}

void cmd_render(const Globals& g, const std::string& sample_path, std::optional<int> ps, std::optional<double> op,
                const fs::path& out) {
  RenderConfig cfg = g.config.render();
  if (ps) cfg.point_size_px = *ps;
  if (op) cfg.opacity = *op;
  cfg.validate();
  std::vector<Point> points;
  if (sample_path.empty())
    points = load_workspace_dataset(g).points;
  else
    points = read_sample(g.resolve(sample_path)).points;
  const fs::path target = g.resolve(out);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  write_png(render(points, cfg), target);
  std::cout << "wrote " << target.string() << '\n';
}

void cmd_saliency(const Globals& g, const std::string& model, const std::vector<std::string>& maps,
                  const fs::path& out) {
  const Canvas canvas = g.config.canvas();
  const fs::path target = g.resolve(out);
  SaliencyMap agg;
  Json side = with_config(g);
  if (model == "builtin") {
    const Dataset ds = load_workspace_dataset(g);
    const StimulusGrid grid = g.config.grid();
    const auto configs = grid.configs(canvas);
    std::vector<SaliencyMap> per(configs.size());
    parallel_for(configs.size(), g.jobs, [&](std::size_t i) {
      per[i] = builtin_saliency(render(ds, configs[i]));
      g.log("saliency config ps=" + std::to_string(configs[i].point_size_px) +
            " op=" + std::to_string(configs[i].opacity));
    });
    agg = aggregate(per);
    side["model"] = "builtin";
  } else if (model == "external") {
    if (maps.empty()) throw InvalidArgument("--model external requires at least one --map");
    std::vector<SaliencyMap> loaded;
    for (const auto& m : maps) loaded.push_back(load_map(g.resolve(m), canvas));
    agg = aggregate(loaded);
    side["model"] = "external";
    side["maps"] = maps;
  } else {
    throw InvalidArgument("unknown saliency model: " + model + " (expected builtin or external)");
  }
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  store_map(agg, target);
  detail::write_json(side, sidecar_path(target));
  std::cout << "wrote " << target.string() << " (" << agg.width() << "x" << agg.height() << ")\n";
}

void cmd_weights(const Globals& g) {
  const Dataset ds = load_workspace_dataset(g);
  if (!fs::exists(g.saliency_path())) throw IoError("no saliency map in the workspace: run `saliency` first");
  const Canvas canvas = g.config.canvas();
  const auto pw =
      perception_weights(ds, load_map(g.saliency_path(), canvas), canvas, g.config.kde(), g.config.gamma());
  Json side;
  side["kde_exact_threshold"] = g.config.count("kde.exact_threshold");
  side["kde_grid_resolution"] = g.config.count("kde.grid_resolution");
  side["gamma_a"] = g.config.num("gamma.a");
  side["gamma_v0"] = g.config.num("gamma.v0");
  write_weights(ds, pw, g.weights_path(), side);
  std::cout << "wrote " << g.weights_path().string() << " (gamma " << pw.gamma_used << ")\n";
}

void cmd_sample(const Globals& g, const std::string& algo, std::size_t k, const std::string& out) {
  const Dataset ds = load_workspace_dataset(g);
  const std::uint64_t seed = g.effective_seed();
  std::optional<PerceptionWeights> pw;
  if (algo == "paws") pw = workspace_weights(g, ds);
  const Sample s = run_sampler(g, algo, ds, k, seed, pw ? &*pw : nullptr);
  const fs::path target = g.resolve(out.empty() ? "samples/" + cell_name(algo, k, seed) + ".csv" : out);
  write_sample(s, target, with_config(g));
  std::cout << "wrote " << target.string() << " (" << s.size() << " points, " << s.elapsed_seconds << " s)\n";
}

void cmd_compress(const Globals& g, const std::string& preset, std::optional<double> lambda,
                  std::optional<double> sigma, const std::string& out) {
  const Dataset ds = load_workspace_dataset(g);
  const std::uint64_t seed = g.effective_seed();
  PartitionParams params = g.config.partition(preset.empty() ? g.config.str("compress.preset") : preset);
  if (lambda) params.lambda = *lambda;
  if (sigma) params.sigma = *sigma;
  const auto pw = workspace_weights(g, ds);
  detail::Stopwatch clock;
  const Partition part = build_partition(ds, pw, params, seed);
  const double elapsed = clock.seconds();
  const fs::path target = g.resolve(out.empty() ? "partitions/partition_s" + std::to_string(seed) + ".csv" : out);
  Json extra = with_config(g);
  extra["elapsed_seconds"] = elapsed;
  write_partition(part, target, extra);
  std::cout << "wrote " << target.string() << " (" << part.size() << " boxes, " << elapsed << " s)\n";
}

void cmd_approx(const Globals& g, const std::string& partition, std::size_t k, std::optional<std::size_t> C,
                const std::string& out) {
  const Partition part = read_partition(g.resolve(partition));
  const std::uint64_t seed = g.effective_seed();
  const Sample s = appro_paws(part, k, C ? *C : g.config.count("approx.C"), seed);
  const fs::path target = g.resolve(out.empty() ? "samples/" + cell_name("appropaws", k, seed) + ".csv" : out);
  write_sample(s, target, with_config(g));
  std::cout << "wrote " << target.string() << " (" << s.size() << " points, " << s.elapsed_seconds << " s)\n";
}

void cmd_metrics(const Globals& g, const std::string& sample_path, const std::string& out) {
  const Dataset ds = load_workspace_dataset(g);
  const fs::path src = g.resolve(sample_path);
  const Sample s = read_sample(src);
  for (const auto& p : s.points)
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0))
      throw InvalidArgument(src.string() + ": sample point outside the unit square");
  const auto ref = reference_maps(ds.view(), g.config.grid(), BuiltinSaliencyModel{}, g.config.canvas(), g.jobs);
  const auto report = evaluate_against(ref, s.points, BuiltinSaliencyModel{}, g.jobs);
  const fs::path target = g.resolve(out.empty() ? "reports/" + src.stem().string() + ".json" : out);
  write_report(report, target);
  std::cout << "wrote " << target.string() << " (mean ssim " << report.mean.ssim << ")\n";
}

struct BenchCell {
  std::string algo;
  std::size_t k;
  std::uint64_t seed;
  std::string name() const { return cell_name(algo, k, seed); }
};

/// Returns the number of failed cells.
std::size_t cmd_bench(const Globals& g, const std::vector<std::string>& algos, const std::string& sizes_spec,
                      const std::vector<std::uint64_t>& seeds, const std::string& out, bool resume) {
  for (const auto& a : algos)
    if (a != "appropaws" && std::find(kAlgorithms.begin(), kAlgorithms.end(), a) == kAlgorithms.end())
      throw InvalidArgument("unknown algorithm: " + a);
  detail::require(!seeds.empty(), "bench needs at least one seed");
  const auto sizes = parse_sizes(sizes_spec);
  detail::require(!sizes.empty(), "bench needs at least one sample size");

  const fs::path dir = g.resolve(out);
  fs::create_directories(dir / "samples");
  fs::create_directories(dir / "reports");
  fs::create_directories(dir / "png");

  std::vector<BenchCell> cells;
  for (const auto& a : algos)
    for (auto k : sizes)
      for (auto s : seeds) cells.push_back({a, k, s});

  auto sample_file = [&](const BenchCell& c) { return dir / "samples" / (c.name() + ".csv"); };
  auto report_file = [&](const BenchCell& c) { return dir / "reports" / (c.name() + ".json"); };
  auto done = [&](const BenchCell& c) {
    return fs::exists(sample_file(c)) && fs::exists(sidecar_path(sample_file(c))) && fs::exists(report_file(c));
  };

  std::vector<BenchCell> todo;
  for (const auto& c : cells)
    if (!resume || !done(c)) todo.push_back(c);
  std::cout << "bench: " << cells.size() << " cells, " << cells.size() - todo.size() << " already complete\n";

  std::size_t failures = 0;
  if (!todo.empty()) {
    const Dataset ds = load_workspace_dataset(g);
    const bool needs_weights = std::ranges::any_of(todo, [](const BenchCell& c) {
      return c.algo == "paws" || c.algo == "appropaws";
    });
    std::optional<PerceptionWeights> pw;
    if (needs_weights) pw = workspace_weights(g, ds);
    const auto ref = reference_maps(ds.view(), g.config.grid(), BuiltinSaliencyModel{}, g.config.canvas(), g.jobs);
    const RenderConfig png_cfg = g.config.render();
    const std::string preset = g.config.str("compress.preset");

    // One partition per seed, shared by every appropaws cell with that seed.
    std::map<std::uint64_t, Partition> partitions;
    for (const auto& c : todo)
      if (c.algo == "appropaws" && !partitions.contains(c.seed)) {
        g.log("building " + preset + " partition for seed " + std::to_string(c.seed));
        partitions[c.seed] = build_partition(ds, *pw, g.config.partition(preset), c.seed);
      }

    std::vector<std::string> errors(todo.size());
    parallel_for(todo.size(), g.jobs, [&](std::size_t i) {
      const auto& c = todo[i];
      try {
        Sample s = c.algo == "appropaws"
                       ? appro_paws(partitions.at(c.seed), c.k, g.config.count("approx.C"), c.seed)
                       : run_sampler(g, c.algo, ds, c.k, c.seed, pw ? &*pw : nullptr);
        Json extra = with_config(g);
        if (c.algo == "appropaws") extra["preset"] = preset;
        write_sample(s, sample_file(c), extra);
        write_png(render(s.points, png_cfg), dir / "png" / (c.name() + ".png"));
        write_report(evaluate_against(ref, s.points, BuiltinSaliencyModel{}), report_file(c));
        g.log("cell " + c.name() + " done");
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });
    for (std::size_t i = 0; i < todo.size(); ++i)
      if (!errors[i].empty()) {
        ++failures;
        std::cerr << "error: cell " << todo[i].name() << ": " << errors[i] << '\n';
      }
  }

  // Summary is assembled from what is on disk, so resumed and fresh runs agree.
  auto summary = detail::open_for_write(dir / "summary.csv");
  summary << "algo,k,seed,metric,mean,ci95,elapsed\n";
  for (const auto& c : cells) {
    if (!done(c)) continue;
    const auto report = read_report(report_file(c));
    const double elapsed = detail::read_json(sidecar_path(sample_file(c))).value("elapsed_seconds", 0.0);
    for (std::size_t m = 0; m < kMetricNames.size(); ++m)
      summary << c.algo << ',' << c.k << ',' << c.seed << ',' << kMetricNames[m] << ',' << report.mean[m] << ','
              << report.ci95[m] << ',' << elapsed << '\n';
  }
  detail::finish(summary, dir / "summary.csv");
  std::cout << "wrote " << (dir / "summary.csv").string() << '\n';
  return failures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perception-aware scatterplot sampling"};
  app.require_subcommand(1);
  Globals g;
  std::optional<std::uint64_t> seed;
  app.add_option("--workspace,-w", g.workspace, "Workspace directory")->capture_default_str();
  app.add_option("--config", g.config_file, "Config file (key = value lines)");
  app.add_option("--set", g.overrides, "Config override key=value (repeatable)");
  app.add_option("--seed", seed, "RNG seed (overrides the config)");
  app.add_option("--jobs,-j", g.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_flag("--verbose,-v", g.verbose, "Log progress to stderr");

  bool header = false;

  auto* ingest = app.add_subcommand("ingest", "Load a CSV into the workspace dataset");
  std::string csv, x_col = "0", y_col = "1";
  ingest->add_option("csv", csv, "Input CSV")->required();
  ingest->add_option("--x", x_col, "X column (index or header name)")->capture_default_str();
  ingest->add_option("--y", y_col, "Y column (index or header name)")->capture_default_str();
  ingest->add_flag("--header", header, "Write an x,y header row");

  auto* gen = app.add_subcommand("gen", "Generate a hidden-correlation dataset");
  std::size_t gen_n = 100000;
  double corr_fraction = 0.975, rho = 0.9;
  gen->add_option("--n", gen_n, "Number of points")->capture_default_str();
  gen->add_option("--corr-fraction", corr_fraction, "Fraction of correlated points")->capture_default_str();
  gen->add_option("--rho", rho, "Correlation of the main component")->capture_default_str();
  gen->add_flag("--header", header, "Write an x,y header row");

  auto* render_cmd = app.add_subcommand("render", "Render the dataset or a sample to PNG");
  std::string render_sample, render_out = "render.png";
  std::optional<int> ps;
  std::optional<double> op;
  render_cmd->add_option("--sample", render_sample, "Sample CSV (default: the dataset)");
  render_cmd->add_option("--ps", ps, "Point size in pixels");
  render_cmd->add_option("--op", op, "Opacity in (0,1]");
  render_cmd->add_option("--out,-o", render_out, "Output PNG")->capture_default_str();

  auto* saliency_cmd = app.add_subcommand("saliency", "Aggregate saliency over the stimulus grid");
  std::string model = "builtin", saliency_out = "saliency.salf";
  std::vector<std::string> maps;
  saliency_cmd->add_option("--model", model, "builtin or external")->capture_default_str();
  saliency_cmd->add_option("--map", maps, "External SALF/PNG map (repeatable)");
  saliency_cmd->add_option("--out,-o", saliency_out, "Output SALF")->capture_default_str();

  auto* weights_cmd = app.add_subcommand("weights", "Compute perception weights");

  auto* sample_cmd = app.add_subcommand("sample", "Draw a sample");
  std::string algo, sample_out;
  std::size_t k = 0;
  sample_cmd->add_option("--algo,-a", algo, "paws, random, maxmin, dbs, bluenoise, vas")->required();
  sample_cmd->add_option("-k", k, "Sample size")->required();
  sample_cmd->add_option("--out,-o", sample_out, "Output CSV");

  auto* compress_cmd = app.add_subcommand("compress", "Build a perception-aware partition");
  std::string preset, compress_out;
  std::optional<double> lambda, sigma;
  compress_cmd->add_option("--preset", preset, "low, medium or high");
  compress_cmd->add_option("--lambda", lambda, "Chamfer threshold");
  compress_cmd->add_option("--sigma", sigma, "Weight-variance threshold");
  compress_cmd->add_option("--out,-o", compress_out, "Output CSV");

  auto* approx_cmd = app.add_subcommand("approx", "Sample from a partition");
  std::string partition, approx_out;
  std::size_t approx_k = 0;
  std::optional<std::size_t> C;
  approx_cmd->add_option("--partition,-p", partition, "Partition CSV")->required();
  approx_cmd->add_option("-k", approx_k, "Sample size")->required();
  approx_cmd->add_option("-C", C, "Representatives per box");
  approx_cmd->add_option("--out,-o", approx_out, "Output CSV");

  auto* metrics_cmd = app.add_subcommand("metrics", "Score a sample against the dataset");
  std::string metrics_sample, metrics_out;
  metrics_cmd->add_option("--sample,-s", metrics_sample, "Sample CSV")->required();
  metrics_cmd->add_option("--out,-o", metrics_out, "Output report JSON");

  auto* bench_cmd = app.add_subcommand("bench", "Run samplers x sizes x seeds and score every cell");
  std::string bench_algos = "paws,random,maxmin,dbs,bluenoise", sizes = "geometric:250,1.5,[0,1,3,5,7,9]",
              bench_seeds = "1", bench_out = "bench";
  bool resume = false;
  bench_cmd->add_option("--algos", bench_algos, "Comma-separated algorithms")->capture_default_str();
  bench_cmd->add_option("--sizes", sizes, "Sizes list or geometric:base,factor,[exps]")->capture_default_str();
  bench_cmd->add_option("--seeds", bench_seeds, "Comma-separated seeds")->capture_default_str();
  bench_cmd->add_option("--out,-o", bench_out, "Output directory")->capture_default_str();
  bench_cmd->add_flag("--resume", resume, "Skip cells whose artifacts exist");

  CLI11_PARSE(app, argc, argv);

  try {
    g.seed = seed;
    if (!g.config_file.empty()) g.config.load_file(g.resolve(g.config_file));
    for (const auto& o : g.overrides) g.config.apply(o);
    if (seed) g.config.set("seed", std::to_string(*seed));

    if (*ingest) cmd_ingest(g, csv, x_col, y_col, header);
    if (*gen) cmd_gen(g, gen_n, corr_fraction, rho, header);
    if (*render_cmd) cmd_render(g, render_sample, ps, op, render_out);
    if (*saliency_cmd) cmd_saliency(g, model, maps, saliency_out);
    if (*weights_cmd) cmd_weights(g);
    if (*sample_cmd) cmd_sample(g, algo, k, sample_out);
    if (*compress_cmd) cmd_compress(g, preset, lambda, sigma, compress_out);
    if (*approx_cmd) cmd_approx(g, partition, approx_k, C, approx_out);
    if (*metrics_cmd) cmd_metrics(g, metrics_sample, metrics_out);
    if (*bench_cmd) {
      std::vector<std::uint64_t> seeds;
      for (const auto& s : split_names(bench_seeds)) {
        const auto v = detail::parse_double(s);
        if (!v || *v < 0) throw InvalidArgument("bad seed: " + s);
        seeds.push_back(static_cast<std::uint64_t>(*v));
      }
      const auto failures = cmd_bench(g, split_names(bench_algos), sizes, seeds, bench_out, resume);
      if (failures > 0) {
        std::cerr << "error: " << failures << " bench cell(s) failed\n";
        return 1;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
