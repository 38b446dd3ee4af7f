#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "paws/io.hpp"
#include "support/test_util.hpp"

using namespace paws;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int status = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class Cli : public ::testing::Test {
 protected:
  testutil::TempDir dir{"cli"};

  RunResult run(const std::string& args, bool small = true) {
    std::string cmd = std::string(PAWS_CLI_PATH) + " --workspace " + dir.path().string();
    if (small)
      cmd += " --set canvas.width=120 --set canvas.height=100";
    cmd += " " + args + " >" + (dir / "stdout.txt").string() + " 2>" + (dir / "stderr.txt").string();
    RunResult r;
    const int raw = std::system(cmd.c_str());
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(dir / "stdout.txt");
    r.err = slurp(dir / "stderr.txt");
    return r;
  }

  void prepare(std::size_t n = 3000) {
    ASSERT_EQ(run("gen --n " + std::to_string(n)).status, 0);
    ASSERT_EQ(run("saliency").status, 0);
  }

  std::size_t rows(const fs::path& csv) {
    std::ifstream in(csv);
    std::size_t count = 0;
    for (std::string line; std::getline(in, line);) ++count;
    return count - 1;
  }
};

}  // namespace

TEST_F(Cli, SaliencyUsesTheDefaultCanvas) {
  ASSERT_EQ(run("gen --n 2000").status, 0);
  ASSERT_EQ(run("--set grid.point_sizes=4 --set grid.opacities=0.4 saliency", false).status, 0);
  const auto map = load_map(dir / "saliency.salf");
  EXPECT_EQ(map.width(), 1085);
  EXPECT_EQ(map.height(), 924);
}

TEST_F(Cli, SamplingPawsWithoutSaliencyFails) {
  ASSERT_EQ(run("gen --n 500").status, 0);
  const auto r = run("sample --algo paws -k 10");
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("saliency"), std::string::npos) << r.err;
}

TEST_F(Cli, MissingDatasetFails) {
  const auto r = run("sample --algo random -k 10");
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST_F(Cli, SampleWritesKRowsDeterministically) {
  prepare();
  ASSERT_EQ(run("--seed 3 sample --algo paws -k 844 -o a.csv").status, 0);
  ASSERT_EQ(run("--seed 3 sample --algo paws -k 844 -o b.csv").status, 0);
  EXPECT_EQ(rows(dir / "a.csv"), 844u);
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  const auto side = detail::read_json(dir / "a.json");
  EXPECT_EQ(side.at("algorithm"), "paws");
  EXPECT_EQ(side.at("seed").get<int>(), 3);
  for (const char* algo : {"random", "maxmin", "dbs", "bluenoise", "vas"}) {
    const auto r = run(std::string("sample --algo ") + algo + " -k 40");
    EXPECT_EQ(r.status, 0) << algo << ": " << r.err;
  }
}

TEST_F(Cli, OversizedKIsRejected) {
  ASSERT_EQ(run("gen --n 100").status, 0);
  EXPECT_NE(run("sample --algo random -k 101").status, 0);
}

TEST_F(Cli, ApproxNeedsItsPartition) {
  prepare();
  ASSERT_EQ(run("compress --preset high -o part.csv").status, 0);
  ASSERT_EQ(run("approx -p part.csv -k 50 -o approx.csv").status, 0);
  EXPECT_EQ(rows(dir / "approx.csv"), 50u);
  fs::remove(dir / "part.csv");
  const auto r = run("approx -p part.csv -k 50");
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("part.csv"), std::string::npos) << r.err;
}

TEST_F(Cli, MetricsReportCoversTheGrid) {
  prepare(1500);
  ASSERT_EQ(run("sample --algo random -k 100 -o s.csv").status, 0);
  ASSERT_EQ(run("metrics -s s.csv -o r.json").status, 0);
  const auto report = read_report(dir / "r.json");
  EXPECT_EQ(report.per_config.size(), 16u);
}

TEST_F(Cli, RenderWritesPng) {
  ASSERT_EQ(run("gen --n 300").status, 0);
  ASSERT_EQ(run("render --ps 4 --op 0.5 -o img.png").status, 0);
  const auto px = read_gray_png(dir / "img.png");
  EXPECT_EQ(px.width, 120);
  EXPECT_EQ(px.height, 100);
}

TEST_F(Cli, ExternalSaliencyMap) {
  ASSERT_EQ(run("gen --n 300").status, 0);
  SaliencyMap m(120, 100);
  for (int r = 0; r < 100; ++r)
    for (int c = 0; c < 120; ++c) m(r, c) = static_cast<double>(c) / 119.0;
  store_map(m, dir / "ext.salf");
  ASSERT_EQ(run("saliency --model external --map ext.salf").status, 0);
  const auto back = load_map(dir / "saliency.salf");
  EXPECT_NEAR(back(50, 119), 1.0, 1e-12);
  ASSERT_EQ(run("weights").status, 0);
  const auto pw = read_weights(dir / "weights.csv");
  EXPECT_EQ(pw.size(), 300u);

  SaliencyMap wrong(60, 50);
  store_map(wrong, dir / "wrong.salf");
  EXPECT_NE(run("saliency --model external --map wrong.salf").status, 0);
}

TEST_F(Cli, BenchGridAndResume) {
  prepare(1000);
  const std::string args = "--set grid.point_sizes=2,4 --set grid.opacities=1 bench --algos random,paws "
                           "--sizes 20,40 --seeds 1 -o b";
  ASSERT_EQ(run(args).status, 0);
  std::size_t samples = 0, reports = 0;
  for (const auto& e : fs::directory_iterator(dir / "b" / "samples")) samples += e.path().extension() == ".csv";
  for (const auto& e : fs::directory_iterator(dir / "b" / "reports")) reports += e.path().extension() == ".json";
  EXPECT_EQ(samples, 4u);
  EXPECT_EQ(reports, 4u);
  ASSERT_TRUE(fs::exists(dir / "b" / "summary.csv"));
  EXPECT_EQ(rows(dir / "b" / "summary.csv"), 4u * 5u);

  const auto victim = dir / "b" / "reports" / "random_k20_s1.json";
  ASSERT_TRUE(fs::exists(victim));
  const auto keep = dir / "b" / "samples" / "paws_k40_s1.csv";
  const auto before = fs::last_write_time(keep);
  fs::remove(victim);
  ASSERT_EQ(run(args + " --resume").status, 0);
  EXPECT_TRUE(fs::exists(victim));
  EXPECT_EQ(fs::last_write_time(keep), before);
}

TEST_F(Cli, UnknownConfigKeyFails) {
  ASSERT_EQ(run("gen --n 50").status, 0);
  const auto r = run("--set bogus=1 sample --algo random -k 5");
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("bogus"), std::string::npos);
}
