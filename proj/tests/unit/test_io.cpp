#include <gtest/gtest.h>

#include <fstream>

#include "paws/io.hpp"
#include "paws/samplers.hpp"
#include "support/test_util.hpp"

using namespace paws;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(SampleFile, RoundTripWithSidecar) {
  testutil::TempDir dir("io");
  const auto ds = testutil::uniform_dataset(100, 1);
  const auto s = random_sample(ds, 10, 4);
  write_sample(s, dir / "s.csv");
  const auto back = read_sample(dir / "s.csv");
  EXPECT_EQ(back.indices, s.indices);
  EXPECT_EQ(back.points, s.points);  // 17 significant digits round-trip exactly
  EXPECT_EQ(back.algorithm, "random");
  EXPECT_EQ(back.seed, 4u);
  EXPECT_TRUE(std::filesystem::exists(dir / "s.json"));
  EXPECT_EQ(slurp(dir / "s.csv").substr(0, 15), "rank,index,x,y\n");
}

TEST(SampleFile, SynthesizedRowsUseMinusOne) {
  testutil::TempDir dir("io");
  Sample s;
  s.points = {{0.25, 0.5}};
  s.algorithm = "appropaws";
  write_sample(s, dir / "a.csv");
  EXPECT_EQ(slurp(dir / "a.csv"), "rank,index,x,y\n0,-1,0.25,0.5\n");
  const auto back = read_sample(dir / "a.csv");
  EXPECT_TRUE(back.synthesized());
}

TEST(SampleFile, ParseErrorsNameTheLine) {
  testutil::TempDir dir("io");
  std::ofstream(dir / "bad.csv") << "rank,index,x,y\n0,1,0.5,0.5\n1,2,abc,0.5\n";
  try {
    read_sample(dir / "bad.csv");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  std::ofstream(dir / "short.csv") << "rank,index,x,y\n0,1,0.5\n";
  EXPECT_THROW(read_sample(dir / "short.csv"), ParseError);
  std::ofstream(dir / "hdr.csv") << "a,b\n";
  EXPECT_THROW(read_sample(dir / "hdr.csv"), ParseError);
  EXPECT_THROW(read_sample(dir / "missing.csv"), IoError);
}

TEST(PartitionFile, RoundTrip) {
  testutil::TempDir dir("io");
  const auto ds = testutil::uniform_dataset(2000, 3);
  const std::vector<double> w(2000, 0.5);
  const auto part = build_partition(ds, w, PartitionParams::high(), 7);
  write_partition(part, dir / "p.csv");
  const auto back = read_partition(dir / "p.csv");
  ASSERT_EQ(back.size(), part.size());
  for (std::size_t i = 0; i < part.size(); ++i) {
    EXPECT_EQ(back.boxes[i].x0, part.boxes[i].x0);
    EXPECT_EQ(back.boxes[i].y1, part.boxes[i].y1);
    EXPECT_EQ(back.boxes[i].weight, part.boxes[i].weight);
    EXPECT_EQ(back.boxes[i].count, part.boxes[i].count);
  }
  EXPECT_EQ(back.lambda, part.lambda);
  EXPECT_EQ(back.sigma, part.sigma);
  EXPECT_EQ(back.seed, 7u);
  const auto side = detail::read_json(dir / "p.json");
  EXPECT_EQ(side.at("box_count").get<std::size_t>(), part.size());
  EXPECT_EQ(appro_paws(part, 50, 4, 1).points, appro_paws(back, 50, 4, 1).points);
}

TEST(WeightsFile, RoundTripAndOneLineSidecar) {
  testutil::TempDir dir("io");
  const auto ds = testutil::uniform_dataset(50, 2);
  const auto pw = combine_weights(std::vector<double>(50, 0.2), std::vector<double>(50, 0.6), 0.5);
  write_weights(ds, pw, dir / "w.csv", Json{{"kde", "exact"}});
  const auto back = read_weights(dir / "w.csv");
  EXPECT_EQ(back.weights, pw.weights);
  EXPECT_EQ(back.gamma_used, 0.5);
  const auto side = slurp(dir / "w.json");
  EXPECT_EQ(std::count(side.begin(), side.end(), '\n'), 1);
}

TEST(ReportFile, JsonShape) {
  testutil::TempDir dir("io");
  const auto report = summarize({{2, 0.1, {0.9, 0.8, 0.7, 0.1, 1.5}}, {4, 0.4, {0.7, 0.6, 0.5, 0.2, 2.5}}});
  write_report(report, dir / "r.json");
  const auto j = detail::read_json(dir / "r.json");
  ASSERT_EQ(j.at("config").size(), 2u);
  EXPECT_EQ(j.at("config")[1].at("ps").get<int>(), 4);
  EXPECT_DOUBLE_EQ(j.at("means").at("ssim").get<double>(), 0.8);
  EXPECT_TRUE(j.at("ci95").contains("emd"));
  const auto back = read_report(dir / "r.json");
  EXPECT_EQ(back.mean.emd, report.mean.emd);
}
