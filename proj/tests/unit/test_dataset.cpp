#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "paws/dataset.hpp"
#include "support/test_util.hpp"

using namespace paws;

namespace {

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

double pearson(const std::vector<Point>& pts) {
  double mx = 0, my = 0;
  for (const auto& p : pts) {
    mx += p.x;
    my += p.y;
  }
  mx /= pts.size();
  my /= pts.size();
  double sxx = 0, syy = 0, sxy = 0;
  for (const auto& p : pts) {
    sxx += (p.x - mx) * (p.x - mx);
    syy += (p.y - my) * (p.y - my);
    sxy += (p.x - mx) * (p.y - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST(LoadCsv, MinMaxNormalizesEachAxis) {
  testutil::TempDir dir("csv");
  write_file(dir / "a.csv", "10,20\n30,40\n20,30\n");
  const auto ds = load_csv(dir / "a.csv", std::size_t{0}, std::size_t{1});
  ASSERT_EQ(ds.size(), 3u);
  EXPECT_EQ(ds.points[0], (Point{0, 0}));
  EXPECT_EQ(ds.points[1], (Point{1, 1}));
  EXPECT_EQ(ds.points[2], (Point{0.5, 0.5}));
  EXPECT_EQ(ds.skipped_rows, 0u);
}

TEST(LoadCsv, DegenerateAxesMapToHalf) {
  testutil::TempDir dir("csv");
  write_file(dir / "one.csv", "5,7\n");
  const auto ds = load_csv(dir / "one.csv", std::size_t{0}, std::size_t{1});
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds.points[0], (Point{0.5, 0.5}));
}

TEST(LoadCsv, HeaderDetectedAndBadRowsSkipped) {
  testutil::TempDir dir("csv");
  write_file(dir / "h.csv", "a,b\n1,2\nNA,3\n4,5\n");
  const auto ds = load_csv(dir / "h.csv", std::string("a"), std::string("b"));
  EXPECT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.skipped_rows, 1u);
}

TEST(LoadCsv, Errors) {
  testutil::TempDir dir("csv");
  EXPECT_THROW(load_csv(dir / "missing.csv", std::size_t{0}, std::size_t{1}), IoError);
  write_file(dir / "bad.csv", "x,y\nfoo,bar\n");
  EXPECT_THROW(load_csv(dir / "bad.csv", std::size_t{0}, std::size_t{1}), ParseError);
  write_file(dir / "ok.csv", "x,y\n1,2\n");
  EXPECT_THROW(load_csv(dir / "ok.csv", std::string("z"), std::string("y")), InvalidArgument);
  EXPECT_THROW(load_csv(dir / "ok.csv", std::size_t{0}, std::size_t{7}), InvalidArgument);
}

TEST(LoadCsv, DenormalizeRecoversRawValues) {
  testutil::TempDir dir("csv");
  write_file(dir / "r.csv", "-3.5,1e6\n2.25,2e6\n10.125,1.5e6\n0,1.25e6\n");
  const auto ds = load_csv(dir / "r.csv", std::size_t{0}, std::size_t{1});
  const double raw[4][2] = {{-3.5, 1e6}, {2.25, 2e6}, {10.125, 1.5e6}, {0, 1.25e6}};
  for (std::size_t i = 0; i < 4; ++i) {
    const Point back = denormalize(ds, ds.points[i]);
    EXPECT_NEAR(back.x, raw[i][0], 1e-9 * std::max(1.0, std::abs(raw[i][0])));
    EXPECT_NEAR(back.y, raw[i][1], 1e-9 * std::abs(raw[i][1]));
  }
}

TEST(Dataset, WrittenCsvHasNineSignificantDigits) {
  testutil::TempDir dir("csv");
  const auto ds = testutil::dataset_of({{1.0 / 3.0, 0.5}});
  write_dataset_csv(ds, dir / "o.csv");
  std::ifstream in(dir / "o.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "0.333333333,0.5");
  write_dataset_csv(ds, dir / "h.csv", true);
  std::ifstream hin(dir / "h.csv");
  std::getline(hin, line);
  EXPECT_EQ(line, "x,y");
}

TEST(HiddenCorrelation, FullyCorrelatedMatchesRho) {
  const auto ds = gen_hidden_correlation(1000, 1.0, 0.9, 7);
  EXPECT_NEAR(pearson(ds.points), 0.9, 0.05);
}

TEST(HiddenCorrelation, UncorrelatedNearZero) {
  const auto ds = gen_hidden_correlation(1000, 0.0, 0.9, 3);
  EXPECT_NEAR(pearson(ds.points), 0.0, 0.1);
}

TEST(HiddenCorrelation, ReproducibleAndInUnitSquare) {
  const auto a = gen_hidden_correlation(5000, 0.975, 0.9, 11);
  const auto b = gen_hidden_correlation(5000, 0.975, 0.9, 11);
  EXPECT_EQ(a.points, b.points);
  for (const auto& p : a.points) {
    EXPECT_GE(p.x, 0.0);
    EXPECT_LE(p.x, 1.0);
    EXPECT_GE(p.y, 0.0);
    EXPECT_LE(p.y, 1.0);
  }
  EXPECT_NE(a.points, gen_hidden_correlation(5000, 0.975, 0.9, 12).points);
}

TEST(HiddenCorrelation, RejectsInvalidParameters) {
  EXPECT_THROW(gen_hidden_correlation(1, 0.5, 0.9, 1), InvalidArgument);
  EXPECT_THROW(gen_hidden_correlation(10, 1.5, 0.9, 1), InvalidArgument);
  EXPECT_THROW(gen_hidden_correlation(10, 0.5, 1.1, 1), InvalidArgument);
}

TEST(SampleSizeSeries, PublishedSeries) {
  const int e[] = {0, 1, 3, 5, 7, 9};
  EXPECT_EQ(sample_size_series(250, 1.5, e), (std::vector<std::size_t>{250, 375, 844, 1898, 4271, 9611}));
  const int u[] = {0, 1, 2};
  EXPECT_EQ(sample_size_series(100, 1.0, u), (std::vector<std::size_t>{100, 100, 100}));
  const int p[] = {0, 3};
  EXPECT_EQ(sample_size_series(10, 2.0, p), (std::vector<std::size_t>{10, 80}));
}

TEST(SampleSizeSeries, NonDecreasingForGrowingFactor) {
  const int e[] = {0, 1, 2, 2, 5, 8, 13};
  for (double f : {1.0, 1.1, 1.5, 3.0}) {
    const auto s = sample_size_series(7, f, e);
    EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
  }
}
