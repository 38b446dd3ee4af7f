#include <gtest/gtest.h>

#include <boost/math/distributions/students_t.hpp>

#include "paws/evaluate.hpp"
#include "paws/samplers.hpp"
#include "support/test_util.hpp"

using namespace paws;

namespace {

const Canvas kSmall{96, 80};

}  // namespace

TEST(Ci95, TAndNormalMultipliers) {
  EXPECT_EQ(ci95_half_width(std::vector<double>{0.7}), 0.0);
  const std::vector<double> v{1, 2, 3, 4};
  // sd = sqrt(5/3), t_{0.975,3} = 3.182446305284263
  EXPECT_NEAR(ci95_half_width(v), 3.182446305284263 * std::sqrt(5.0 / 3.0) / 2.0, 1e-12);
  std::vector<double> big(40);
  for (std::size_t i = 0; i < big.size(); ++i) big[i] = static_cast<double>(i % 5);
  double m = 2.0, ss = 0;
  for (double x : big) ss += (x - m) * (x - m);
  EXPECT_NEAR(ci95_half_width(big), 1.959963984540054 * std::sqrt(ss / 39) / std::sqrt(40.0), 1e-12);
}

TEST(Evaluate, FullSampleScoresPerfectly) {
  const auto ds = testutil::uniform_dataset(300, 2);
  const auto s = random_sample(ds, 300, 1);
  const auto report = evaluate(ds, s, StimulusGrid{}, BuiltinSaliencyModel{}, kSmall);
  ASSERT_EQ(report.per_config.size(), 16u);
  EXPECT_NEAR(report.mean.ssim, 1.0, 1e-9);
  EXPECT_NEAR(report.mean.cc, 1.0, 1e-9);
  EXPECT_NEAR(report.mean.sim, 1.0, 1e-9);
  EXPECT_NEAR(report.mean.jsd, 0.0, 1e-9);
  EXPECT_NEAR(report.mean.emd, 0.0, 1e-9);
  EXPECT_EQ(report.per_config.front().point_size, 2);
  EXPECT_EQ(report.per_config.back().point_size, 16);
  EXPECT_DOUBLE_EQ(report.per_config.back().opacity, 1.0);
}

TEST(Evaluate, SingleConfigHasZeroCi) {
  const auto ds = testutil::uniform_dataset(500, 3);
  const auto s = random_sample(ds, 50, 1);
  const auto report = evaluate(ds, s, StimulusGrid{{4}, {0.4}}, BuiltinSaliencyModel{}, kSmall);
  ASSERT_EQ(report.per_config.size(), 1u);
  for (std::size_t m = 0; m < 5; ++m) {
    EXPECT_EQ(report.ci95[m], 0.0);
    EXPECT_EQ(report.mean[m], report.per_config[0].scores[m]);
  }
}

TEST(Evaluate, ParallelMatchesSerial) {
  const auto ds = testutil::uniform_dataset(400, 5);
  const auto s = random_sample(ds, 40, 2);
  const auto a = evaluate(ds, s, StimulusGrid{}, BuiltinSaliencyModel{}, kSmall, 1);
  const auto b = evaluate(ds, s, StimulusGrid{}, BuiltinSaliencyModel{}, kSmall, 3);
  for (std::size_t i = 0; i < a.per_config.size(); ++i)
    for (std::size_t m = 0; m < 5; ++m) EXPECT_EQ(a.per_config[i].scores[m], b.per_config[i].scores[m]);
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                 if (i == 6) throw InvalidArgument("boom");
               }),
               InvalidArgument);
}
